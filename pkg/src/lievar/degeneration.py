"""Base change, one-parameter-subgroup limits, certificates and obstructions.

Conventions: ``(g.mu)(x, y) = g mu(g^-1 x, g^-1 y)``.  A certificate gives a
matrix ``g_t`` (or its inverse) over Q(t); the degeneration is the limit of
``g_t . lambda`` at ``t = 0``, optionally followed by a constant base change
``post_iso`` that identifies the limit with the catalog's target table.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Mapping, Sequence

from .catalog import Catalog, CatalogError, default_catalog, format_ref, parse_ref
from .cohomology import ADJOINT, TRIVIAL, cohomology_profile
from .exactfield import (QQ, QQW, FunctionField, ScalarSyntaxError,
                         format_scalar, join_fields, limit_at_zero, order_at_zero, parse_scalar,
                         poly_gcd, symbols_in)
from .liealg import (LieAlgebra, Subspace, bracket, c_invariant, center,
                     derived_algebra, derived_series, direct_sum_abelian, jacobi_check,
                     lower_central_series, nilpotency_class, quotient, solvability_class,
                     unit, upper_central_series, DegenerateInvariantError)
from .linalg import Matrix, SingularMatrixError, inverse

T_VAR = "t"


class CertificateError(Exception):
    pass


class CertificateParseError(CertificateError, ValueError):
    def __init__(self, msg, line, path=None):
        self.line, self.path = line, path
        super().__init__(f"{path + ':' if path else 'line '}{line}: {msg}")


class NoLimitError(CertificateError, ArithmeticError):
    """Some structure constant of g_t . lambda has a pole at t = 0."""

    def __init__(self, offending):
        self.offending = offending     # list of (i, j, k, order, constant), 1-based
        i, j, k, o, c = offending[0]
        more = f" (+{len(offending) - 1} more)" if len(offending) > 1 else ""
        super().__init__(f"limit does not exist: c_{i},{j}^{k} = {format_scalar(c)} "
                         f"has order {o} at t=0{more}")


# ---------------------------------------------------------------------------
# the action


def apply_base_change(L: LieAlgebra, g: Matrix, g_inv: Matrix | None = None,
                      label: str | None = None) -> LieAlgebra:
    """Structure constants of g . L, i.e. g [g^-1 x, g^-1 y]."""
    n = L.n
    if g.nrows != n or g.ncols != n:
        raise ValueError(f"base change must be {n}x{n}")
    f = join_fields(L.field, g.field)
    g = g.coerce(f)
    A = inverse(g) if g_inv is None else g_inv.coerce(f)
    S = {key: {k: f(c) for k, c in v.items()} for key, v in L.sparse_table().items()}
    z = f.zero
    cols = [[A.rows[a][i] for a in range(n)] for i in range(n)]   # g^-1 e_i
    br = {}
    for i in range(n):
        ci = cols[i]
        for j in range(i + 1, n):
            cj = cols[j]
            v = [z] * n
            for (a, b), vec in S.items():
                if a > b or not ci[a] and not ci[b]:
                    continue
                # contributions of mu(e_a, e_b) and mu(e_b, e_a) together
                coef = ci[a] * cj[b] - ci[b] * cj[a]
                if not coef:
                    continue
                for k, c in vec.items():
                    v[k] = v[k] + coef * c
            if any(v):
                w = g @ tuple(v)
                br[(i, j)] = tuple(w)
    return LieAlgebra.from_brackets(n, br, f, label if label is not None else L.label, L.params,
                                    dict(L.meta))


def t_field(base=QQ) -> FunctionField:
    return FunctionField(base, T_VAR)


def psg_limit(L: LieAlgebra, g: Matrix | None = None, g_inv: Matrix | None = None,
              label: str | None = None) -> LieAlgebra:
    """lim_{t->0} g_t . L  (pass ``g`` or ``g_inv``, or both)."""
    if g is None and g_inv is None:
        raise ValueError("need g or its inverse")
    if g is None:
        g = inverse(g_inv)
    base = g.field.base if isinstance(g.field, FunctionField) else g.field
    tf = t_field(join_fields(base, L.field))
    M = apply_base_change(L.coerce(tf), g.coerce(tf), None if g_inv is None else g_inv.coerce(tf))
    bad = []
    br = {}
    for (i, j), v in M.nonzero_brackets():
        out = {}
        for k, c in enumerate(v):
            if not c:
                continue
            o = order_at_zero(c)
            if o < 0:
                bad.append((i + 1, j + 1, k + 1, o, c))
            elif o == 0:
                out[k] = limit_at_zero(c)
        if out:
            br[(i, j)] = out
    if bad:
        raise NoLimitError(bad)
    R = LieAlgebra.from_brackets(L.n, br, tf.base, label if label is not None else L.label,
                                 (), dict(L.meta))
    assert not jacobi_check(R), "limit of Lie algebras violates Jacobi"
    return R


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class DegenerationCertificate:
    id: str
    source: str              # canonical reference, e.g. g_I[a=2]
    target: str
    kind: str                # "g" or "g_inverse"
    matrix: tuple            # rows of literal strings
    postiso: tuple = ()      # rows of literal strings, or empty
    origin: str = ""
    note: str = ""

    @property
    def n(self) -> int:
        return len(self.matrix)

    def bindings(self) -> dict:
        return parse_ref(self.source)[1]

    def _mat(self, rows, fld):
        env = {k: parse_scalar(v) for k, v in self.bindings().items()}
        return Matrix(len(rows), len(rows), tuple(tuple(parse_scalar(x, fld, env) for x in r)
                                                   for r in rows), fld)

    def matrix_value(self) -> Matrix:
        base = QQW if _uses_w(self.matrix) or _uses_w(self.bindings().values()) else QQ
        return self._mat(self.matrix, t_field(base))

    def postiso_value(self) -> Matrix | None:
        if not self.postiso:
            return None
        base = QQW if _uses_w(self.postiso) or _uses_w(self.bindings().values()) else QQ
        return self._mat(self.postiso, base)


def _uses_w(items) -> bool:
    for x in items:
        if isinstance(x, (tuple, list)):
            if _uses_w(x):
                return True
        elif "w" in symbols_in(x):
            return True
    return False


_SRC = re.compile(r"^(\S+?)\s*(?:\((.*)\))?$")


def _canon_endpoint(text: str, catalog: Catalog | None = None) -> str:
    """``g_I (a=2)`` or ``g_I[a=2]`` -> canonical reference."""
    text = text.strip()
    m = _SRC.match(text)
    if m and m.group(2) is not None and "[" not in text:
        text = f"{m.group(1)}[{m.group(2)}]"
    return canonical_ref(text, catalog)


def canonical_ref(ref: str, catalog: Catalog | None = None) -> str:
    label, b = parse_ref(ref)
    if catalog is not None:
        label = catalog.resolve(label)
    vals = {k: format_scalar(parse_scalar(v)).replace(" ", "") for k, v in sorted(b.items())}
    return format_ref(label, vals)


_CERT_KEYS = ("id", "source", "target", "matrix", "origin", "note")


def parse_certificate(text: str, path: str | None = None, default_id: str = "") -> DegenerationCertificate:
    head = {}
    rows, post = [], []
    cur = rows
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition(":")
        if sep and key.strip() in _CERT_KEYS:
            k = key.strip()
            if k in head:
                raise CertificateParseError(f"duplicate header {k!r}", lineno, path)
            head[k] = (val.strip(), lineno)
            continue
        if sep and key.strip() == "postiso":
            if val.strip():
                raise CertificateParseError("postiso rows go on the following lines", lineno, path)
            cur = post
            continue
        if "matrix" not in head:
            raise CertificateParseError(f"unexpected line {line!r} before 'matrix:'", lineno, path)
        cur.append((tuple(line.split()), lineno))
    for k in ("source", "target", "matrix"):
        if k not in head:
            raise CertificateParseError(f"missing header {k!r}", 1, path)
    kind = head["matrix"][0]
    if kind not in ("g", "g_inverse"):
        raise CertificateParseError(f"matrix must be 'g' or 'g_inverse', got {kind!r}",
                                    head["matrix"][1], path)
    binds = parse_ref(_canon_endpoint_raw(head["source"][0]))[1]
    try:
        env = {k: parse_scalar(v, QQW) for k, v in binds.items()}
    except (ScalarSyntaxError, ZeroDivisionError) as e:
        raise CertificateParseError(str(e), head["source"][1], path)
    tq = t_field(QQW)
    for block, name in ((rows, "matrix"), (post, "postiso")):
        if not block and name == "matrix":
            raise CertificateParseError("empty matrix", head["matrix"][1], path)
        n = len(block)
        for toks, ln in block:
            if len(toks) != n:
                raise CertificateParseError(f"{name} row has {len(toks)} entries, expected {n}", ln, path)
            for tok in toks:
                try:
                    bad = symbols_in(tok) - {"t", "w"} - set(binds)
                    if not bad:
                        parse_scalar(tok, tq, env)
                except ScalarSyntaxError as e:
                    raise CertificateParseError(str(e), ln, path)
                except ZeroDivisionError:
                    raise CertificateParseError(f"division by zero in {tok!r}", ln, path)
                if bad:
                    raise CertificateParseError(f"unknown symbol(s) {sorted(bad)} in {tok!r}", ln, path)
                if name == "postiso" and "t" in symbols_in(tok):
                    raise CertificateParseError("postiso entries must be constants", ln, path)
    if post and len(post) != len(rows):
        raise CertificateParseError("postiso size differs from matrix size", post[0][1], path)
    try:
        src = _canon_endpoint(head["source"][0])
        dst = _canon_endpoint(head["target"][0])
    except (CatalogError, ScalarSyntaxError) as e:
        raise CertificateParseError(str(e), head["source"][1], path)
    cid = head.get("id", (default_id, 0))[0]
    return DegenerationCertificate(cid, src, dst, kind, tuple(r for r, _ in rows),
                                   tuple(r for r, _ in post), head.get("origin", ("", 0))[0],
                                   head.get("note", ("", 0))[0])


def _canon_endpoint_raw(text: str) -> str:
    m = _SRC.match(text.strip())
    if m and m.group(2) is not None and "[" not in text:
        return f"{m.group(1)}[{m.group(2)}]"
    return text.strip()


def serialize_certificate(c: DegenerationCertificate) -> str:
    out = []
    if c.id:
        out.append(f"id: {c.id}")
    out += [f"source: {c.source}", f"target: {c.target}"]
    if c.origin:
        out.append(f"origin: {c.origin}")
    if c.note:
        out.append(f"note: {c.note}")
    out.append(f"matrix: {c.kind}")

    def block(rows):
        w = max(len(x) for r in rows for x in r)
        return ["  ".join(x.rjust(w) for x in r).rstrip() for r in rows]

    out += block(c.matrix)
    if c.postiso:
        out.append("postiso:")
        out += block(c.postiso)
    return "\n".join(out) + "\n"


def load_certificate(path) -> DegenerationCertificate:
    path = Path(path)
    return parse_certificate(path.read_text(encoding="utf-8"), path.name, path.stem)


@dataclass(frozen=True)
class Verdict:
    cert_id: str
    ok: bool
    message: str
    mismatch: tuple = ()     # (i, j, k, got, expected), 1-based

    def line(self) -> str:
        return f"{'OK' if self.ok else 'FAIL'}\t{self.cert_id}\t{self.message}"


def verify_certificate(cert: DegenerationCertificate, catalog: Catalog | None = None) -> Verdict:
    catalog = catalog or default_catalog()
    try:
        src = catalog.get(cert.source)
        dst = catalog.get(cert.target)
    except CatalogError as e:
        return Verdict(cert.id, False, f"label error: {e}")
    if src.params or dst.params:
        return Verdict(cert.id, False, "endpoints must be fully specialized")
    if cert.n != src.n or cert.n != dst.n:
        return Verdict(cert.id, False, f"dimension mismatch: matrix {cert.n}, "
                                       f"source {src.n}, target {dst.n}")
    try:
        M = cert.matrix_value()
        g, g_inv = (M, None) if cert.kind == "g" else (None, M)
        lim = psg_limit(src, g=g, g_inv=g_inv)
        P = cert.postiso_value()
        if P is not None:
            lim = apply_base_change(lim, P)
    except SingularMatrixError as e:
        return Verdict(cert.id, False, f"singular matrix: {e}")
    except NoLimitError as e:
        return Verdict(cert.id, False, str(e), tuple(e.offending[:1]))
    except (ScalarSyntaxError, ZeroDivisionError, ArithmeticError) as e:
        return Verdict(cert.id, False, f"arithmetic error: {e}")
    f = join_fields(lim.field, dst.field)
    a, b = lim.coerce(f), dst.coerce(f)
    for (i, j) in ((i, j) for i in range(src.n) for j in range(i + 1, src.n)):
        va, vb = a.structure(i, j), b.structure(i, j)
        if va != vb:
            k = next(k for k in range(src.n) if va[k] != vb[k])
            return Verdict(cert.id, False,
                           f"mismatch at c_{i + 1},{j + 1}^{k + 1}: limit has "
                           f"{format_scalar(va[k])}, target has {format_scalar(vb[k])}",
                           ((i + 1, j + 1, k + 1, va[k], vb[k]),))
    return Verdict(cert.id, True, f"{cert.source} -> {cert.target}")


def _verify_job(args):
    path, catdir = args
    cat = Catalog.load(catdir) if catdir else default_catalog()
    try:
        cert = load_certificate(path)
    except CertificateParseError as e:
        return Verdict(Path(path).stem, False, f"parse error: {e}")
    return verify_certificate(cert, cat)


def verify_paths(paths: Sequence, catalog_dir=None, jobs: int | None = None) -> list[Verdict]:
    """Verify certificate files concurrently; results come back in input order."""
    args = [(str(p), str(catalog_dir) if catalog_dir else None) for p in paths]
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(args) <= 1:
        return [_verify_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_verify_job, args))


def certificate_dir(catalog_dir=None) -> Path:
    from .catalog import DATA_DIR
    d = Path(catalog_dir or os.environ.get("LIEVAR_CATALOG") or DATA_DIR)
    return d / "certs"


def certificate_paths(catalog_dir=None) -> list[Path]:
    return sorted(certificate_dir(catalog_dir).glob("*.cert"))


class CertStore:
    """Verified certificates as a directed graph on canonical references."""

    def __init__(self, certs: Mapping[str, DegenerationCertificate], verdicts: Mapping[str, Verdict]):
        self.certs = dict(certs)
        self.verdicts = dict(verdicts)
        self.edges = {}
        for cid, c in sorted(self.certs.items()):
            if self.verdicts[cid].ok:
                self.edges.setdefault((c.source, c.target), cid)
        self._succ = {}
        self._pred = {}
        for (a, b) in self.edges:
            self._succ.setdefault(a, set()).add(b)
            self._pred.setdefault(b, set()).add(a)

    @classmethod
    def load(cls, catalog_dir=None, jobs: int | None = 1, catalog: Catalog | None = None) -> "CertStore":
        paths = certificate_paths(catalog_dir)
        certs = {}
        for p in paths:
            c = load_certificate(p)
            if c.id in certs:
                raise CertificateError(f"duplicate certificate id {c.id!r}")
            certs[c.id] = c
        if jobs and jobs > 1:
            vs = verify_paths(paths, catalog_dir, jobs)
        else:
            catalog = catalog or (Catalog.load(catalog_dir) if catalog_dir else default_catalog())
            vs = [verify_certificate(certs[load_certificate(p).id], catalog) for p in paths]
        return cls(certs, {v.cert_id: v for v in vs})

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts.values() if not v.ok]

    def nodes(self) -> set:
        return set(self._succ) | set(self._pred)

    def reachable(self, src: str) -> dict:
        """{node: path of certificate ids} for every node reachable from ``src``."""
        out = {src: ()}
        todo = [src]
        while todo:
            a = todo.pop(0)
            for b in sorted(self._succ.get(a, ())):
                if b not in out:
                    out[b] = out[a] + (self.edges[(a, b)],)
                    todo.append(b)
        return out

    def ancestors(self, dst: str) -> set:
        out = {dst}
        todo = [dst]
        while todo:
            b = todo.pop()
            for a in self._pred.get(b, ()):
                if a not in out:
                    out.add(a)
                    todo.append(a)
        return out

    def path(self, src: str, dst: str):
        return self.reachable(src).get(dst)


# ---------------------------------------------------------------------------
# fingerprints and the obstruction battery


@dataclass(frozen=True)
class InvariantFingerprint:
    n: int
    lower_central: tuple
    derived: tuple
    upper_central: tuple
    h: tuple               # adjoint cohomology h_0..h_n
    b: tuple               # trivial cohomology b_0..b_n
    z: tuple               # adjoint cocycles z_0..z_n
    dim_derived: int
    dim_center: int
    nil_class: int | None
    solv_class: int | None
    der_dim: int
    orbit_dim: int

    def check(self):
        assert self.h[0] == self.dim_center
        assert self.b[1] == self.n - self.dim_derived
        assert self.der_dim == self.z[1]
        assert self.orbit_dim == self.n * self.n - self.der_dim
        assert self.h[1] == self.der_dim - (self.n - self.dim_center)
        assert sum((-1) ** j * x for j, x in enumerate(self.h)) == 0 or self.n == 0
        assert sum((-1) ** j * x for j, x in enumerate(self.b)) == 0 or self.n == 0
        return self

    def table_row(self) -> str:
        return (" ".join(map(str, self.h)) + " | " + " ".join(map(str, self.b[1:])) + " | "
                + f"{_cls(self.nil_class)} {_cls(self.solv_class)} {self.orbit_dim}")


def _cls(x):
    return "-" if x is None else str(x)


def fingerprint(L: LieAlgebra, **kw) -> InvariantFingerprint:
    adj = cohomology_profile(L, ADJOINT, **kw)
    tri = cohomology_profile(L, TRIVIAL, **kw)
    lcs = lower_central_series(L)
    ds = derived_series(L)
    ucs = upper_central_series(L)
    der = adj.z[1]
    return InvariantFingerprint(
        L.n, tuple(s.dim for s in lcs), tuple(s.dim for s in ds), tuple(s.dim for s in ucs[1:]),
        adj.h, tri.h, adj.z, ds[1].dim if len(ds) > 1 else (0 if L.n == 0 else ds[0].dim),
        ucs[1].dim if len(ucs) > 1 else 0, nilpotency_class(L), solvability_class(L),
        der, L.n * L.n - der)


OBSTRUCTED, PASSED, UNKNOWN = "obstructed", "passed", "unknown"


@dataclass(frozen=True)
class Criterion:
    id: str
    src: object
    dst: object
    verdict: str
    relation: str = ""     # the inequality that must hold for a degeneration

    def reason(self) -> str:
        s, d = _cls(self.src) if self.src is None or isinstance(self.src, int) else self.src, \
            _cls(self.dst) if self.dst is None or isinstance(self.dst, int) else self.dst
        s = "inf" if self.src is None and self.id in ("n", "s") else s
        d = "inf" if self.dst is None and self.id in ("n", "s") else d
        bad = {">=": "<", "<=": ">", ">": "<=", "<": ">=", "==": "!="}.get(self.relation, "?")
        return f"{self.id} {s}{bad}{d}"


@dataclass(frozen=True)
class ObstructionReport:
    entries: tuple

    @property
    def obstructed(self) -> bool:
        return any(e.verdict == OBSTRUCTED for e in self.entries)

    def violations(self) -> list[Criterion]:
        return [e for e in self.entries if e.verdict == OBSTRUCTED]

    def violated_ids(self) -> list[str]:
        return [e.id for e in self.violations()]

    def first_reason(self) -> str:
        v = self.violations()
        return v[0].reason() if v else ""

    def reasons(self) -> str:
        """Every violated inequality, in battery order."""
        return ", ".join(e.reason() for e in self.violations())


def _inf(x):
    return float("inf") if x is None else x


def _pad(seq, n):
    seq = tuple(seq)
    return seq + (seq[-1] if seq else 0,) * (n - len(seq))


def obstruction_battery(src: InvariantFingerprint, dst: InvariantFingerprint) -> ObstructionReport:
    """Necessary conditions for src ->deg dst, in a fixed order."""
    if src.n != dst.n:
        raise ValueError(f"dimension mismatch: {src.n} vs {dst.n}")
    same = src == dst
    out = []

    def add(cid, a, b, rel, holds):
        out.append(Criterion(cid, a, b, PASSED if holds else OBSTRUCTED, rel))

    # strict conditions only bind when the two algebras are certainly not isomorphic
    add("orbit", src.orbit_dim, dst.orbit_dim, ">", same or src.orbit_dim > dst.orbit_dim)
    add("der", src.der_dim, dst.der_dim, "<", same or src.der_dim < dst.der_dim)
    add("derived", src.dim_derived, dst.dim_derived, ">=", dst.dim_derived <= src.dim_derived)
    m = max(len(src.upper_central), len(dst.upper_central), 1)
    us, ud = _pad(src.upper_central or (0,), m), _pad(dst.upper_central or (0,), m)
    for j in range(m):
        add(f"Z{j + 1}", us[j], ud[j], "<=", ud[j] >= us[j])
    for j in range(src.n + 1):
        add(f"z{j}", src.z[j], dst.z[j], "<=", dst.z[j] >= src.z[j])
    for j in range(src.n + 1):
        add(f"h{j}", src.h[j], dst.h[j], "<=", dst.h[j] >= src.h[j])
    for j in range(src.n + 1):
        add(f"b{j}", src.b[j], dst.b[j], "<=", dst.b[j] >= src.b[j])
    add("n", src.nil_class, dst.nil_class, ">=", _inf(src.nil_class) >= _inf(dst.nil_class))
    add("s", src.solv_class, dst.solv_class, ">=", _inf(src.solv_class) >= _inf(dst.solv_class))
    return ObstructionReport(tuple(out))


# ---------------------------------------------------------------------------
# central quotients


@dataclass(frozen=True)
class QuotientVerdict:
    obstructed: bool
    depth: int = 0                    # number of quotient steps taken
    d: int = 0
    report: ObstructionReport | None = None

    def reason(self) -> str:
        if not self.obstructed:
            return ""
        if self.report is None:
            return f"quotient[{self.depth}] center dims d={self.d}<0"
        return f"quotient[{self.depth}] {self.report.first_reason()}"


def central_quotient_pair(G: LieAlgebra, H: LieAlgebra):
    """(G/Z(G), H/Z(H) + C^d, d) with d = dim Z(H) - dim Z(G)."""
    zg, zh = center(G), center(H)
    d = zh.dim - zg.dim
    q1 = quotient(G, zg, label=f"{G.label}/Z")
    if d < 0:
        return q1, None, d
    q2 = direct_sum_abelian(quotient(H, zh, label=f"{H.label}/Z"), d, label=f"{H.label}/Z+C^{d}")
    return q1, q2, d


def central_quotient_obstruction(G: LieAlgebra, H: LieAlgebra, _depth: int = 1,
                                 _fp=None) -> QuotientVerdict:
    """If G ->deg H (nilpotent), then G/Z(G) ->deg H/Z(H) + C^d; test that recursively."""
    if nilpotency_class(G) is None or nilpotency_class(H) is None:
        raise ValueError("central quotient rule needs nilpotent algebras")
    if G.n != H.n:
        raise ValueError("dimension mismatch")
    if G.is_abelian():
        return QuotientVerdict(False, _depth - 1)
    q1, q2, d = central_quotient_pair(G, H)
    if q2 is None:
        return QuotientVerdict(True, _depth, d)
    fp = _fp or fingerprint
    rep = obstruction_battery(fp(q1), fp(q2))
    if rep.obstructed:
        return QuotientVerdict(True, _depth, d, rep)
    return central_quotient_obstruction(q1, q2, _depth + 1, _fp)


# ---------------------------------------------------------------------------
# the ideal property R: a codimension-1 ideal I with [I, [I, I]] = 0


@dataclass(frozen=True)
class IdealWitness:
    functional: tuple | None          # phi with I = ker(phi), when rational
    subspace: Subspace | None
    description: str


def _trilinear_conditions(L: LieAlgebra, basis, depth: int = 3):
    """Coordinates of [a, [b, c]] (depth 3) or [b, c] (depth 2) over ``basis``."""
    out = []
    brs = {}
    for bi, b in enumerate(basis):
        for ci, c in enumerate(basis):
            if ci <= bi:
                continue
            brs[(bi, ci)] = bracket(L, b, c)
    if depth == 2:
        for v in brs.values():
            out.extend(v)
        return out
    for a in basis:
        for v in brs.values():
            out.extend(bracket(L, a, v))
    return out


def _hyperplane_ok(L: LieAlgebra, D: Subspace, comp, phi, depth: int = 3) -> Subspace | None:
    """I = D + {sum y_i c_i : sum phi_i y_i = 0}; return I if [I,[I,I]] = 0 (or [I,I] = 0)."""
    n, f = L.n, L.field
    m = len(comp)
    vecs = list(D.basis)
    p = next(i for i in range(m) if phi[i])
    for i in range(m):
        if i == p:
            continue
        v = [f.zero] * n
        v[comp[i]] = f(phi[p])
        v[comp[p]] = f(-phi[i])
        vecs.append(tuple(v))
    I = Subspace.span(vecs, n, f)
    if any(_trilinear_conditions(L, I.basis, depth)):
        return None
    return I


def ideal_property_R(L: LieAlgebra, groebner: bool = True) -> IdealWitness | None:
    """Decide whether L has a codimension-1 subspace I >= [L, L] with [I, [I, I]] = 0."""
    return _codim1_ideal(L, 3, groebner)


def abelian_ideal_codim1(L: LieAlgebra, groebner: bool = True) -> IdealWitness | None:
    """Decide whether L has an abelian codimension-1 subspace I >= [L, L].

    Like property R this is a closed condition on laws, so a source that has
    one cannot degenerate to a target that has none.
    """
    return _codim1_ideal(L, 2, groebner)


def _codim1_ideal(L: LieAlgebra, depth: int, groebner: bool) -> IdealWitness | None:
    if isinstance(L.field, FunctionField):
        raise ValueError("ideal property needs a specialized algebra")
    n, f = L.n, L.field
    D = derived_algebra(L)
    if D.dim >= n:
        return None
    comp = [unit(n, i, f) for i in D.complement_indices()]
    cidx = D.complement_indices()
    m = len(comp)
    # boundary / coordinate hyperplanes and small rational ones first
    cand = [tuple(1 if k == i else 0 for k in range(m)) for i in range(m)]
    for coeffs in product((-1, 0, 1, 2), repeat=m):
        if any(coeffs) and coeffs not in cand:
            cand.append(coeffs)
    for phi in cand:
        I = _hyperplane_ok(L, D, cidx, phi, depth)
        if I is not None:
            return IdealWitness(tuple(phi), I, "rational hyperplane")
    if m == 1:
        return None
    if m == 2:
        return _ideal_R_pencil(L, D, cidx, depth)
    if not groebner:
        raise NotImplementedError("complement dimension > 2 needs the Groebner route")
    return _ideal_R_groebner(L, D, cidx, depth)


def _ideal_R_pencil(L: LieAlgebra, D: Subspace, cidx, depth: int = 3) -> IdealWitness | None:
    """phi = (1, u): one affine chart of P^1 (the boundary points were tried already)."""
    n, f = L.n, L.field
    pf = FunctionField(f if not isinstance(f, FunctionField) else f.base, "u")
    u = pf.gen
    Lu = L.coerce(pf)
    v = [pf.zero] * n
    v[cidx[0]] = u
    v[cidx[1]] = -pf.one
    basis = [tuple(pf(x) for x in b) for b in D.basis] + [tuple(v)]
    conds = [c for c in _trilinear_conditions(Lu, basis, depth) if c]
    if not conds:
        return IdealWitness(None, None, "every hyperplane containing [L,L] works")
    g = None
    for c in conds:
        p = c.num
        g = p if g is None else poly_gcd(g, p)
    if g.degree < 1:
        return None
    return IdealWitness(None, None, f"hyperplane x_{cidx[0] + 1}* + u x_{cidx[1] + 1}* "
                                    f"with u a root of {g}")


def _ideal_R_groebner(L: LieAlgebra, D: Subspace, cidx, depth: int = 3) -> IdealWitness | None:
    import sympy
    n, f = L.n, L.field
    m = len(cidx)
    w = sympy.Symbol("w")

    def to_sym(c):
        if f is QQW:
            return sympy.Rational(c.a.numerator, c.a.denominator) + \
                sympy.Rational(c.b.numerator, c.b.denominator) * w
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)

    S = {key: {k: to_sym(c) for k, c in vec.items()} for key, vec in L.sparse_table().items()}

    def br(x, y):
        out = [sympy.Integer(0)] * n
        for a, xa in x.items():
            for b, yb in y.items():
                vec = S.get((a, b))
                if vec:
                    for k, c in vec.items():
                        out[k] += xa * yb * c
        return {k: sympy.expand(v) for k, v in enumerate(out) if v != 0}

    for chart in range(m):
        ys = sympy.symbols(f"y0:{m}")
        phi = [ys[i] if i != chart else sympy.Integer(1) for i in range(m)]
        # chart phi_chart = 1, phi_i = 0 for i < chart (earlier charts cover the rest)
        for i in range(chart):
            phi[i] = sympy.Integer(0)
        free = [ys[i] for i in range(chart + 1, m)]
        basis = [{k: to_sym(c) for k, c in enumerate(b) if c} for b in D.basis]
        for i in range(m):
            if i == chart:
                continue
            basis.append({cidx[i]: sympy.Integer(1), cidx[chart]: -phi[i]})
        eqs = set()
        brs = [br(b, c) for bi, b in enumerate(basis) for ci, c in enumerate(basis) if ci > bi]
        outer = [br(a, v) for a in basis for v in brs] if depth == 3 else brs
        for v in outer:
            for val in v.values():
                val = sympy.expand(val)
                if val != 0:
                    eqs.add(val)
        gens = free + ([w] if f is QQW else [])
        if f is QQW:
            eqs.add(w ** 2 - w + 1)
        if not eqs:
            return IdealWitness(None, None, f"chart {chart}: every hyperplane works")
        if not gens:
            continue
        G = sympy.groebner(list(eqs), *gens, order="lex")
        if list(G.exprs) != [1]:
            return IdealWitness(None, None, f"chart {chart}: solutions of {list(G.exprs)}")
    return None


# ---------------------------------------------------------------------------
# trace invariants c_ij (solvable, non-nilpotent algebras)


def c_invariants(L: LieAlgebra, upto: int = 3) -> dict:
    """{(i, j): value} for the c_ij that are well-defined invariants of L."""
    out = {}
    if nilpotency_class(L) is not None or isinstance(L.field, FunctionField):
        return out
    for i in range(1, upto + 1):
        for j in range(1, upto + 1):
            try:
                v = c_invariant(L, i, j, exact=True)
            except DegenerateInvariantError:
                continue
            if v is not None:
                out[(i, j)] = v
    return out


# ---------------------------------------------------------------------------
# comparison


DEGENERATES = "DEGENERATES"
OBSTRUCTED_S = "OBSTRUCTED"
UNKNOWN_S = "UNKNOWN"


@dataclass(frozen=True)
class Comparison:
    status: str
    src: str
    dst: str
    certs: tuple = ()
    reason: str = ""
    via: tuple = ()                   # (W, Y) when the obstruction was propagated

    def line(self) -> str:
        if self.status == DEGENERATES:
            ev = "trivial" if not self.certs else " ".join(f"cert:{c}" for c in self.certs)
            return f"{DEGENERATES} {ev}"
        if self.status == OBSTRUCTED_S:
            via = f" via {self.via[0]} -/-> {self.via[1]}" if self.via else ""
            return f"{OBSTRUCTED_S} {self.reason}{via}"
        return UNKNOWN_S


class Comparator:
    """Caches fingerprints and per-pair direct obstructions."""

    def __init__(self, catalog: Catalog | None = None, store: CertStore | None = None,
                 use_quotients: bool = True, use_ideal: bool = True, use_traces: bool = True):
        self.catalog = catalog or default_catalog()
        self.store = store if store is not None else CertStore({}, {})
        self.use_quotients, self.use_ideal, self.use_traces = use_quotients, use_ideal, use_traces
        self._alg, self._fp, self._R, self._A, self._c, self._direct = {}, {}, {}, {}, {}, {}

    def canon(self, ref: str) -> str:
        return canonical_ref(ref, self.catalog)

    def algebra(self, ref: str) -> LieAlgebra:
        ref = self.canon(ref)
        if ref not in self._alg:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                self._alg[ref] = self.catalog.get(ref)
        return self._alg[ref]

    def fingerprint(self, ref: str) -> InvariantFingerprint:
        ref = self.canon(ref)
        if ref not in self._fp:
            self._fp[ref] = fingerprint(self.algebra(ref))
        return self._fp[ref]

    def property_R(self, ref: str):
        ref = self.canon(ref)
        if ref not in self._R:
            L = self.algebra(ref)
            self._R[ref] = "n/a" if L.params else ideal_property_R(L)
        return self._R[ref]

    def property_A(self, ref: str):
        ref = self.canon(ref)
        if ref not in self._A:
            L = self.algebra(ref)
            self._A[ref] = "n/a" if L.params else abelian_ideal_codim1(L)
        return self._A[ref]

    def traces(self, ref: str) -> dict:
        ref = self.canon(ref)
        if ref not in self._c:
            self._c[ref] = c_invariants(self.algebra(ref)) if self.algebra(ref).n <= 5 else {}
        return self._c[ref]

    def direct_obstruction(self, src: str, dst: str) -> str:
        """Reason string if some criterion rules out src ->deg dst, else ''."""
        src, dst = self.canon(src), self.canon(dst)
        key = (src, dst)
        if key in self._direct:
            return self._direct[key]
        r = self._direct_uncached(src, dst)
        self._direct[key] = r
        return r

    def _direct_uncached(self, src, dst) -> str:
        G, H = self.algebra(src), self.algebra(dst)
        if G.n != H.n:
            return f"dim {G.n}!={H.n}"
        if src == dst:
            return ""
        fs, fd = self.fingerprint(src), self.fingerprint(dst)
        rep = obstruction_battery(fs, fd)
        if rep.obstructed:
            return rep.reasons()
        if self.use_quotients and fs.nil_class is not None and fd.nil_class is not None:
            q = central_quotient_obstruction(G, H)
            if q.obstructed:
                return q.reason()
        if self.use_ideal and not G.params and not H.params:
            rs, rd = self.property_R(src), self.property_R(dst)
            if rs is not None and rd is None:
                return "I source has R, target has none"
            ra, rb = self.property_A(src), self.property_A(dst)
            if ra is not None and rb is None:
                return "A source has an abelian codim-1 ideal, target has none"
        if self.use_traces:
            cs, cd = self.traces(src), self.traces(dst)
            for key in sorted(set(cs) & set(cd)):
                if cs[key] != cd[key]:
                    return (f"c{key[0]}{key[1]} {format_scalar(cs[key])}!="
                            f"{format_scalar(cd[key])}")
        return ""

    def compare(self, src: str, dst: str) -> Comparison:
        src, dst = self.canon(src), self.canon(dst)
        if src == dst:
            return Comparison(DEGENERATES, src, dst)
        p = self.store.path(src, dst)
        if p is not None:
            return Comparison(DEGENERATES, src, dst, p)
        r = self.direct_obstruction(src, dst)
        if r:
            return Comparison(OBSTRUCTED_S, src, dst, reason=r)
        n = self.algebra(src).n
        ups = sorted(self.store.ancestors(src))
        downs = sorted(self.store.reachable(dst))
        for W in ups:
            for Y in downs:
                if (W, Y) == (src, dst) or self.algebra(W).n != n or self.algebra(Y).n != n:
                    continue
                if self.store.path(W, Y) is not None:
                    continue
                r = self.direct_obstruction(W, Y)
                if r:
                    return Comparison(OBSTRUCTED_S, src, dst, reason=r, via=(W, Y))
        return Comparison(UNKNOWN_S, src, dst)


def compare(src: str, dst: str, catalog: Catalog | None = None,
            store: CertStore | None = None) -> Comparison:
    return Comparator(catalog, store if store is not None else CertStore.load(catalog=catalog)).compare(src, dst)
