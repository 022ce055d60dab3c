"""Catalog of Lie algebras: the ``.lie`` file format, lookup and named sets.

File grammar (one algebra per file, line oriented, ``#`` comments)::

    name: g_I
    alias: g_{7,1.1(i_lambda)}
    dim: 7
    field: QQ
    params: a (exclude: 0)
    flags: type1
    note: free text
    bracket 2 5 = (1-a) x7
    bracket 2 3 = 1 x5 + 1 x7

Algebras are addressed by *references*: a label optionally followed by
parameter bindings, e.g. ``g_I[a=1-w]`` or ``L4.g4[a=2,b=3]``.
"""

from __future__ import annotations

import os
import re
import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping

from .exactfield import (QQ, QQW, FunctionField, ScalarSyntaxError, format_scalar,
                         join_fields, field_of, parse_scalar, symbols_in)
from .liealg import LieAlgebra, jacobi_check

DATA_DIR = Path(__file__).parent / "data" / "catalog"


class CatalogError(Exception):
    pass


class UnknownLabelError(CatalogError, KeyError):
    def __str__(self):
        return f"unknown label: {self.args[0]}"


class CatalogParseError(CatalogError, ValueError):
    def __init__(self, msg, line, col=1, path=None):
        self.line, self.col, self.path = line, col, path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}:{col}: {msg}")


class ExcludedValueWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Param:
    name: str
    exclude: tuple = ()      # excluded values as literal strings


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    alias: str
    dim: int
    field: str
    params: tuple            # of Param
    flags: tuple
    note: str
    brackets: tuple          # of (i, j, ((coef_text, k), ...)), 1-based
    comments: tuple = ()     # of (position, text)

    @property
    def param_names(self) -> tuple:
        return tuple(p.name for p in self.params)

    @property
    def type1(self) -> bool:
        return "type1" in self.flags

    @property
    def excluded(self) -> bool:
        return "excluded" in self.flags


# ---------------------------------------------------------------------------
# parsing / serialization

_HEADER = ("name", "alias", "dim", "field", "params", "flags", "note")
_BRACKET = re.compile(r"bracket\s+(\S+)\s+(\S+)\s*=\s*(.*)$")
_PARAM = re.compile(r"\s*([A-Za-z_]\w*)(?:\s*\(\s*exclude:\s*([^)]*)\))?\s*,?")


def _split_terms(rhs: str, lineno: int, col0: int):
    """Split ``c1 x3 + c2 x7`` into [(c1, 3), (c2, 7)] at top-level ``x<k>`` tokens."""
    terms = []
    depth = 0
    start = 0
    i = 0
    while i < len(rhs):
        ch = rhs[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "x" and depth == 0 and (i == 0 or not (rhs[i - 1].isalnum() or rhs[i - 1] == "_")):
            m = re.match(r"x(\d+)", rhs[i:])
            if m:
                coef = rhs[start:i].strip()
                if terms:
                    if not coef.startswith("+"):
                        raise CatalogParseError("expected '+' between terms", lineno, col0 + start + 1)
                    coef = coef[1:].strip()
                terms.append((coef.replace(" ", ""), int(m.group(1))))
                i += len(m.group(0))
                start = i
                continue
        i += 1
    if rhs[start:].strip():
        raise CatalogParseError(f"trailing text {rhs[start:].strip()!r}", lineno, col0 + start + 1)
    if not terms:
        raise CatalogParseError("empty bracket right-hand side", lineno, col0 + 1)
    return tuple(terms)


_PROBES = ("3/7", "-5/2", "11")


def _probe(terms, pnames, sign):
    """Values of a bracket at a few parameter points, to compare duplicate entries."""
    out = []
    for v in _PROBES:
        env = {p: parse_scalar(v) + k for k, p in enumerate(sorted(pnames))}
        vec = {}
        for c, k in terms:
            vec[k] = vec.get(k, 0) + sign * parse_scalar(c or "1", QQ, env)
        out.append(tuple(sorted((k, x) for k, x in vec.items() if x)))
    return tuple(out)


def parse(text: str, path=None) -> CatalogEntry:
    head = {}
    brackets = []
    comments = []
    content = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append((content, line))
            continue
        content += 1
        m = _BRACKET.match(line)
        if m:
            try:
                i, j = int(m.group(1)), int(m.group(2))
            except ValueError:
                raise CatalogParseError("bracket indices must be integers", lineno, path=path)
            brackets.append((i, j, (m.group(3), m.start(3)), lineno))
            continue
        key, sep, val = line.partition(":")
        key = key.strip()
        if not sep or key not in _HEADER:
            raise CatalogParseError(f"unrecognized line {line!r}", lineno, path=path)
        if key in head:
            raise CatalogParseError(f"duplicate header {key!r}", lineno, path=path)
        head[key] = (val.strip(), lineno)
    for k in ("name", "dim"):
        if k not in head:
            raise CatalogParseError(f"missing header {k!r}", 1, path=path)
    try:
        dim = int(head["dim"][0])
    except ValueError:
        raise CatalogParseError("dim must be an integer", head["dim"][1], path=path)
    params = []
    if "params" in head:
        s, ln = head["params"]
        pos = 0
        while pos < len(s):
            m = _PARAM.match(s, pos)
            if not m or m.end() == pos:
                raise CatalogParseError(f"bad params syntax {s!r}", ln, pos + 1, path=path)
            excl = tuple(v.strip() for v in m.group(2).split(",")) if m.group(2) else ()
            params.append(Param(m.group(1), excl))
            pos = m.end()
    pnames = {p.name for p in params}
    seen = {}
    out_br = []
    for i, j, (rhs, col), ln in brackets:
        for a in (i, j):
            if not 1 <= a <= dim:
                raise CatalogParseError(f"index {a} out of range 1..{dim}", ln, path=path)
        if i == j:
            raise CatalogParseError("bracket of a basis vector with itself", ln, path=path)
        terms = _split_terms(rhs, ln, col)
        for c, k in terms:
            if not 1 <= k <= dim:
                raise CatalogParseError(f"index x{k} out of range 1..{dim}", ln, path=path)
            c = c or "1"
            bad = symbols_in(c) - pnames - {"w"}
            if bad:
                raise CatalogParseError(f"unknown symbol(s) {sorted(bad)} in {c!r}", ln, path=path)
            try:
                parse_scalar(c, QQ, {p: 1 for p in pnames})
            except (ScalarSyntaxError, ZeroDivisionError) as e:
                raise CatalogParseError(str(e), ln, path=path)
        key = (min(i, j), max(i, j))
        vec = _probe(terms, pnames, 1 if i < j else -1)
        if key in seen:
            if seen[key][1] != vec:
                raise CatalogParseError(f"antisymmetry conflict: [{key[0]},{key[1]}] also given "
                                        f"on line {seen[key][0]} with a different value", ln, path=path)
        seen[key] = (ln, vec)
        out_br.append((i, j, terms))
    flags = tuple(head.get("flags", ("", 0))[0].split())
    return CatalogEntry(head["name"][0], head.get("alias", ("", 0))[0], dim,
                        head.get("field", ("", 0))[0], tuple(params), flags,
                        head.get("note", ("", 0))[0], tuple(out_br), tuple(comments))


def serialize(e: CatalogEntry) -> str:
    lines = [f"name: {e.label}"]
    if e.alias:
        lines.append(f"alias: {e.alias}")
    lines.append(f"dim: {e.dim}")
    if e.field:
        lines.append(f"field: {e.field}")
    if e.params:
        ps = []
        for p in e.params:
            ps.append(f"{p.name} (exclude: {', '.join(p.exclude)})" if p.exclude else p.name)
        lines.append("params: " + " ".join(ps))
    if e.flags:
        lines.append("flags: " + " ".join(e.flags))
    if e.note:
        lines.append(f"note: {e.note}")
    for i, j, terms in e.brackets:
        body = " + ".join(f"{c} x{k}" if c else f"x{k}" for c, k in terms)
        lines.append(f"bracket {i} {j} = {body}")
    if e.comments:
        out = []
        pending = list(e.comments)
        for pos, line in enumerate(lines):
            while pending and pending[0][0] <= pos:
                out.append(pending.pop(0)[1])
            out.append(line)
        out += [c for _, c in pending]
        lines = out
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# references and bindings

_REF = re.compile(r"^([^\[\]\s]+)(?:\[(.*)\])?$")


def parse_ref(ref: str) -> tuple[str, dict]:
    m = _REF.match(ref.strip())
    if not m:
        raise CatalogError(f"bad algebra reference {ref!r}")
    label, b = m.group(1), m.group(2)
    binds = {}
    if b:
        for item in b.split(","):
            k, sep, v = item.partition("=")
            if not sep:
                raise CatalogError(f"bad binding {item!r} in {ref!r}")
            binds[k.strip()] = v.strip()
    return label, binds


def format_ref(label: str, bindings: Mapping | None = None) -> str:
    if not bindings:
        return label
    inner = ",".join(f"{k}={v if isinstance(v, str) else format_scalar(v)}"
                     for k, v in bindings.items())
    return f"{label}[{inner}]"


def parse_binding_value(v):
    if isinstance(v, str):
        return parse_scalar(v, QQ)
    return v


def _bound_field(values):
    f = QQ
    for v in values:
        f = join_fields(f, field_of(v))
    return f


def build_algebra(e: CatalogEntry, bindings: Mapping | None = None, *, check_excluded=True) -> LieAlgebra:
    bindings = {k: parse_binding_value(v) for k, v in (bindings or {}).items()}
    for k in bindings:
        if k not in e.param_names:
            raise CatalogError(f"{e.label} has no parameter {k!r}")
    if check_excluded:
        for p in e.params:
            if p.name in bindings:
                for ex in p.exclude:
                    if parse_scalar(ex, QQ) == bindings[p.name]:
                        warnings.warn(f"{e.label}: {p.name}={ex} is an excluded value",
                                      ExcludedValueWarning, stacklevel=3)
    free = [p for p in e.param_names if p not in bindings]
    uses_w = any("w" in symbols_in(c or "1") for _, _, terms in e.brackets for c, _ in terms)
    base = join_fields(_bound_field(bindings.values()), QQW if uses_w else QQ)
    if len(free) > 1:
        raise CatalogError(f"{e.label}: bind all but one of the parameters {free} "
                           "(one active parameter at a time)")
    fld = FunctionField(base, free[0]) if free else base
    br = {}
    for i, j, terms in e.brackets:
        vec = {}
        for c, k in terms:
            val = parse_scalar(c or "1", fld, bindings)
            vec[k] = vec.get(k, fld.zero) + val
        br[(i, j)] = vec
    label = format_ref(e.label, {k: format_scalar(v) for k, v in bindings.items()})
    meta = {"alias": e.alias, "type1": e.type1, "excluded": e.excluded,
            "exclude": {p.name: tuple(parse_scalar(x, QQ) for x in p.exclude) for p in e.params}}
    return LieAlgebra.from_brackets(e.dim, br, fld, label, tuple(free), meta, one_based=True)


# ---------------------------------------------------------------------------
# the catalog


def _norm_label(s: str) -> str:
    s = s.replace("alpha", "a").replace("lambda", "l").replace("^", "").replace(" ", "")
    return re.sub(r"[_{},]", "", s)


class Catalog:
    def __init__(self, entries: Mapping[str, CatalogEntry]):
        self.entries = dict(entries)

    @classmethod
    def load(cls, directory=None) -> "Catalog":
        directory = Path(directory or os.environ.get("LIEVAR_CATALOG") or DATA_DIR)
        entries = {}
        for path in sorted(directory.glob("*.lie")):
            e = parse(path.read_text(encoding="utf-8"), path=path.name)
            if e.label in entries:
                raise CatalogError(f"duplicate label {e.label!r} ({path.name})")
            entries[e.label] = e
        return cls(entries)

    @property
    def directory(self):
        return Path(os.environ.get("LIEVAR_CATALOG") or DATA_DIR)

    def __contains__(self, ref):
        try:
            self.resolve(parse_ref(ref)[0])
        except UnknownLabelError:
            return False
        return True

    def labels(self):
        return sorted(self.entries)

    def _synonyms(self) -> dict:
        if not hasattr(self, "_syn"):
            syn, clash = {}, set()
            for lab, e in self.entries.items():
                for name in (lab, e.alias.split(" (")[0]):
                    k = _norm_label(name)
                    if k in syn and syn[k] != lab:
                        clash.add(k)
                    syn[k] = lab
            self._syn = {k: v for k, v in syn.items() if k not in clash}
        return self._syn

    def resolve(self, label: str) -> str:
        """Catalog label for ``label``; also accepts loose spellings like ``r_3,alpha``."""
        if label in self.entries:
            return label
        try:
            return self._synonyms()[_norm_label(label)]
        except KeyError:
            raise UnknownLabelError(label) from None

    def entry(self, label: str) -> CatalogEntry:
        return self.entries[self.resolve(label)]

    def get(self, ref: str, bindings: Mapping | None = None) -> LieAlgebra:
        label, b = parse_ref(ref)
        b.update(bindings or {})
        return build_algebra(self.entry(label), b)


@lru_cache(maxsize=4)
def _default_catalog(key):
    return Catalog.load(key)


def default_catalog() -> Catalog:
    return _default_catalog(os.environ.get("LIEVAR_CATALOG") or str(DATA_DIR))


def get(ref: str, bindings: Mapping | None = None) -> LieAlgebra:
    return default_catalog().get(ref, bindings)


def check_entry_jacobi(e: CatalogEntry) -> list:
    """Jacobi check identically in the parameters.

    With one parameter the check runs in the function field.  With several,
    each parameter in turn stays symbolic while the others run over a grid
    of 3 values; the Jacobi polynomials have degree <= 2 in each parameter,
    so this certifies identical vanishing.
    """
    names = e.param_names
    if len(names) <= 1:
        return jacobi_check(build_algebra(e, {}, check_excluded=False))
    from fractions import Fraction
    from itertools import product
    pts = [Fraction(2), Fraction(-3, 5), Fraction(7, 3)]
    bad = []
    for free in names:
        others = [p for p in names if p != free]
        for vals in product(pts, repeat=len(others)):
            L = build_algebra(e, dict(zip(others, vals)), check_excluded=False)
            bad += jacobi_check(L)
    return sorted(set(bad))


# ---------------------------------------------------------------------------
# named sets


@dataclass(frozen=True)
class AlgebraSet:
    name: str
    refs: tuple
    use: str = ""


DIM7_CLASS56 = (
    "g_I", "g_I[a=-2]", "g_I[a=1-w]", "g_F", "g_H", "g_3", "g_4", "g_6", "g_7",
    "g_C", "g_G", "g_E", "g_8", "g_9", "g_10", "g_11", "g_12", "g_13", "g_14", "g_15", "g_16",
    "g_D", "g_B", "g_19", "g_20", "g_21", "g_22", "g_23", "g_24", "g_25", "g_27",
    "g_A", "g_28", "g_29", "g_30",
    "g_31",
)

_SETS = [
    AlgebraSet("dim7-class56", DIM7_CLASS56, "invariant table reproduction"),
    AlgebraSet("dim7-excluded", ("g_1", "g_2", "g_5", "g_17", "g_18", "g_26"),
               "catalog only; algebras without a type-I basis"),
    AlgebraSet("dim7-degenerations", (
        "g_I[a=2]", "g_I[a=1]", "g_F", "g_H", "g_3", "g_4", "g_6", "g_7",
        "g_C", "g_G", "g_E", "g_8", "g_9", "g_10", "g_11", "g_12", "g_13", "g_14", "g_15", "g_16",
        "g_D", "g_B", "g_19", "g_20", "g_21", "g_22", "g_23", "g_24", "g_25", "g_27",
        "g_A", "g_28", "g_29", "g_30", "g_31"), "Hasse construction for dimension 7"),
    AlgebraSet("N3", ("n3", "C3"), "Hasse construction"),
    AlgebraSet("N4", ("n4", "n3+C", "C4"), "Hasse construction"),
    AlgebraSet("N5", ("g5_6", "g5_5", "g5_4", "g5_3", "g5_2", "g5_1", "n4+C", "n3+C2", "C5"),
               "table reproduction, Hasse construction"),
    AlgebraSet("N6-filiform", ("g6_E", "g6_D", "g6_C", "g6_B", "g6_A"),
               "table reproduction, Hasse construction"),
    AlgebraSet("L2", ("r2", "C2"), "Hasse construction"),
    AlgebraSet("L3", ("sl2", "r3", "r3a[a=1/2]", "r3a[a=-1]", "r3a[a=1]", "r2+C", "n3", "C3"),
               "orbit closure table"),
    AlgebraSet("L4", (
        "sl2+C", "r2+r2", "L4.g5[a=1]", "L4.g5[a=5]", "L4.g5[a=-1]", "L4.g5[a=0]",
        "L4.g4[a=2,b=3]", "L4.g4[a=3,b=1]", "L4.g4[a=0,b=0]", "L4.g4[a=5,b=6]", "L4.g4[a=7,b=0]",
        "L4.g3", "L4.g2[a=3]", "L4.g2[a=1]", "L4.g2[a=2]", "L4.g1",
        "r2+C2", "n4", "n3+C", "C4"), "essential degenerations in dimension 4"),
    AlgebraSet("L4-table", ("C4", "n3+C", "n4", "r2+C2", "r2+r2", "sl2+C", "L4.g1", "L4.g2",
                            "L4.g3", "L4.g4[b=1]", "L4.g5", "r3+C", "r3a+C"),
               "orbit table incl. decomposables"),
]


def builtin_sets() -> list[AlgebraSet]:
    return list(_SETS)


def get_set(name: str) -> AlgebraSet:
    for s in _SETS:
        if s.name == name:
            return s
    raise UnknownLabelError(name)
