"""Lie algebras as structure-constant tables.

Indices are 0-based in code; the catalog files and printed output use the
1-based ``x1 .. xn`` names.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactfield import QQ, FunctionField, join_fields, field_of
from .linalg import Matrix, kernel_basis, rref


class NotAnIdealError(ValueError):
    pass


class DegenerateInvariantError(ArithmeticError):
    pass


def pair_index(i: int, j: int, n: int) -> int:
    """Position of (i, j), i < j, in lexicographic order of pairs."""
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class LieAlgebra:
    n: int
    table: tuple          # one length-n vector per pair i < j, lexicographic
    field: object = QQ
    label: str = ""
    params: tuple = ()
    meta: Mapping = dc_field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_brackets(cls, n: int, brackets: Mapping, field=QQ, label: str = "",
                      params: Sequence[str] = (), meta=None, one_based: bool = False):
        """``brackets`` maps (i, j) to {k: coefficient} (or a length-n vector).

        Entries given as (j, i) with i < j are negated.
        """
        z = field.zero
        vecs = [[z] * n for _ in range(n * (n - 1) // 2)]
        seen = {}
        off = 1 if one_based else 0
        for (i, j), v in brackets.items():
            i, j = i - off, j - off
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"bracket index out of range: ({i + off}, {j + off})")
            if i == j:
                raise ValueError("[x_i, x_i] must vanish")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if isinstance(v, Mapping):
                items = v.items()
            else:
                items = enumerate(v)
            vec = [z] * n
            for k, c in items:
                k = k - off if isinstance(v, Mapping) else k
                if not 0 <= k < n:
                    raise IndexError(f"basis index out of range: {k + off}")
                vec[k] = field(c) * sign
            key = (i, j)
            if key in seen and seen[key] != vec:
                raise ValueError(f"conflicting brackets for ({i + off}, {j + off})")
            seen[key] = vec
            vecs[pair_index(i, j, n)] = vec
        return cls(n, tuple(tuple(v) for v in vecs), field, label, tuple(params), meta or {})

    @classmethod
    def abelian(cls, n: int, field=QQ, label: str = ""):
        return cls.from_brackets(n, {}, field, label or f"C^{n}")

    # -- basic access -------------------------------------------------------

    def structure(self, i: int, j: int) -> tuple:
        """[x_i, x_j] as a coordinate vector."""
        if i == j:
            return (self.field.zero,) * self.n
        if i < j:
            return self.table[pair_index(i, j, self.n)]
        return tuple(-c for c in self.table[pair_index(j, i, self.n)])

    def nonzero_brackets(self):
        """Yield ((i, j), vector) for i < j with nonzero bracket."""
        for (i, j) in combinations(range(self.n), 2):
            v = self.table[pair_index(i, j, self.n)]
            if any(v):
                yield (i, j), v

    def sparse_table(self):
        """{(i, j): {k: c}} over all ordered pairs with nonzero entries."""
        out = {}
        for (i, j), v in self.nonzero_brackets():
            d = {k: c for k, c in enumerate(v) if c}
            out[(i, j)] = d
            out[(j, i)] = {k: -c for k, c in d.items()}
        return out

    def is_abelian(self) -> bool:
        return not any(any(v) for v in self.table)

    def coerce(self, field) -> "LieAlgebra":
        if field == self.field:
            return self
        return LieAlgebra(self.n, tuple(tuple(field(c) for c in v) for v in self.table), field,
                          self.label, self.params, self.meta)

    def relabel(self, label: str) -> "LieAlgebra":
        return LieAlgebra(self.n, self.table, self.field, label, self.params, self.meta)

    def specialize(self, value, label: str | None = None) -> "LieAlgebra":
        """Evaluate the (single) free parameter at ``value``."""
        if not isinstance(self.field, FunctionField):
            return self
        out_field = join_fields(self.field.base, field_of(value))
        tab = tuple(tuple(out_field(c.specialize(value)) for c in v) for v in self.table)
        return LieAlgebra(self.n, tab, out_field, label or self.label, (), self.meta)

    def describe(self) -> str:
        from .exactfield import format_scalar
        parts = []
        for (i, j), v in self.nonzero_brackets():
            terms = " + ".join(f"({format_scalar(c)})x{k + 1}" for k, c in enumerate(v) if c)
            parts.append(f"[x{i + 1},x{j + 1}]={terms}")
        return "; ".join(parts) or "abelian"


def _lin(field, coeffs_vecs, n):
    out = [field.zero] * n
    for c, v in coeffs_vecs:
        if not c:
            continue
        for k, x in enumerate(v):
            if x:
                out[k] = out[k] + c * x
    return tuple(out)


def bracket(L: LieAlgebra, x, y) -> tuple:
    if len(x) != L.n or len(y) != L.n:
        raise ValueError(f"vectors must have length {L.n}")
    f = L.field
    out = [f.zero] * L.n
    for (i, j), v in L.nonzero_brackets():
        c = x[i] * y[j] - x[j] * y[i]
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] = out[k] + c * a
    return tuple(out)


def unit(n: int, i: int, field=QQ) -> tuple:
    return tuple(field.one if k == i else field.zero for k in range(n))


def jacobi_check(L: LieAlgebra) -> list[tuple]:
    """Violating (i, j, k, s) quadruples, 1-based; empty list means ok.

    For a parametric algebra the Jacobi polynomials are evaluated in the
    function field, so "ok" means they vanish identically.
    """
    n = L.n
    S = L.sparse_table()
    bad = []
    for i, j, k in combinations(range(n), 3):
        acc = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            # [[x_a, x_b], x_c]
            for r, crr in S.get((a, b), {}).items():
                for s, v in S.get((r, c), {}).items():
                    acc[s] = acc.get(s, L.field.zero) + crr * v
        for s in range(n):
            if acc.get(s):
                bad.append((i + 1, j + 1, k + 1, s + 1))
    return bad


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Span of ``basis`` (reduced row echelon form, so equality is exact)."""

    ambient: int
    basis: tuple
    pivots: tuple
    field: object = QQ

    @classmethod
    def span(cls, vectors, ambient: int, field=QQ) -> "Subspace":
        vectors = [tuple(field(x) for x in v) for v in vectors if any(v)]
        if not vectors:
            return cls(ambient, (), (), field)
        m = Matrix(len(vectors), ambient, tuple(vectors), field)
        rows, piv = rref(m)
        return cls(ambient, tuple(tuple(r) for r in rows), tuple(piv), field)

    @classmethod
    def whole(cls, n, field=QQ):
        return cls.span([unit(n, i, field) for i in range(n)], n, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def reduce(self, v) -> tuple:
        """Normal form of ``v`` modulo the subspace."""
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def complement_indices(self) -> list[int]:
        p = set(self.pivots)
        return [i for i in range(self.ambient) if i not in p]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient, self.field)


def bracket_span(L: LieAlgebra, A: Subspace, B: Subspace) -> Subspace:
    vecs = [bracket(L, a, b) for a in A.basis for b in B.basis]
    return Subspace.span(vecs, L.n, L.field)


def derived_algebra(L: LieAlgebra) -> Subspace:
    return Subspace.span([v for _, v in L.nonzero_brackets()], L.n, L.field)


def lower_central_series(L: LieAlgebra, max_len: int = 64) -> list[Subspace]:
    """g^1 = g, g^(k+1) = [g, g^k], until the series stabilizes."""
    g = Subspace.whole(L.n, L.field)
    series = [g]
    while len(series) < max_len:
        nxt = bracket_span(L, g, series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def derived_series(L: LieAlgebra, max_len: int = 64) -> list[Subspace]:
    series = [Subspace.whole(L.n, L.field)]
    while len(series) < max_len:
        cur = series[-1]
        nxt = bracket_span(L, cur, cur)
        if nxt.dim == cur.dim:
            break
        series.append(nxt)
    return series


def center(L: LieAlgebra) -> Subspace:
    s = upper_central_series(L, stop=1)
    return s[1] if len(s) > 1 else s[0]


def upper_central_series(L: LieAlgebra, stop: int | None = None) -> list[Subspace]:
    """Z^0 = 0 and Z^(j+1)/Z^j = Z(L/Z^j), until stable (or ``stop`` terms)."""
    n, f = L.n, L.field
    series = [Subspace.span([], n, f)]
    while stop is None or len(series) <= stop:
        Z = series[-1]
        comp = Z.complement_indices()
        # x in Z^{j+1}  <=>  [x, e_k] in Z^j for all k
        rows = []
        cols = [[bracket(L, unit(n, i, f), unit(n, k, f)) for i in range(n)] for k in range(n)]
        for k in range(n):
            red = [Z.reduce(v) for v in cols[k]]
            for c in comp:
                rows.append(tuple(red[i][c] for i in range(n)))
        if rows:
            ker = kernel_basis(Matrix(len(rows), n, tuple(rows), f))
        else:
            ker = [unit(n, i, f) for i in range(n)]
        nxt = Subspace.span(ker, n, f)
        if nxt.dim == Z.dim:
            break
        series.append(nxt)
    return series


def nilpotency_class(L: LieAlgebra) -> int | None:
    """Number of nonzero terms of the lower central series; None if not nilpotent."""
    s = lower_central_series(L)
    if s[-1].dim != 0:
        return None
    return len(s) - 1


def solvability_class(L: LieAlgebra) -> int | None:
    s = derived_series(L)
    if s[-1].dim != 0:
        return None
    return len(s) - 1


def is_nilpotent(L: LieAlgebra) -> bool:
    return nilpotency_class(L) is not None


def is_solvable(L: LieAlgebra) -> bool:
    return solvability_class(L) is not None


def is_ideal(L: LieAlgebra, I: Subspace) -> bool:
    return all(I.contains(bracket(L, unit(L.n, k, L.field), v))
               for k in range(L.n) for v in I.basis)


def quotient(L: LieAlgebra, I: Subspace, label: str = "") -> LieAlgebra:
    """L / I on the complement spanned by the non-pivot basis vectors."""
    if not is_ideal(L, I):
        raise NotAnIdealError("subspace is not an ideal")
    comp = I.complement_indices()
    m = len(comp)
    br = {}
    f = L.field
    for a in range(m):
        for b in range(a + 1, m):
            v = I.reduce(L.structure(comp[a], comp[b]))
            assert all(not v[p] for p in I.pivots)
            br[(a, b)] = [v[c] for c in comp]
    Q = LieAlgebra.from_brackets(m, br, f, label or f"{L.label}/I", L.params, dict(L.meta))
    # well-definedness: cosets of other representatives bracket the same way
    for a in range(m):
        for v in I.basis:
            shifted = tuple(x + y for x, y in zip(unit(L.n, comp[a], f), v))
            for b in range(m):
                w = I.reduce(bracket(L, shifted, unit(L.n, comp[b], f)))
                assert tuple(w[c] for c in comp) == Q.structure(a, b)
    return Q


def direct_sum(L1: LieAlgebra, L2: LieAlgebra, label: str = "") -> LieAlgebra:
    f = join_fields(L1.field, L2.field)
    n = L1.n + L2.n
    br = {}
    for (i, j), v in L1.nonzero_brackets():
        br[(i, j)] = {k: c for k, c in enumerate(v) if c}
    for (i, j), v in L2.nonzero_brackets():
        br[(i + L1.n, j + L1.n)] = {k + L1.n: c for k, c in enumerate(v) if c}
    return LieAlgebra.from_brackets(n, br, f, label or f"{L1.label}+{L2.label}",
                                    L1.params + L2.params)


def direct_sum_abelian(L: LieAlgebra, d: int, label: str = "") -> LieAlgebra:
    if d == 0:
        return L
    return direct_sum(L, LieAlgebra.abelian(d, L.field), label or f"{L.label}+C^{d}")


def adjoint_matrix(L: LieAlgebra, x) -> Matrix:
    """Matrix of y -> [x, y] (column k is [x, e_k])."""
    cols = [bracket(L, x, unit(L.n, k, L.field)) for k in range(L.n)]
    return Matrix(L.n, L.n, tuple(zip(*cols)) if cols else (), L.field)


def _trace(m: Matrix):
    acc = m.field.zero
    for i in range(m.nrows):
        acc = acc + m.rows[i][i]
    return acc


def _mpow(m: Matrix, k: int) -> Matrix:
    r = Matrix.identity(m.nrows, m.field)
    for _ in range(k):
        r = r @ m
    return r


def c_invariant(L: LieAlgebra, i: int, j: int, samples: int = 8, seed: int = 0,
                exact: bool = False):
    """tr(ad x)^i tr(ad y)^j / tr((ad x)^i (ad y)^j) at random x, y.

    Returns the common value when every sample with nonzero denominator
    agrees; returns None when the samples disagree (not an invariant);
    raises DegenerateInvariantError when every denominator vanished.
    With ``exact`` the candidate value c is certified by checking the
    polynomial identity num(x, y) = c * den(x, y) symbolically.
    """
    rng = random.Random(seed)
    vals = []
    f = L.field
    for _ in range(samples):
        x = tuple(f(rng.randint(-9, 9)) for _ in range(L.n))
        y = tuple(f(rng.randint(-9, 9)) for _ in range(L.n))
        A = _mpow(adjoint_matrix(L, x), i)
        B = _mpow(adjoint_matrix(L, y), j)
        den = _trace(A @ B)
        if not den:
            continue
        vals.append(_trace(A) * _trace(B) / den)
    if not vals:
        raise DegenerateInvariantError(f"c_{i}{j}: every sampled denominator vanished")
    if any(v != vals[0] for v in vals[1:]):
        return None
    if exact and not _c_identity_holds(L, i, j, vals[0]):
        return None
    return vals[0]


def _c_identity_holds(L: LieAlgebra, i: int, j: int, c) -> bool:
    import sympy
    if L.field is not QQ:
        raise ValueError("exact c_ij check supports rational structure constants only")
    n = L.n
    xs = sympy.symbols(f"x0:{n}")
    ys = sympy.symbols(f"y0:{n}")

    def ad(v):
        m = sympy.zeros(n, n)
        for (a, b), vec in L.sparse_table().items():
            for k, coef in vec.items():
                m[k, b] += v[a] * sympy.Rational(coef.numerator, coef.denominator)
        return m

    A = ad(xs) ** i
    B = ad(ys) ** j
    num = sympy.expand(A.trace() * B.trace())
    den = sympy.expand((A * B).trace())
    c = Fraction(c)
    return sympy.expand(num - sympy.Rational(c.numerator, c.denominator) * den) == 0
