"""Dense exact linear algebra over any of the exactfield scalar domains.

Rank is the workhorse (cohomology dimensions are all ranks), so it has
three routes:

* ``QQ``: rows are scaled to primitive integer vectors and eliminated
  fraction-free in sparse form.  Cheap for the 245-column coboundary
  matrices of 7-dimensional algebras.
* ``QQW`` and other fields: sparse Gauss with normalized pivot rows.
* rational functions: by default the generic rank is taken as the maximum
  over several rational specializations (``mode="specialize"``); the
  certified route (``mode="symbolic"``) clears denominators and runs
  Bareiss elimination over the polynomial ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exactfield import (QQ, FunctionField, Poly, PoleError,
                         field_of, format_scalar, join_fields)


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Matrix:
    nrows: int
    ncols: int
    rows: tuple
    field: object = QQ

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field=None) -> "Matrix":
        rows = [list(r) for r in rows]
        if field is None:
            field = QQ
            for r in rows:
                for x in r:
                    if not isinstance(x, int):
                        field = join_fields(field, field_of(x))
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(tuple(field(x) for x in r) for r in rows), field)

    @classmethod
    def zero(cls, nrows, ncols, field=QQ):
        z = field.zero
        return cls(nrows, ncols, tuple((z,) * ncols for _ in range(nrows)), field)

    @classmethod
    def identity(cls, n, field=QQ):
        z, o = field.zero, field.one
        return cls(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field)

    @classmethod
    def diag(cls, entries, field=None):
        entries = list(entries)
        n = len(entries)
        if field is None:
            field = QQ
            for x in entries:
                if not isinstance(x, int):
                    field = join_fields(field, field_of(x))
        z = field.zero
        return cls(n, n, tuple(tuple(field(entries[i]) if i == j else z for j in range(n))
                               for i in range(n)), field)

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.rows else (), self.field)

    def map(self, f, field=None) -> "Matrix":
        field = field or self.field
        return Matrix(self.nrows, self.ncols, tuple(tuple(field(f(x)) for x in r) for r in self.rows),
                      field)

    def coerce(self, field) -> "Matrix":
        if field == self.field:
            return self
        return Matrix(self.nrows, self.ncols, tuple(tuple(field(x) for x in r) for r in self.rows),
                      field)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            f = join_fields(self.field, other.field)
            a, b = self.coerce(f), other.coerce(f)
            cols = b.transpose().rows
            out = []
            for r in a.rows:
                row = []
                for c in cols:
                    acc = f.zero
                    for x, y in zip(r, c):
                        if x and y:
                            acc = acc + x * y
                    row.append(acc)
                out.append(tuple(row))
            return Matrix(self.nrows, other.ncols, tuple(out), f)
        return self.apply(other)

    def apply(self, v):
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = self.field.zero
            for x, y in zip(r, v):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __add__(self, other):
        f = join_fields(self.field, other.field)
        return Matrix(self.nrows, self.ncols,
                      tuple(tuple(f(x) + f(y) for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      f)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __str__(self):
        return "\n".join("  ".join(format_scalar(x) for x in r) for r in self.rows)


# ---------------------------------------------------------------------------
# sparse elimination kernels


def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _int_row(row: dict) -> dict:
    """Scale a sparse rational row to a primitive integer row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = int(v * den) if den != 1 or isinstance(v, Fraction) else v
    g = _content(out)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _rank_int_sparse(rows) -> int:
    """Fraction-free sparse echelon; each row is a {col: int} dict."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = _int_row(row)
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = row
                break
            a, b = p[c], row[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in row.items()}
            for k, v in p.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            g = _content(new)
            if g > 1:
                new = {k: v // g for k, v in new.items()}
            row = new
    return len(pivots)


def _rank_field_sparse(rows, field) -> int:
    """Sparse Gauss over a field with monic pivot rows."""
    pivots: dict[int, dict] = {}
    one = field.one
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                inv = one / row[c]
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            f = row[c]
            for k, v in p.items():
                x = row.get(k, field.zero) - f * v
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
    return len(pivots)


def sparse_rank(rows, ncols: int, field=QQ, *, mode: str = "specialize",
                samples: int = 7, seed: int = 0, avoid=()) -> int:
    """Rank of a matrix given as a list of ``{col: scalar}`` rows."""
    if field is QQ:
        return _rank_int_sparse(rows)
    if isinstance(field, FunctionField):
        if mode == "symbolic":
            return _rank_field_sparse(rows, field)
        return _generic_rank_by_specialization(rows, field, samples, seed, avoid)
    return _rank_field_sparse(rows, field)


def sample_points(n: int, seed: int = 0, avoid=()) -> list[Fraction]:
    """Deterministic pseudo-random rationals, skipping ``avoid``."""
    rng = random.Random(seed)
    pts = []
    avoid = set(avoid)
    while len(pts) < n:
        x = Fraction(rng.randint(-97, 97), rng.randint(1, 13))
        if x in avoid or x in pts:
            continue
        pts.append(x)
    return pts


def _generic_rank_by_specialization(rows, field, samples, seed, avoid) -> int:
    best = 0
    seen = []
    pts = sample_points(samples * 3, seed, avoid)
    for x in pts:
        try:
            spec = [{c: v.specialize(x) for c, v in row.items()} for row in rows]
        except PoleError:
            continue
        r = sparse_rank(spec, 0, field.base)
        seen.append(r)
        best = max(best, r)
        if len(seen) == samples:
            break
    return best


def _sparse_rows(m: Matrix):
    return [{j: x for j, x in enumerate(r) if x} for r in m.rows]


def rank(m: Matrix, *, mode: str = "specialize", samples: int = 7, seed: int = 0, avoid=()) -> int:
    return sparse_rank(_sparse_rows(m), m.ncols, m.field, mode=mode, samples=samples,
                       seed=seed, avoid=avoid)


# ---------------------------------------------------------------------------
# dense reference routes (cross-checks)


def rank_gauss(m: Matrix) -> int:
    """Textbook Gaussian elimination with field division."""
    a = [list(r) for r in m.rows]
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m.nrows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _ring_of(m: Matrix):
    """Clear denominators row-wise: integers for QQ, polynomials for function fields."""
    if m.field is QQ:
        out = []
        for r in m.rows:
            den = 1
            for x in r:
                den = lcm(den, Fraction(x).denominator)
            out.append([int(Fraction(x) * den) for x in r])
        return out, (lambda x, y: x // y), 0
    if isinstance(m.field, FunctionField):
        out = []
        zero = Poly((), m.field.base, m.field.var)
        for r in m.rows:
            den = Poly((1,), m.field.base, m.field.var)
            for x in r:
                if x:
                    den = _poly_lcm(den, x.den)
            out.append([x.num * den.exquo(x.den) if x else zero for x in r])
        return out, (lambda x, y: x.exquo(y)), zero
    raise TypeError("Bareiss route needs an integral domain (QQ or a function field)")


def _poly_lcm(a: Poly, b: Poly) -> Poly:
    from .exactfield import poly_gcd
    return (a * b).exquo(poly_gcd(a, b)).monic()


def _degree_key(x):
    if isinstance(x, Poly):
        return x.degree
    return 0


def rank_bareiss(m: Matrix) -> int:
    """Fraction-free (two-step division) elimination over Z or K[t].

    Pivot: lowest-degree nonzero entry in the current column range,
    ties by column index.
    """
    a, exquo, zero = _ring_of(m)
    nr, nc = m.nrows, m.ncols
    prev = 1 if m.field is QQ else Poly((1,), m.field.base, m.field.var)
    r = 0
    cols = list(range(nc))
    while r < nr:
        best = None
        for i in range(r, nr):
            for j in cols:
                x = a[i][j]
                if x:
                    key = (_degree_key(x), j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        a[r], a[pi] = a[pi], a[r]
        cols.remove(pj)
        p = a[r][pj]
        for i in range(r + 1, nr):
            q = a[i][pj]
            a[i] = [exquo(p * a[i][j] - q * a[r][j], prev) if j != pj else zero
                    for j in range(nc)]
        prev = p
        r += 1
    return r


# ---------------------------------------------------------------------------
# reduced echelon form, kernels, solving


def rref(m: Matrix):
    """Return (rows of the reduced row echelon form, pivot columns)."""
    f = m.field
    a = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = f.one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.nrows):
            if i != r and a[i][c]:
                g = a[i][c]
                a[i] = [x - g * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return a[:r], pivots


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of {v : m v = 0}, one vector per free column."""
    f = m.field
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [f.zero] * m.ncols
        v[free] = f.one
        for row, pc in zip(red, pivots):
            if row[free]:
                v[pc] = -row[free]
        basis.append(tuple(v))
    for v in basis:
        assert not any(m.apply(v)), "kernel vector check failed"
    return basis


def solve(m: Matrix, b) -> tuple | None:
    """Some x with m x = b, or None when the system is inconsistent."""
    aug = Matrix(m.nrows, m.ncols + 1,
                 tuple(tuple(r) + (m.field(y),) for r, y in zip(m.rows, b)), m.field)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [m.field.zero] * m.ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    x = tuple(x)
    assert tuple(m.apply(x)) == tuple(m.field(y) for y in b)
    return x


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    f = m.field
    aug = Matrix(n, 2 * n, tuple(tuple(r) + tuple(f.one if i == j else f.zero for j in range(n))
                                 for i, r in enumerate(m.rows)), f)
    red, pivots = rref(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError("matrix is singular")
    inv = Matrix(n, n, tuple(tuple(r[n:]) for r in red), f)
    return inv


def det(m: Matrix):
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    f = m.field
    a = [list(r) for r in m.rows]
    n = m.nrows
    d = f.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return f.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c]
        inv = f.one / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                g = a[i][c] * inv
                a[i] = [x - g * y for x, y in zip(a[i], a[c])]
    return d
