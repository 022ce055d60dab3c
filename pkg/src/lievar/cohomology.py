"""Chevalley-Eilenberg cohomology with trivial and adjoint coefficients.

C^j has basis (T, m): T a j-subset of {0..n-1} in lexicographic order,
m the target index (always 0 for trivial coefficients).  Cochain index is
``m * C(n, j) + rank(T)``, i.e. target-major.

Differential (x_0 < ... < x_j taken from a (j+1)-subset S):

    (d phi)(x_0..x_j) = sum_p (-1)^p [x_p, phi(..^p..)]                 (adjoint only)
                      + sum_{p<q} (-1)^(p+q) phi([x_p, x_q], ..^p..^q..)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from .exactfield import FunctionField
from .linalg import Matrix, sample_points, sparse_rank
from .liealg import LieAlgebra

TRIVIAL = "trivial"
ADJOINT = "adjoint"


@lru_cache(maxsize=None)
def subsets(n: int, j: int) -> tuple:
    return tuple(combinations(range(n), j))


@lru_cache(maxsize=None)
def subset_index(n: int, j: int) -> dict:
    return {s: k for k, s in enumerate(subsets(n, j))}


def cochain_dim(n: int, j: int, kind: str) -> int:
    if j < 0 or j > n:
        return 0
    return comb(n, j) * (n if kind == ADJOINT else 1)


def cochain_index(n: int, j: int, T: tuple, m: int = 0) -> int:
    return m * comb(n, j) + subset_index(n, j)[tuple(T)]


def cochain_coords(n: int, j: int, idx: int) -> tuple:
    """Inverse of :func:`cochain_index`: returns (T, m)."""
    m, r = divmod(idx, comb(n, j))
    return subsets(n, j)[r], m


def _insert_sign(k: int, rest: tuple):
    """(sign, sorted tuple) for moving k to the front of ``(k,) + rest``."""
    pos = 0
    for x in rest:
        if x == k:
            return 0, None
        if x < k:
            pos += 1
    out = rest[:pos] + (k,) + rest[pos:]
    return (-1 if pos % 2 else 1), out


def coboundary_rows(L: LieAlgebra, j: int, kind: str) -> list[dict]:
    """Sparse rows of d^j : C^j -> C^(j+1); row index = (S, r), column = (T, m)."""
    n = L.n
    if j < 0 or j > n:
        raise ValueError(f"degree {j} out of range for dimension {n}")
    S_table = L.sparse_table()
    adj = kind == ADJOINT
    nt = n if adj else 1
    nrows = cochain_dim(n, j + 1, kind)
    rows = [dict() for _ in range(nrows)]
    if j + 1 > n:
        return rows
    cj = comb(n, j)
    cj1 = comb(n, j + 1)
    idx_j = subset_index(n, j)
    zero = L.field.zero
    for si, S in enumerate(subsets(n, j + 1)):
        # second sum: phi([x_p, x_q], rest)
        for p in range(j + 1):
            for q in range(p + 1, j + 1):
                br = S_table.get((S[p], S[q]))
                if not br:
                    continue
                sgn = -1 if (p + q) % 2 else 1
                rest = S[:p] + S[p + 1:q] + S[q + 1:]
                for k, c in br.items():
                    s2, T = _insert_sign(k, rest)
                    if not s2:
                        continue
                    col_base = idx_j[T]
                    val = c * (sgn * s2)
                    for m in range(nt):
                        row = rows[m * cj1 + si]
                        col = m * cj + col_base
                        x = row.get(col, zero) + val
                        if x:
                            row[col] = x
                        else:
                            row.pop(col, None)
        if not adj:
            continue
        # first sum: (-1)^p [x_p, phi(S minus p)]
        for p in range(j + 1):
            T = S[:p] + S[p + 1:]
            col_base = idx_j[T]
            sgn = -1 if p % 2 else 1
            for m in range(n):
                br = S_table.get((S[p], m))
                if not br:
                    continue
                col = m * cj + col_base
                for r, c in br.items():
                    row = rows[r * cj1 + si]
                    x = row.get(col, zero) + sgn * c
                    if x:
                        row[col] = x
                    else:
                        row.pop(col, None)
    return rows


def coboundary_matrix(L: LieAlgebra, j: int, kind: str = ADJOINT) -> Matrix:
    rows = coboundary_rows(L, j, kind)
    ncols = cochain_dim(L.n, j, kind)
    z = L.field.zero
    dense = tuple(tuple(r.get(c, z) for c in range(ncols)) for r in rows)
    return Matrix(len(rows), ncols, dense, L.field)


@dataclass(frozen=True)
class CohomologyProfile:
    kind: str
    n: int
    z: tuple      # cocycle dims, j = 0..n
    bnd: tuple    # coboundary dims, j = 0..n
    h: tuple      # cohomology dims, j = 0..n

    def check(self):
        for j in range(self.n + 1):
            assert self.h[j] == self.z[j] - self.bnd[j] >= 0
            assert self.z[j] <= cochain_dim(self.n, j, self.kind)
            if j + 1 <= self.n:
                assert self.bnd[j + 1] == cochain_dim(self.n, j, self.kind) - self.z[j]


def differential_ranks(L: LieAlgebra, kind: str, *, samples: int = 7, seed: int = 0,
                       avoid=()) -> tuple:
    """rank d^j for j = 0..n.

    For a parametric algebra the generic ranks are the maxima over
    ``samples`` rational specializations of the parameter.
    """
    n = L.n
    if isinstance(L.field, FunctionField):
        best = [0] * (n + 1)
        got = 0
        for x in sample_points(samples * 3, seed, avoid):
            try:
                Ls = L.specialize(x)
            except ArithmeticError:
                continue
            r = differential_ranks(Ls, kind)
            best = [max(a, b) for a, b in zip(best, r)]
            got += 1
            if got == samples:
                break
        return tuple(best)
    return tuple(sparse_rank(coboundary_rows(L, j, kind), cochain_dim(n, j, kind), L.field)
                 for j in range(n + 1))


def profile_from_ranks(n: int, kind: str, ranks) -> CohomologyProfile:
    z = tuple(cochain_dim(n, j, kind) - ranks[j] for j in range(n + 1))
    bnd = tuple(0 if j == 0 else ranks[j - 1] for j in range(n + 1))
    h = tuple(a - b for a, b in zip(z, bnd))
    p = CohomologyProfile(kind, n, z, bnd, h)
    p.check()
    return p


def cohomology_profile(L: LieAlgebra, kind: str = ADJOINT, **kw) -> CohomologyProfile:
    return profile_from_ranks(L.n, kind, differential_ranks(L, kind, **kw))


def adjoint_cocycle_dim(L: LieAlgebra, j: int, **kw) -> int:
    """z_j = dim Z^j(L, L)."""
    if j == 0 and not isinstance(L.field, FunctionField):
        r = sparse_rank(coboundary_rows(L, 0, ADJOINT), L.n, L.field)
        return L.n - r
    return cohomology_profile(L, ADJOINT, **kw).z[j]


def derivation_dim(L: LieAlgebra, **kw) -> int:
    """dim Der(L) = dim Z^1(L, L)."""
    n = L.n
    if isinstance(L.field, FunctionField):
        return cohomology_profile(L, ADJOINT, **kw).z[1]
    return n * n - sparse_rank(coboundary_rows(L, 1, ADJOINT), n * n, L.field)


def orbit_dim(L: LieAlgebra, **kw) -> int:
    return L.n * L.n - derivation_dim(L, **kw)
