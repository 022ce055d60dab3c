from math import comb

import pytest

from lievar.catalog import default_catalog
from lievar.cohomology import (ADJOINT, TRIVIAL, adjoint_cocycle_dim, coboundary_matrix,
                               coboundary_rows, cochain_coords, cochain_dim, cochain_index,
                               cohomology_profile, derivation_dim, orbit_dim)
from lievar.linalg import rank, sparse_rank

CAT = default_catalog()
CONCRETE = [l for l in CAT.labels() if not CAT.entry(l).params]


def _compose_zero(L, j, kind):
    """d^(j+1) d^j = 0, multiplied sparsely."""
    lower = coboundary_rows(L, j, kind)
    upper = coboundary_rows(L, j + 1, kind)
    z = L.field.zero
    for row in upper:
        acc = {}
        for mid, a in row.items():
            for col, b in lower[mid].items():
                acc[col] = acc.get(col, z) + a * b
        if any(acc.values()):
            return False
    return True


@pytest.mark.parametrize("label", CONCRETE)
def test_d_squared_zero(label, algebra):
    L = algebra(label)
    for kind in (ADJOINT, TRIVIAL):
        for j in range(L.n):
            assert _compose_zero(L, j, kind), (kind, j)


def test_d_squared_zero_parametric(algebra):
    L = algebra("g_I")
    for j in range(3):
        assert _compose_zero(L, j, ADJOINT)
    assert _compose_zero(algebra("g_I[a=1-w]"), 2, ADJOINT)


@pytest.mark.parametrize("label", CONCRETE)
def test_euler_and_identities(label, algebra):
    L = algebra(label)
    n = L.n
    adj = cohomology_profile(L, ADJOINT)
    tri = cohomology_profile(L, TRIVIAL)
    assert sum((-1) ** j * x for j, x in enumerate(adj.h)) == 0
    assert sum((-1) ** j * x for j, x in enumerate(tri.h)) == 0
    for j in range(1, n + 1):
        assert adj.h[j] == adj.z[j] - cochain_dim(n, j - 1, ADJOINT) + adj.z[j - 1]
    assert derivation_dim(L) == adj.z[1]
    assert orbit_dim(L) == n * n - adj.z[1]
    assert adj.h[1] == derivation_dim(L) - (n - adj.h[0])
    assert tri.h[0] == 1


def test_cochain_indexing():
    n = 5
    for j in range(n + 1):
        for idx in range(cochain_dim(n, j, ADJOINT)):
            T, m = cochain_coords(n, j, idx)
            assert cochain_index(n, j, T, m) == idx
    assert cochain_dim(7, 3, ADJOINT) == 7 * comb(7, 3) == 245
    assert cochain_dim(7, 3, TRIVIAL) == 35


def test_heisenberg():
    L = CAT.get("n3")
    assert cohomology_profile(L, ADJOINT).h == (1, 4, 5, 2)
    assert cohomology_profile(L, TRIVIAL).h == (1, 2, 2, 1)


def test_abelian():
    L = CAT.get("C4")
    assert cohomology_profile(L, ADJOINT).h == tuple(4 * comb(4, j) for j in range(5))


def test_dense_matches_sparse():
    L = CAT.get("g_F")
    for j in range(3):
        m = coboundary_matrix(L, j, ADJOINT)
        assert rank(m) == sparse_rank(coboundary_rows(L, j, ADJOINT), m.ncols)


def test_generic_rank_symbolic_agrees(algebra):
    L = algebra("g_I")
    for j in (0, 1, 2):
        rows = coboundary_rows(L, j, ADJOINT)
        nc = cochain_dim(7, j, ADJOINT)
        assert sparse_rank(rows, nc, L.field) == sparse_rank(rows, nc, L.field, mode="symbolic")


def test_generic_family_matches_generic_member(algebra):
    assert cohomology_profile(algebra("g_I"), ADJOINT).h == \
        cohomology_profile(algebra("g_I[a=2]"), ADJOINT).h


@pytest.mark.parametrize("ref, j, value", [
    ("g_8", 3, 113), ("g_F", 3, 114), ("g_3", 3, 114), ("g_4", 3, 115),
    ("g_H", 2, 49), ("g_C", 2, 48),
])
def test_spot_cocycles(ref, j, value):
    assert adjoint_cocycle_dim(CAT.get(ref), j) == value
