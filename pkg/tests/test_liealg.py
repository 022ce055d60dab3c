import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lievar.catalog import default_catalog, get_set
from lievar.liealg import (LieAlgebra, bracket, NotAnIdealError, Subspace, c_invariant, center,
                           derived_algebra, direct_sum, direct_sum_abelian, is_ideal, jacobi_check,
                           lower_central_series, nilpotency_class, quotient, solvability_class,
                           upper_central_series)

CAT = default_catalog()
TABLE = get_set("dim7-class56").refs
CONCRETE = [l for l in CAT.labels() if not CAT.entry(l).params]


def test_from_brackets_antisymmetry():
    L = LieAlgebra.from_brackets(3, {(2, 1): {0: 1}})
    assert L.structure(1, 2) == (-1, 0, 0)
    assert L.structure(2, 1) == (1, 0, 0)
    with pytest.raises(ValueError):
        LieAlgebra.from_brackets(3, {(1, 1): {0: 1}})
    with pytest.raises(ValueError):
        LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 0): {2: 1}})


@pytest.mark.parametrize("label", CONCRETE)
def test_catalog_jacobi(label, algebra):
    assert jacobi_check(algebra(label)) == []


def test_jacobi_detects_failure():
    L = LieAlgebra.from_brackets(3, {(0, 1): {1: 1}, (1, 2): {0: 1}})
    assert jacobi_check(L)


@pytest.mark.parametrize("ref", TABLE)
def test_table_rows_structure(ref, algebra, expected_dim7):
    L = algebra(ref)
    row = expected_dim7[ref]
    assert derived_algebra(L).dim == L.n - row["b"][0]
    assert center(L).dim == row["h"][0]
    assert nilpotency_class(L) == row["n"]
    assert solvability_class(L) == row["s"] <= row["n"]
    dims = [s.dim for s in lower_central_series(L)]
    assert dims[-1] == 0 and all(a > b for a, b in zip(dims, dims[1:]))
    assert quotient(L, center(L)).n == L.n - row["h"][0]


def test_g31_derived():
    L = CAT.get("g_31")
    assert derived_algebra(L).dim == 4


def test_non_nilpotent():
    sl2 = CAT.get("sl2")
    assert nilpotency_class(sl2) is None and solvability_class(sl2) is None
    r2 = CAT.get("r2")
    assert nilpotency_class(r2) is None and solvability_class(r2) == 2


def test_upper_central_series_n4():
    L = CAT.get("n4")
    assert [s.dim for s in upper_central_series(L)] == [0, 1, 2, 4]


def test_quotient_requires_ideal():
    L = CAT.get("n3")
    I = Subspace.span([(1, 0, 0)], 3)
    assert not is_ideal(L, I)
    with pytest.raises(NotAnIdealError):
        quotient(L, I)


def test_direct_sums():
    L = direct_sum(CAT.get("r2"), CAT.get("r2"))
    assert L.n == 4
    assert jacobi_check(L) == []
    assert direct_sum_abelian(CAT.get("n3"), 1).n == 4


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_center_is_killed(xs):
    L = CAT.get("g_F")
    y = tuple(Fraction(x) for x in xs)
    for v in center(L).basis:
        assert not any(bracket(L, v, y))


def _closed_form(a, i, j):
    return 1 + (a ** i + a ** j) / (1 + a ** (i + j))


def _random_alphas(k, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        a = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        if a not in (0, 1, -1) and a not in out:
            out.append(a)
    return out


@pytest.mark.parametrize("alpha", _random_alphas(10))
def test_c_invariant_closed_form(alpha):
    L = CAT.get("r3a+C", {"a": str(alpha)})
    assert c_invariant(L, 1, 1) == 1 + 2 * alpha / (1 + alpha * alpha)
    for i in range(1, 4):
        for j in range(1, 4):
            assert c_invariant(L, i, j) == _closed_form(alpha, i, j)
