import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lievar.catalog import default_catalog
from lievar.degeneration import (OBSTRUCTED_S, UNKNOWN_S, CertificateParseError,
                                 CertStore, Comparator, DegenerationCertificate, NoLimitError,
                                 abelian_ideal_codim1, apply_base_change, central_quotient_obstruction,
                                 certificate_paths, fingerprint, ideal_property_R, load_certificate,
                                 obstruction_battery, parse_certificate, psg_limit,
                                 serialize_certificate, t_field, verify_certificate)
from lievar.liealg import LieAlgebra, jacobi_check
from lievar.linalg import Matrix, det

from conftest import DATA

CAT = default_catalog()
PATHS = certificate_paths()


def random_invertible(rng, n, lo=-2, hi=2):
    while True:
        m = Matrix.from_rows([[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)])
        if det(m) != 0:
            return m


SMALL = ["n3", "r3", "sl2", "n4", "r2+r2", "L4.g3", "g5_3", "g5_6", "n4+C"]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10 ** 6))
def test_action_property(ref, seed):
    rng = random.Random(seed)
    L = CAT.get(ref)
    g, h = random_invertible(rng, L.n), random_invertible(rng, L.n)
    assert apply_base_change(apply_base_change(L, h), g) == apply_base_change(L, g @ h)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10 ** 6))
def test_fingerprint_invariant(ref, seed):
    L = CAT.get(ref)
    g = random_invertible(random.Random(seed), L.n)
    assert fingerprint(apply_base_change(L, g)) == fingerprint(L)


@pytest.mark.parametrize("ref", ["g_F", "n4", "sl2", "L4.g5[a=5]"])
def test_scaling_to_abelian(ref):
    L = CAT.get(ref)
    tf = t_field()
    lim = psg_limit(L, g_inv=Matrix.diag([tf.gen] * L.n, tf))
    assert lim.is_abelian()


def test_no_limit_reports_entry():
    L = CAT.get("n3")
    tf = t_field()
    with pytest.raises(NoLimitError, match="c_1,2\\^3"):
        psg_limit(L, g_inv=Matrix.diag([tf.one, tf.one, tf.gen], tf))


@pytest.mark.parametrize("path", PATHS, ids=lambda p: p.stem)
def test_shipped_certificate(path, comparator):
    c = load_certificate(path)
    v = verify_certificate(c)
    assert v.ok, v.line()
    src = CAT.get(c.source)
    M = c.matrix_value()
    lim = psg_limit(src, g_inv=M) if c.kind == "g_inverse" else psg_limit(src, g=M)
    assert jacobi_check(lim) == []
    assert comparator.direct_obstruction(c.source, c.target) == ""
    assert parse_certificate(serialize_certificate(c)) == c


def test_printed_e31_has_no_limit():
    v = verify_certificate(load_certificate(DATA / "gE_to_g31_printed.cert"))
    assert not v.ok
    assert "limit does not exist" in v.message
    assert v.mismatch[0][:3] == (1, 4, 5)


def test_printed_e29_swap_fails():
    c = load_certificate([p for p in PATHS if p.stem == "gE_to_g29"][0])
    swap = [["1" if (i, j) in {(0, 0), (1, 1), (2, 2), (3, 3), (4, 5), (5, 4), (6, 6)} else "0"
             for j in range(7)] for i in range(7)]
    printed = DegenerationCertificate("e29_printed", c.source, c.target, c.kind, c.matrix,
                                      tuple(map(tuple, swap)))
    assert not verify_certificate(printed).ok
    assert verify_certificate(c).ok


def test_mismatch_is_reported():
    c = parse_certificate("source: n3\ntarget: C3\nmatrix: g_inverse\n1 0 0\n0 1 0\n0 0 1\n")
    v = verify_certificate(c)
    assert not v.ok and "mismatch at c_1,2^3" in v.message


@pytest.mark.parametrize("text, line", [
    ("source: n3\ntarget: C3\nmatrix: g_inverse\n1 0\n0 1 0\n0 0 1\n", 4),
    ("source: n3\ntarget: C3\nmatrix: h\n1 0 0\n0 1 0\n0 0 1\n", 3),
    ("source: n3\ntarget: C3\n1 0 0\n", 3),
    ("source: n3\ntarget: C3\nmatrix: g\n1 0 q\n0 1 0\n0 0 1\n", 4),
    ("source: n3\ntarget: C3\nmatrix: g\n1 0 (t\n0 1 0\n0 0 1\n", 4),
    ("source: n3\ntarget: C3\nmatrix: g\nt 0 0\n0 1 0\n0 0 1\npostiso:\nt 0 0\n0 1 0\n0 0 1\n", 8),
    ("source: n3\nsource: n3\n", 2),
    ("target: C3\nmatrix: g\n1\n", 1),
])
def test_certificate_parse_errors(text, line):
    with pytest.raises(CertificateParseError) as e:
        parse_certificate(text)
    assert e.value.line == line


def test_singular_matrix_fails():
    c = parse_certificate("source: n3\ntarget: C3\nmatrix: g\nt 0 0\n0 0 0\n0 0 1\n")
    v = verify_certificate(c)
    assert not v.ok and "singular" in v.message


def _fp(ref):
    return fingerprint(CAT.get(ref))


def test_battery_examples():
    rep = obstruction_battery(_fp("g_7"), _fp("g_9"))
    assert rep.obstructed and "h5" in rep.violated_ids()
    assert "h5 15>13" in rep.reasons()
    assert "s 2<3" in obstruction_battery(_fp("g_H"), _fp("g_22")).reasons()
    assert "h0 2>1" in obstruction_battery(_fp("g_6"), _fp("g_8")).reasons()


def test_battery_passes_on_self():
    f = _fp("g_F")
    assert not obstruction_battery(f, f).obstructed


def test_central_quotient_rule():
    G, H = CAT.get("g5_6"), CAT.get("C5")
    assert not central_quotient_obstruction(G, H).obstructed
    with pytest.raises(ValueError):
        central_quotient_obstruction(CAT.get("r2+C2"), CAT.get("C4"))


def test_ideal_property_R():
    assert ideal_property_R(CAT.get("n3")) is not None
    assert ideal_property_R(CAT.get("g_F")) is not None
    assert ideal_property_R(CAT.get("g_12")) is None


def test_abelian_codim1_ideal():
    assert abelian_ideal_codim1(CAT.get("g5_5")) is not None
    for ref in ("g5_1", "g5_3", "g5_4"):
        assert abelian_ideal_codim1(CAT.get(ref)) is None


def test_compare_statuses(comparator):
    assert comparator.compare("g_F", "g_F").line() == "DEGENERATES trivial"
    assert comparator.compare("g_F", "g_C").line() == "DEGENERATES cert:gF_to_gC"
    assert comparator.compare("g_F", "g_29").certs == ("gF_to_gE", "gE_to_g29")
    r = comparator.compare("g_7", "g_9")
    assert r.status == OBSTRUCTED_S and "h5 15>13" in r.reason
    assert comparator.compare("g_H", "g_22").line() == "OBSTRUCTED s 2<3"
    assert comparator.compare("g_I[a=5]", "g_C").status == UNKNOWN_S
    assert comparator.compare("g5_5", "g5_3").status == OBSTRUCTED_S


def test_store_paths(store):
    assert store.path("g_F", "g_29") == ("gF_to_gE", "gE_to_g29")
    assert store.path("g_29", "g_F") is None
    assert "g5_3" in store.reachable("g5_6")
    assert "g5_6" in store.ancestors("n3+C2")
    assert not store.failures


def test_empty_store():
    c = Comparator(CAT, CertStore({}, {}))
    assert c.compare("g_F", "g_C").status == UNKNOWN_S
    assert c.compare("n3", "C3").status == UNKNOWN_S
    assert c.compare("C3", "n3").status == OBSTRUCTED_S


def test_trilinear_example_custom_algebra():
    # [x1,x2]=x3, [x1,x3]=x4 in dimension 4: I = span(x2,x3,x4) is abelian
    L = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}})
    assert abelian_ideal_codim1(L) is not None
    assert ideal_property_R(L) is not None


def _table_cells():
    for line in (DATA / "obstruction_cells.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            yield line.split("\t")


def test_checkmark_cells_never_obstructed(comparator):
    bad = [(s, d, comparator.compare(s, d).line()) for s, d, lab in _table_cells()
           if lab == "ok" and comparator.compare(s, d).status == OBSTRUCTED_S]
    assert not bad
