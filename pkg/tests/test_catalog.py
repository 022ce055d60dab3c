import warnings

import pytest
from hypothesis import given, settings, strategies as st

from lievar.catalog import (Catalog, CatalogParseError, ExcludedValueWarning, UnknownLabelError,
                            builtin_sets, check_entry_jacobi, default_catalog,
                            format_ref, get_set, parse, parse_ref, serialize)
from lievar.degeneration import fingerprint
from lievar.liealg import jacobi_check

CAT = default_catalog()
LABELS = CAT.labels()
UNFLAGGED = {"g_1", "g_2", "g_5", "g_17", "g_18", "g_26"}


@pytest.mark.parametrize("label", LABELS)
def test_round_trip(label):
    e = CAT.entry(label)
    e2 = parse(serialize(e))
    assert serialize(e2) == serialize(e)
    assert e2.brackets == e.brackets and e2.params == e.params


@pytest.mark.parametrize("label", LABELS)
def test_entry_jacobi_symbolic(label):
    assert check_entry_jacobi(CAT.entry(label)) == []


def test_type1_flags():
    seven = [l for l in LABELS if CAT.entry(l).dim == 7]
    unflagged = {l for l in seven if not CAT.entry(l).type1}
    assert unflagged == UNFLAGGED


@pytest.mark.parametrize("label", [l for l in LABELS if CAT.entry(l).type1])
def test_type1_tables_literal(label):
    e = CAT.entry(label)
    for i, j, terms in e.brackets:
        assert i + j <= 7 or not terms


@pytest.mark.parametrize("text, msg", [
    ("name: x\ndim: 3\nbracket 1 2 = 1 x5\n", "line 3"),
    ("name: x\ndim: 3\nbracket 1 2 = 1 x3\nbracket 1 2 = 1 x1\n", "line 4"),
    ("name: x\ndim: 3\nbogus line\n", "line 3"),
    ("dim: 3\n", "name"),
    ("name: x\ndim: 3\nbracket 1 2 = 1 y3\n", "line 3"),
])
def test_parse_errors_carry_line(text, msg):
    with pytest.raises(CatalogParseError, match=msg):
        parse(text)


def test_jacobi_failure_reported():
    e = parse("name: bad\ndim: 3\nbracket 1 2 = 1 x2\nbracket 2 3 = 1 x1\n")
    assert check_entry_jacobi(e)


def test_refs():
    assert parse_ref("g_I[a=2]") == ("g_I", {"a": "2"})
    assert format_ref("L4.g4", {"a": "2", "b": "3"}) == "L4.g4[a=2,b=3]"
    assert CAT.resolve("r_{3,alpha}") == "r3a"
    with pytest.raises(UnknownLabelError):
        CAT.get("nosuch")


def test_parameters():
    assert CAT.get("g_I").params == ("a",)
    assert CAT.get("g_I[a=2]").params == ()
    assert CAT.get("g_I[a=1-w]").field.name == "QQ[w]"
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        CAT.get("g_I[a=0]")
    assert any(issubclass(x.category, ExcludedValueWarning) for x in w)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool))
def test_family_specialization_is_lie(a):
    L = CAT.get("g_I", {"a": str(a)})
    assert jacobi_check(L) == []


def test_sets():
    names = {s.name for s in builtin_sets()}
    assert {"dim7-class56", "N5", "N6-filiform", "L3", "L4"} <= names
    assert len(get_set("dim7-class56").refs) == 36


def test_custom_catalog_dir(tmp_path):
    (tmp_path / "h3.lie").write_text("name: h3\ndim: 3\nfield: QQ\nbracket 1 2 = 1 x3\n")
    c = Catalog.load(tmp_path)
    assert c.labels() == ["h3"]
    assert c.get("h3").n == 3


def _fp(ref):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fingerprint(CAT.get(ref))


@pytest.mark.parametrize("a, b", [
    ("L4.g2[a=0]", "r3a+C[a=1]"),
    ("L4.g4[a=2,b=0]", "r3a+C[a=2]"),
    ("L4.g4[a=1/3,b=0]", "r3a+C[a=1/3]"),
    ("L4.g4[a=0,b=1]", "r3+C"),
])
def test_decomposable_identifications(a, b):
    assert _fp(a) == _fp(b)
