import pytest
from hypothesis import given, settings, strategies as st

from lievar.catalog import get_set
from lievar.hasse import (DegenerationGraph, GraphError, build, check_acyclic, emit_dot, emit_tsv,
                          transitive_reduction)


@pytest.fixture(scope="module")
def n4(store, catalog):
    return build(get_set("N4"), store, catalog)


def test_n4_chain(n4):
    assert n4.reachability() == {("n4", "n3+C"), ("n3+C", "C4"), ("n4", "C4")}
    red = transitive_reduction(n4)
    assert set(red.edges) == {("n4", "n3+C"), ("n3+C", "C4")}
    assert red.reachability() == n4.reachability()
    assert not n4.unknowns


def _graph(edges, nodes=None):
    nodes = nodes or sorted({v for e in edges for v in e})
    orbit = {v: -i for i, v in enumerate(nodes)}
    return DegenerationGraph(tuple(nodes), orbit, {e: () for e in edges})


def test_triangle_reduction():
    g = _graph([("a", "b"), ("b", "c"), ("a", "c")])
    assert set(transitive_reduction(g).edges) == {("a", "b"), ("b", "c")}


def test_cycle_detected():
    with pytest.raises(GraphError, match="cycle"):
        check_acyclic(("a", "b", "c"), {("a", "b"): (), ("b", "c"): (), ("c", "a"): ()})
    with pytest.raises(GraphError):
        transitive_reduction(_graph([("a", "b"), ("b", "a")]))


@st.composite
def dags(draw):
    n = draw(st.integers(1, 7))
    nodes = [f"v{i}" for i in range(n)]
    edges = [(nodes[i], nodes[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return _graph(edges, nodes)


@settings(max_examples=60)
@given(dags())
def test_reduction_preserves_reachability(g):
    red = transitive_reduction(g)
    assert red.reachability() == g.reachability()
    assert set(red.edges) <= set(g.edges)
    for e in red.edges:
        rest = _graph([f for f in red.edges if f != e], list(g.nodes))
        assert e not in rest.reachability()


def test_empty_set(store, catalog):
    g = build([], store, catalog, name="empty")
    assert g.nodes == () and not g.edges
    dot = emit_dot(g)
    assert dot.startswith('digraph "empty" {') and "lower bound" in dot


def test_edges_lower_orbit(store, catalog):
    g = build(get_set("L3"), store, catalog)
    for (a, b) in g.edges:
        assert g.orbit[a] > g.orbit[b]


def test_dot_deterministic(n4, store, catalog):
    red = transitive_reduction(n4)
    again = transitive_reduction(build(get_set("N4"), store, catalog))
    assert emit_dot(red) == emit_dot(again)
    dot = emit_dot(red)
    assert '"n4" -> "n3+C" [label="n4_to_n3pC"];' in dot
    assert "rank=same" in dot and "transitive reduction" in dot


def test_tsv(n4):
    red = transitive_reduction(n4)
    lines = emit_tsv(red).splitlines()
    assert lines[0] == "# src\tdst\tstatus\tevidence"
    rows = {tuple(l.split("\t")[:2]): l.split("\t")[2] for l in lines[1:]}
    assert rows[("n4", "C4")] == "IMPLIED"
    assert rows[("n4", "n3+C")] == "DEGENERATES"
    assert rows[("C4", "n4")] == "OBSTRUCTED"


def test_unknown_pairs_drawn_dashed(store, catalog):
    g = build(get_set("L4"), store, catalog)
    assert g.unknowns
    dot = emit_dot(transitive_reduction(g), show_unknown=True)
    assert "style=dashed" in dot
    for e in g.unknowns:
        assert e not in g.edges
