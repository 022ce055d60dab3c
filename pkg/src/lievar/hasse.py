"""Degeneration graphs on a finite set of algebras, their reduction and DOT/TSV output.

Edges are verified degenerations only.  Pairs nobody can decide stay UNKNOWN
and never become edges, so every emitted diagram is a lower bound on the
true order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from .catalog import AlgebraSet, Catalog, default_catalog
from .degeneration import (DEGENERATES, OBSTRUCTED_S, CertStore, Comparator,
                           canonical_ref)


class GraphError(Exception):
    """Inconsistent degeneration data (cycle, non-strict edge, equal fingerprints)."""


@dataclass
class DegenerationGraph:
    nodes: tuple                                   # canonical refs, display order
    orbit: dict                                    # ref -> orbit dimension
    edges: dict = field(default_factory=dict)      # (a, b) -> certificate ids
    nonedges: dict = field(default_factory=dict)   # (a, b) -> obstruction reason
    unknowns: set = field(default_factory=set)
    name: str = ""
    reduced: bool = False

    def levels(self) -> list[tuple[int, list]]:
        out = {}
        for v in self.nodes:
            out.setdefault(self.orbit[v], []).append(v)
        return sorted(out.items(), key=lambda kv: -kv[0])

    def successors(self, a) -> list:
        return sorted(b for (x, b) in self.edges if x == a)

    def reachability(self) -> set:
        """Non-trivial reachable pairs."""
        out = set()
        for a in self.nodes:
            seen, todo = set(), [a]
            while todo:
                x = todo.pop()
                for y in self.successors(x):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            out |= {(a, b) for b in seen if b != a}
        return out


def _order(nodes, orbit):
    return tuple(sorted(nodes, key=lambda v: (-orbit[v], v)))


def check_acyclic(nodes, edges) -> None:
    ts = TopologicalSorter({v: set() for v in nodes})
    for (a, b) in edges:
        ts.add(b, a)
    try:
        ts.prepare()
    except CycleError as e:
        raise GraphError(f"cycle in degeneration graph: {' -> '.join(e.args[1])}") from None


def build(aset, store: CertStore | None = None, catalog: Catalog | None = None,
          comparator: Comparator | None = None, name: str = "") -> DegenerationGraph:
    """Classify every ordered pair of ``aset`` (an AlgebraSet or a list of refs)."""
    catalog = catalog or default_catalog()
    if comparator is None:
        comparator = Comparator(catalog, store if store is not None else CertStore.load(catalog=catalog))
    refs = aset.refs if isinstance(aset, AlgebraSet) else tuple(aset)
    name = name or (aset.name if isinstance(aset, AlgebraSet) else "")
    nodes = []
    for r in refs:
        c = canonical_ref(r, catalog)
        if c not in nodes:
            nodes.append(c)
    orbit = {v: comparator.fingerprint(v).orbit_dim for v in nodes}
    g = DegenerationGraph(_order(nodes, orbit), orbit, name=name)
    for a in g.nodes:
        for b in g.nodes:
            if a == b:
                continue
            res = comparator.compare(a, b)
            if res.status == DEGENERATES:
                if comparator.fingerprint(a) == comparator.fingerprint(b):
                    raise GraphError(f"{a} -> {b} certified but fingerprints agree")
                if orbit[a] <= orbit[b]:
                    raise GraphError(f"{a} -> {b} does not lower the orbit dimension "
                                     f"({orbit[a]} <= {orbit[b]})")
                g.edges[(a, b)] = tuple(res.certs)
            elif res.status == OBSTRUCTED_S:
                g.nonedges[(a, b)] = res.line().split(" ", 1)[1]
            else:
                g.unknowns.add((a, b))
    check_acyclic(g.nodes, g.edges)
    return g


def transitive_reduction(g: DegenerationGraph) -> DegenerationGraph:
    """Minimal edge set with the same reachability (the Hasse diagram)."""
    check_acyclic(g.nodes, g.edges)
    reach = g.reachability()
    keep = {}
    for (a, b), ev in g.edges.items():
        if any((a, c) in reach and (c, b) in reach for c in g.nodes if c not in (a, b)):
            continue
        keep[(a, b)] = ev
    return DegenerationGraph(g.nodes, dict(g.orbit), keep, dict(g.nonedges), set(g.unknowns),
                             g.name, True)


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(g: DegenerationGraph, show_unknown: bool = False) -> str:
    """Deterministic Graphviz text; one rank per orbit dimension."""
    title = g.name or "degenerations"
    lines = [f"digraph {_q(title)} {{", "  rankdir=TB;", "  node [shape=box];"]
    for dim, vs in g.levels():
        lines.append(f"  {{ rank=same; {_q(f'dim O = {dim}')} [shape=plaintext];")
        for v in vs:
            lines.append(f"    {_q(v)};")
        lines.append("  }")
    dims = [d for d, _ in g.levels()]
    for a, b in zip(dims, dims[1:]):
        lines.append(f"  {_q(f'dim O = {a}')} -> {_q(f'dim O = {b}')} [style=invis];")
    for (a, b) in sorted(g.edges, key=lambda e: (g.nodes.index(e[0]), g.nodes.index(e[1]))):
        ev = " ".join(g.edges[(a, b)])
        attr = f" [label={_q(ev)}]" if ev else ""
        lines.append(f"  {_q(a)} -> {_q(b)}{attr};")
    if show_unknown:
        for (a, b) in sorted(g.unknowns, key=lambda e: (g.nodes.index(e[0]), g.nodes.index(e[1]))):
            if g.orbit[a] > g.orbit[b]:
                lines.append(f"  {_q(a)} -> {_q(b)} [style=dashed, color=gray];")
    legend = "verified degenerations only; undecided pairs are not edges (lower bound)"
    if g.reduced:
        legend += "; transitive reduction"
    lines.append(f"  legend [shape=note, label={_q(legend)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_tsv(g: DegenerationGraph) -> str:
    """All ordered pairs: src, dst, status, evidence."""
    out = ["# src\tdst\tstatus\tevidence"]
    for a in g.nodes:
        for b in g.nodes:
            if a == b:
                continue
            if (a, b) in g.edges:
                st, ev = DEGENERATES, " ".join(g.edges[(a, b)]) or "closure"
            elif (a, b) in g.nonedges:
                st, ev = OBSTRUCTED_S, g.nonedges[(a, b)]
            elif (a, b) in g.unknowns:
                st, ev = "UNKNOWN", "-"
            else:
                st, ev = "IMPLIED", "-"          # dropped by reduction, still reachable
            out.append(f"{a}\t{b}\t{st}\t{ev}")
    return "\n".join(out) + "\n"
