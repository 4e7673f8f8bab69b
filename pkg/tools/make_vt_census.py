"""Generate connected vertex-transitive graph censuses for orders 12 to 15.

Every group of each order is enumerated (Z12, Z6 x Z2, D12, A4, Dic3; Z13;
Z14, D14; Z15) and every inverse-closed connection set gives a Cayley graph;
graphs are deduplicated by canonical form and only connected ones kept.
Orders 12 to 14 have no non-Cayley vertex-transitive graphs. Order 15 has four,
added explicitly: the line graph of the Petersen graph, the triangular graph
T(6) = L(K6), and their complements (neither automorphism group, S5 or S6,
contains an element of order 15, so none of them is a circulant).

Usage: python tools/make_vt_census.py OUTDIR
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

from ebu.canonical import canonical_form
from ebu.graph import Graph, is_connected
from ebu.graph6 import write_graph6


def semidirect(n: int, m: int, twist: bool):
    """Z_n x| Z_m with the generator of Z_m acting by inversion (or trivially)."""
    elems = [(a, b) for a in range(n) for b in range(m)]

    def mul(x, y):
        sign = -1 if twist and x[1] % 2 else 1
        return ((x[0] + sign * y[0]) % n, (x[1] + y[1]) % m)

    return elems, mul


def alternating4():
    elems = [p for p in itertools.permutations(range(4))
             if sum(p[i] > p[j] for i in range(4) for j in range(i + 1, 4)) % 2 == 0]

    def mul(x, y):
        return tuple(x[y[i]] for i in range(4))

    return elems, mul


def dicyclic3():
    # <a, x | a^6 = 1, x^2 = a^3, x a x^-1 = a^-1>, elements a^i x^j
    elems = [(i, j) for i in range(6) for j in range(2)]

    def mul(x, y):
        i, j = x
        k, l = y
        e = i + (-k if j else k)
        if j and l:
            e += 3
        return (e % 6, (j + l) % 2)

    return elems, mul


GROUPS = {
    12: [semidirect(12, 1, False), semidirect(6, 2, False), semidirect(6, 2, True), alternating4(), dicyclic3()],
    13: [semidirect(13, 1, False)],
    14: [semidirect(14, 1, False), semidirect(7, 2, True)],
    15: [semidirect(15, 1, False)],
}


def cayley_graphs(elems, mul):
    index = {e: i for i, e in enumerate(elems)}
    identity = next(e for e in elems if all(mul(e, x) == x for x in elems))
    inverse = {x: next(y for y in elems if mul(x, y) == identity) for x in elems}
    units, seen = [], set()
    for x in elems:
        if x != identity and x not in seen:
            seen |= {x, inverse[x]}
            units.append({x, inverse[x]})
    for r in range(len(units) + 1):
        for combo in itertools.combinations(units, r):
            s = set().union(*combo)
            edges = {tuple(sorted((index[g], index[mul(g, x)]))) for g in elems for x in s}
            yield Graph.from_edges(len(elems), sorted(edges))


def line_graph(g: Graph) -> Graph:
    edges = list(g.edges())
    return Graph.from_edges(len(edges), [(i, j) for i, j in itertools.combinations(range(len(edges)), 2)
                                         if set(edges[i]) & set(edges[j])])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def non_cayley(order: int) -> list[Graph]:
    if order != 15:
        return []
    lp = line_graph(petersen())
    t6 = line_graph(Graph.from_edges(6, list(itertools.combinations(range(6), 2))))
    return [lp, lp.complement(), t6, t6.complement()]


def census(order: int) -> list[bytes]:
    found: dict[bytes, Graph] = {}
    for elems, mul in GROUPS[order]:
        for g in cayley_graphs(elems, mul):
            if g.edge_count and is_connected(g):
                found.setdefault(canonical_form(g).canonical_bytes, g)
    for g in non_cayley(order):
        key = canonical_form(g).canonical_bytes
        assert key not in found, "a listed non-Cayley graph turned up as a Cayley graph"
        found[key] = g
    # sort by edge count, then canonical bytes, for a stable file
    return [key for key, g in sorted(found.items(), key=lambda kv: (kv[1].edge_count, kv[0]))]


def main(argv: list[str]) -> None:
    out = Path(argv[1] if len(argv) > 1 else "tests/data/census")
    out.mkdir(parents=True, exist_ok=True)
    for order in sorted(GROUPS):
        lines = census(order)
        (out / f"vt{order}.g6").write_bytes(b"".join(line + b"\n" for line in lines))
        print(f"order {order}: {len(lines)} connected vertex-transitive graphs")


if __name__ == "__main__":
    main(sys.argv)
