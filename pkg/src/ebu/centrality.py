"""Exact edge betweenness centrality and the uniformity predicate.

Values are summed over *ordered* pairs of distinct vertices, so the two
endpoints of an edge already contribute 2 to it. Pairs in different
components contribute nothing.

The per-source pass is a Brandes-style dependency accumulation rewritten to
use only integers: with ``D(v) = (1 + delta(v)) / sigma(v)`` one has
``D(v) = 1/sigma(v) + sum(D(w) for children w)`` and the contribution of the
DAG edge ``(v, w)`` is ``sigma(v) * D(w)``. Scaling by the lcm of the
``sigma`` values keeps everything integral until the final division.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .graph import EdgeId, Graph, GraphError, diameter_info, family, is_connected, normalize_edge
from .graph6 import write_graph6

Rational = Fraction


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _scaled_edge_betweenness(g: Graph) -> tuple[dict[EdgeId, int], int]:
    """Per-edge numerators over one common denominator."""
    n = g.vertex_count
    adj = g.adjacency
    eidx: dict[EdgeId, int] = {}
    for u, nbrs in enumerate(adj):
        for v in nbrs:
            if v > u:
                eidx[(u, v)] = len(eidx)
    total = [0] * len(eidx)
    denom = 1
    for s in range(n):
        dist = [-1] * n
        sigma = [0] * n
        dist[s] = 0
        sigma[s] = 1
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dv
                    order.append(w)
                    sigma[w] = sv
                elif dw == dv:
                    sigma[w] += sv
        scale = 1
        for v in order:
            if sigma[v] != 1:
                scale = lcm(scale, sigma[v])
        if scale != 1 and denom % scale:
            grow = lcm(denom, scale) // denom
            total = [t * grow for t in total]
            denom *= grow
        mult = denom // scale
        dep = [0] * n
        for v in reversed(order):
            acc = scale // sigma[v]
            dv = dist[v] + 1
            sv = sigma[v] * mult
            for w in adj[v]:
                if dist[w] == dv:
                    dw = dep[w]
                    acc += dw
                    total[eidx[(v, w) if v < w else (w, v)]] += sv * dw
            dep[v] = acc
    return dict(zip(eidx, total)), denom


def edge_betweenness_values(g: Graph) -> dict[EdgeId, Fraction]:
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    scaled, denom = _scaled_edge_betweenness(g)
    return {e: Fraction(t, denom) for e, t in scaled.items()}


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(write_graph6(g)).hexdigest()


@dataclass(frozen=True)
class EdgeCentralityReport:
    graph_hash: str
    values: dict[EdgeId, Fraction]
    distinct_values: tuple[tuple[Fraction, int], ...]
    is_uniform: bool
    uniform_value: Fraction | None

    def to_json(self) -> dict:
        return {
            "graph_hash": self.graph_hash,
            "edges": [
                {"u": u, "v": v, "value": format_rational(x)} for (u, v), x in sorted(self.values.items())
            ],
            "distinct_values": [
                {"value": format_rational(x), "count": c} for x, c in self.distinct_values
            ],
            "uniform": self.is_uniform,
            "value": None if self.uniform_value is None else format_rational(self.uniform_value),
        }


def edge_betweenness(g: Graph) -> EdgeCentralityReport:
    """Exact B'(e) for every edge together with the uniformity verdict."""
    values = edge_betweenness_values(g)
    counts = Counter(values.values())
    distinct = tuple(sorted(counts.items()))
    uniform = len(distinct) == 1
    return EdgeCentralityReport(
        graph_hash=graph_hash(g),
        values=values,
        distinct_values=distinct,
        is_uniform=uniform,
        uniform_value=distinct[0][0] if uniform else None,
    )


def is_edge_betweenness_uniform(g: Graph) -> tuple[bool, Fraction | None]:
    """``(True, value)`` when all edges share one exact value.

    An edgeless graph is reported as ``(True, None)``.
    """
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    if g.edge_count == 0:
        return True, None
    scaled, denom = _scaled_edge_betweenness(g)
    it = iter(scaled.values())
    first = next(it)
    if all(t == first for t in it):
        return True, Fraction(first, denom)
    return False, None


def distinct_value_count(g: Graph) -> int:
    if g.edge_count == 0:
        return 0
    scaled, _ = _scaled_edge_betweenness(g)
    return len(set(scaled.values()))


def closed_form_diameter2(g: Graph, e: Sequence[int]) -> Fraction:
    """Edge betweenness of ``e`` in a diameter-2 graph from neighbourhood counts."""
    info = diameter_info(g)
    if not info.connected or info.diameter != 2:
        raise GraphError(f"graph must be connected with diameter 2 (diameter {info.diameter})")
    u, w = normalize_edge(*e)
    if not g.has_edge(u, w):
        raise GraphError(f"({u}, {w}) is not an edge")
    nbr = [set(a) for a in g.adjacency]
    total = Fraction(2)
    for x, y in ((u, w), (w, u)):
        # vertices two steps from x through y
        for v in nbr[y] - nbr[x] - {x}:
            total += Fraction(2, len(nbr[x] & nbr[v]))
    return total


def closed_form_family(kind: str, params: Sequence[int]) -> Fraction:
    """Uniform value for K_{m,n} or K_n minus a perfect matching."""
    params = list(params)
    if kind == "complete_bipartite":
        if len(params) != 2 or min(params) < 1:
            raise GraphError("complete_bipartite needs two positive sizes")
        m, n = params
        return 2 + Fraction(2 * (n - 1), m) + Fraction(2 * (m - 1), n)
    if kind == "complete_minus_perfect_matching":
        if len(params) != 1 or params[0] < 4 or params[0] % 2:
            raise GraphError("complete_minus_perfect_matching needs even order >= 4")
        return 2 + Fraction(4, params[0] - 2)
    raise GraphError(f"no closed form for {kind!r}")


def family_edge_betweenness(kind: str, params: Sequence[int]) -> EdgeCentralityReport:
    return edge_betweenness(family(kind, params))


@dataclass(frozen=True)
class CutsetCheck:
    part_size: int
    cut_edges: tuple[EdgeId, ...]
    cut_sum: Fraction
    lower_bound: int

    @property
    def holds(self) -> bool:
        return self.cut_sum >= self.lower_bound

    @property
    def strict(self) -> bool:
        return self.cut_sum > self.lower_bound


class CutsetViolation(AssertionError):
    pass


def cutset_check(g: Graph, part: Iterable[int], values: dict[EdgeId, Fraction] | None = None) -> CutsetCheck:
    """Sum B'(e) over the edges leaving ``part`` and compare with 2*|X|*(n-|X|).

    Equality need not hold: shortest paths inside one side may still cross
    the cut.
    """
    n = g.vertex_count
    x = set(part)
    if not x or len(x) >= n or not x <= set(range(n)):
        raise GraphError("part must be a nonempty proper subset of the vertices")
    if not is_connected(g):
        raise GraphError("cut-set inequality needs a connected graph")
    if values is None:
        values = edge_betweenness_values(g)
    cut = tuple(e for e in g.edges() if (e[0] in x) != (e[1] in x))
    total = sum((values[e] for e in cut), Fraction(0))
    check = CutsetCheck(len(x), cut, total, 2 * len(x) * (n - len(x)))
    if not check.holds:
        raise CutsetViolation(f"cut sum {total} below {check.lower_bound}")
    return check
