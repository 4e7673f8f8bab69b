"""Simple undirected graphs, standard families, circulants and BFS path counting."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or invalid construction parameters."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..vertex_count-1``.

    ``adjacency[v]`` is the ascending tuple of neighbours of ``v``.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int = field(init=False)

    def __post_init__(self) -> None:
        if self.vertex_count < 0 or len(self.adjacency) != self.vertex_count:
            raise GraphError("adjacency length does not match vertex_count")
        degree_sum = 0
        for v, nbrs in enumerate(self.adjacency):
            prev = -1
            for u in nbrs:
                if u <= prev:
                    raise GraphError(f"neighbours of {v} not strictly ascending")
                if u == v:
                    raise GraphError(f"self-loop at {v}")
                if not 0 <= u < self.vertex_count:
                    raise GraphError(f"neighbour {u} of {v} out of range")
                prev = u
            degree_sum += len(nbrs)
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if not _contains(self.adjacency[u], v):
                    raise GraphError(f"asymmetric adjacency at ({v}, {u})")
        object.__setattr__(self, "edge_count", degree_sum // 2)

    @classmethod
    def _trusted(cls, n: int, adjacency: tuple[tuple[int, ...], ...], m: int) -> Graph:
        # skips validation; callers guarantee the invariants
        g = object.__new__(cls)
        object.__setattr__(g, "vertex_count", n)
        object.__setattr__(g, "adjacency", adjacency)
        object.__setattr__(g, "edge_count", m)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from an edge iterable; repeated edges are merged."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def from_adjacency_sets(cls, nbrs: Sequence[Iterable[int]]) -> Graph:
        return cls(len(nbrs), tuple(tuple(sorted(s)) for s in nbrs))

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.vertex_count and _contains(self.adjacency[u], v)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def masks(self) -> list[int]:
        """Adjacency rows as integer bitsets."""
        out = []
        for nbrs in self.adjacency:
            m = 0
            for u in nbrs:
                m |= 1 << u
            out.append(m)
        return out

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        drop = {normalize_edge(u, v) for u, v in edges}
        for e in drop:
            if not self.has_edge(*e):
                raise GraphError(f"edge {e} not in graph")
        return Graph.from_edges(self.vertex_count, (e for e in self.edges() if e not in drop))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.vertex_count, ((perm[u], perm[v]) for u, v in self.edges()))

    def complement(self) -> Graph:
        n = self.vertex_count
        return Graph.from_edges(
            n, ((u, v) for u in range(n) for v in range(u + 1, n) if not self.has_edge(u, v))
        )


def _contains(sorted_seq: Sequence[int], x: int) -> bool:
    lo, hi = 0, len(sorted_seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if sorted_seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(sorted_seq) and sorted_seq[lo] == x


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise GraphError(f"not an edge: ({u}, {v})")
    return (u, v) if u < v else (v, u)


EdgeId = tuple[int, int]


@dataclass(frozen=True)
class CirculantSpec:
    """Order ``k`` and chord lengths ``chords`` of the circulant C_k(chords)."""

    order: int
    chords: tuple[int, ...]

    def __post_init__(self) -> None:
        k = self.order
        if k < 3:
            raise GraphError(f"circulant order must be >= 3, got {k}")
        chords = tuple(self.chords)
        if len(set(chords)) != len(chords):
            raise GraphError(f"duplicate chords in {list(chords)}")
        for j in chords:
            if not 1 <= j <= k // 2:
                raise GraphError(f"chord {j} outside [1, {k // 2}] for order {k}")
        object.__setattr__(self, "chords", tuple(sorted(chords)))

    @classmethod
    def parse(cls, text: str) -> CirculantSpec:
        """Parse ``"k:j1,j2,..."``."""
        try:
            k, _, rest = text.partition(":")
            chords = tuple(int(x) for x in rest.split(",") if x.strip())
            return cls(int(k), chords)
        except ValueError as exc:
            raise GraphError(f"bad circulant spec {text!r}: {exc}") from exc

    def connection_set(self) -> frozenset[int]:
        k = self.order
        return frozenset(x for j in self.chords for x in (j % k, (-j) % k))

    def __str__(self) -> str:
        return f"C_{self.order}({','.join(map(str, self.chords))})"


def circulant(spec: CirculantSpec | int, chords: Iterable[int] | None = None) -> Graph:
    """C_k(L): vertex i is adjacent to i +/- j (mod k) for each chord j."""
    if not isinstance(spec, CirculantSpec):
        spec = CirculantSpec(spec, tuple(chords or ()))
    k = spec.order
    conn = spec.connection_set()
    return Graph(k, tuple(tuple(sorted((i + d) % k for d in conn)) for i in range(k)))


FAMILIES = (
    "complete",
    "cycle",
    "path",
    "complete_bipartite",
    "complete_minus_perfect_matching",
    "complement_of_circulant",
)


def family(kind: str, params: Sequence[int]) -> Graph:
    """Construct a named standard graph."""
    params = list(params)
    if kind not in FAMILIES:
        raise GraphError(f"unknown family {kind!r}")
    if kind == "complement_of_circulant":
        if len(params) < 1:
            raise GraphError("complement_of_circulant needs an order")
        return circulant(CirculantSpec(params[0], tuple(params[1:]))).complement()
    if kind == "complete_bipartite":
        if len(params) != 2 or min(params) < 1:
            raise GraphError("complete_bipartite needs two positive sizes")
        m, n = params
        return Graph.from_edges(m + n, ((i, m + j) for i in range(m) for j in range(n)))
    if len(params) != 1 or params[0] < 1:
        raise GraphError(f"{kind} needs one positive size")
    n = params[0]
    if kind == "complete":
        return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))
    if kind == "path":
        return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))
    if kind == "cycle":
        if n < 3:
            raise GraphError("cycle needs at least 3 vertices")
        return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))
    # complete_minus_perfect_matching: drop the matching {2i, 2i+1}
    if n < 4 or n % 2:
        raise GraphError("complete_minus_perfect_matching needs even order >= 4")
    return Graph.from_edges(
        n, ((i, j) for i in range(n) for j in range(i + 1, n) if not (i % 2 == 0 and j == i + 1))
    )


@dataclass(frozen=True)
class BfsResult:
    source: int
    dist: tuple[int, ...]
    sigma: tuple[int, ...]
    order: tuple[int, ...]


def bfs_count(g: Graph, source: int) -> BfsResult:
    """BFS from ``source`` with exact shortest-path counts."""
    n = g.vertex_count
    if not 0 <= source < n:
        raise GraphError(f"source {source} out of range for n={n}")
    adj = g.adjacency
    dist = [-1] * n
    sigma = [0] * n
    dist[source] = 0
    sigma[source] = 1
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
    return BfsResult(source, tuple(dist), tuple(sigma), tuple(order))


def distances_from(g: Graph, source: int) -> list[int]:
    adj = g.adjacency
    dist = [-1] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    return min(distances_from(g, 0)) >= 0


@dataclass(frozen=True)
class DiameterInfo:
    diameter: int
    connected: bool


def diameter_info(g: Graph) -> DiameterInfo:
    """Largest distance over connected pairs, with a connectivity flag."""
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    best = 0
    connected = True
    for s in range(g.vertex_count):
        dist = distances_from(g, s)
        best = max(best, max(dist))
        if s == 0 and min(dist) < 0:
            connected = False
    return DiameterInfo(best, connected)


def diameter(g: Graph) -> int:
    return diameter_info(g).diameter


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.vertex_count
    out = []
    for s in range(g.vertex_count):
        if seen[s]:
            continue
        comp = [v for v, d in enumerate(distances_from(g, s)) if d >= 0]
        for v in comp:
            seen[v] = True
        out.append(comp)
    return out
