"""Shortest-path structure of the circulants C_{18n-3}(1,6n) and C_{18n+3}(1,6n).

Structural functions take and return 1-indexed labels ``1..k``; the
``Graph`` vertex ``i`` carries label ``i + 1``.

For a source ``s`` the six edges off every shortest path from ``s`` are given
in closed form, and a piecewise map ``phi`` is an automorphism of the graph
with those six edges removed. Removing them changes no distance or path
count from ``s``, so ``phi`` (which fixes ``s`` under the default anchor)
preserves every single-source contribution. The certificate additionally
checks that each orbit of ``<phi, reflection about s>`` on the remaining
edges holds as many length-1 chords as length-6n chords; summing over
orbits then equates the total length-1 and length-6n contributions from
``s``, and rotating ``s`` gives uniformity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .centrality import edge_betweenness, format_rational
from .graph import EdgeId, Graph, GraphError, circulant, distances_from
from .symmetry import edge_orbits

CLASS_TAGS = (1, 2)


@dataclass(frozen=True)
class ClassId:
    """Class 1 is C_{18n-3}(1, 6n), Class 2 is C_{18n+3}(1, 6n)."""

    tag: int
    n: int

    def __post_init__(self) -> None:
        if self.tag not in CLASS_TAGS:
            raise GraphError(f"class tag must be 1 or 2, got {self.tag}")
        if self.n < 1:
            raise GraphError(f"class parameter n must be >= 1, got {self.n}")

    @property
    def k(self) -> int:
        return 18 * self.n - 3 if self.tag == 1 else 18 * self.n + 3

    @property
    def chord(self) -> int:
        return 6 * self.n

    @property
    def a(self) -> int:
        n = self.n
        return (3 * n - 1) * 6 * n if self.tag == 1 else 3 * n * 6 * n

    @property
    def period(self) -> int:
        # modulus of the branch intervals of phi
        return 6 * self.n - 1 if self.tag == 1 else 6 * self.n + 1

    def graph(self) -> Graph:
        return circulant(self.k, [1, self.chord])

    def label(self, x: int) -> int:
        return (x - 1) % self.k + 1

    def edge(self, x: int, y: int) -> EdgeId:
        u, v = self.label(x), self.label(y)
        if u == v:
            raise GraphError(f"degenerate edge ({x}, {y}) mod {self.k}")
        return (u, v) if u < v else (v, u)

    def default_source(self) -> int:
        n = self.n
        return self.label(2 + 6 * n * (3 * n - 1)) if self.tag == 1 else self.label(2 + 18 * n * n)

    def outer_partner(self, x: int) -> int:
        """The neighbour of ``x`` along the length-1 chord exchanged by phi."""
        return self.label(x + 1) if self.tag == 1 else self.label(x - 1)

    def __str__(self) -> str:
        return f"Class{self.tag}(n={self.n}): C_{self.k}(1,{self.chord})"


def _check_label(cid: ClassId, v: int, what: str = "vertex") -> None:
    if not 1 <= v <= cid.k:
        raise GraphError(f"{what} {v} outside 1..{cid.k}")


def _require_structural_range(cid: ClassId) -> None:
    if cid.n < 2:
        raise GraphError(f"{cid}: the structural formulas need n >= 2; n = 1 is computed directly")


# -- shortest-path edge support ----------------------------------------------


def shortest_path_edge_support(g: Graph, s: int) -> set[EdgeId]:
    """Edges on at least one shortest path from ``s`` (0-indexed).

    These are exactly the edges whose endpoints lie in consecutive BFS layers.
    """
    if not 0 <= s < g.vertex_count:
        raise GraphError(f"source {s} out of range for n={g.vertex_count}")
    dist = distances_from(g, s)
    if min(dist) < 0:
        raise GraphError("edge support needs a connected graph")
    return {(u, v) for u, v in g.edges() if abs(dist[u] - dist[v]) == 1}


def support_complement(cid: ClassId, s: int) -> frozenset[EdgeId]:
    """Edges of the class graph on no shortest path from label ``s``, 1-indexed."""
    _check_label(cid, s, "source")
    g = cid.graph()
    support = shortest_path_edge_support(g, s - 1)
    return frozenset((u + 1, v + 1) for u, v in g.edges() if (u, v) not in support)


@dataclass(frozen=True)
class UnusedEdgeSet:
    source: int
    edges: frozenset[EdgeId]


def _unused_formula(cid: ClassId, s: int) -> frozenset[EdgeId]:
    a, c = cid.a, cid.chord
    if cid.tag == 1:
        pairs = [
            (s + a, s + a + 1),
            (s - a, s - a - 1),
            (s - a, s + a),
            (s + a + 1, s + a + 1 - c),
            (s - a - 1, s - a - 1 + c),
            (s + a + 1 - c, s - a - 1 + c),
        ]
    else:
        pairs = [
            (s + a, s + a - 1),
            (s - a, s + a),
            (s - a, s - a + 1),
            (s + a - 1, s + a - 1 - c),
            (s - a + 1, s - a + 1 + c),
            (s + a - 1 - c, s - a + 1 + c),
        ]
    return frozenset(cid.edge(x, y) for x, y in pairs)


def predicted_unused_edges(cid: ClassId, s: int) -> UnusedEdgeSet:
    """The six edges predicted to avoid every shortest path from ``s``."""
    _require_structural_range(cid)
    _check_label(cid, s, "source")
    edges = _unused_formula(cid, s)
    if len(edges) != 6:
        raise AssertionError(f"{cid}: predicted set for s={s} collapsed to {len(edges)} edges")
    return UnusedEdgeSet(s, edges)


def unused_formula_matches(cid: ClassId, s: int) -> bool:
    """Compare the six-edge formula with the BFS support for any n, n = 1 included."""
    return _unused_formula(cid, s) == support_complement(cid, s)


def layer_edge_counts(cid: ClassId, s: int) -> dict[int, int]:
    """Number of support edges joining BFS depth ``j - 1`` to depth ``j``, keyed by ``j``."""
    _check_label(cid, s, "source")
    g = cid.graph()
    dist = distances_from(g, s - 1)
    counts: dict[int, int] = {}
    for u, v in g.edges():
        if abs(dist[u] - dist[v]) == 1:
            j = max(dist[u], dist[v])
            counts[j] = counts.get(j, 0) + 1
    return dict(sorted(counts.items()))


# -- the piecewise map phi -----------------------------------------------------


def _window(cid: ClassId, anchor: int) -> tuple[int, int]:
    """``(B, lo)``: the branch base and the start of the k-long branch window."""
    b = anchor - anchor % cid.period
    lo = b + 3 - cid.chord if cid.tag == 1 else b - cid.chord
    return b, lo


def _representative(cid: ClassId, anchor: int, v: int) -> tuple[int, int]:
    b, lo = _window(cid, anchor)
    return b, lo + (v - lo) % cid.k


def phi(cid: ClassId, anchor: int, v: int) -> int:
    """Closed form of the piecewise map, recursive branches unrolled."""
    _require_structural_range(cid)
    _check_label(cid, anchor, "anchor")
    _check_label(cid, v)
    a, c, n = anchor, cid.chord, cid.n
    b, w = _representative(cid, anchor, v)
    if cid.tag == 1:
        if b + 2 <= w <= b + c:
            r = a - c * (a - w)
        elif w == b + 1:
            r = a - c * (a - b - 2) - 1
        elif w == b + c + 1:
            r = a - c * (a - b - c) + 1
        elif b + c + 2 <= w <= b + 12 * n - 1:
            r = a - c * (a - w + c) + 1
        else:  # b + 3 - c <= w <= b
            r = a - c * (a - w - c) - 1
    else:

        def core(x: int) -> int:
            # x in [b + 1, b + c + 1]
            if x >= b + 3:
                return a + c * (a - x)
            top = a + c * (a - b - 3)
            return top + 12 * n + 1 if x == b + 2 else top + 18 * n + 1

        if b + 1 <= w <= b + c + 1:
            r = core(w)
        elif b - c <= w <= b:
            r = core(w + c + 1) + c + 1
        else:  # b + c + 2 <= w <= b + 12n + 2
            r = core(w - c - 1) - c - 1
    return cid.label(r)


def phi_recursive(cid: ClassId, anchor: int, v: int) -> int:
    """The piecewise definition evaluated literally, recursion included.

    Branches are tried in the listed order, so an earlier branch wins at a
    shared endpoint.
    """
    _require_structural_range(cid)
    _check_label(cid, anchor, "anchor")
    _check_label(cid, v)
    a, c, n = anchor, cid.chord, cid.n
    b, w = _representative(cid, anchor, v)

    def f(x: int, depth: int) -> int:
        if depth > 4:
            raise RecursionError(f"phi recursion did not terminate at {x}")
        if cid.tag == 1:
            if b + 2 <= x <= b + c:
                return a - c * (a - x)
            if x == b + 1:
                return f(x + 1, depth + 1) - 1
            if x == b + c + 1:
                return f(x - 1, depth + 1) + 1
            if b + 2 + c <= x <= b + 12 * n - 1:
                return f(x - c, depth + 1) + 1
            if b + 3 - c <= x <= b:
                return f(x + c, depth + 1) - 1
        else:
            if b + 3 <= x <= b + c + 1:
                return a + c * (a - x)
            if x == b + 2:
                return f(x + 1, depth + 1) + 12 * n + 1
            if x == b + 1:
                return f(x + 1, depth + 1) + c
            if b - c <= x <= b:
                return f(x + c + 1, depth + 1) + c + 1
            if b + c + 2 <= x <= b + 12 * n + 2:
                return f(x - c - 1, depth + 1) - c - 1
        raise GraphError(f"no branch covers {x}")

    return cid.label(f(w, 0))


def anchor_swaps(cid: ClassId, anchor: int) -> bool:
    """Whether phi with this anchor carries the length-1 chord at the anchor onto the length-6n one.

    This holds only for part of the residues of the anchor modulo the period.
    """
    _require_structural_range(cid)
    r = anchor % cid.period
    if cid.tag == 1:
        return 2 <= r <= 6 * cid.n - 2
    return 4 <= r <= 6 * cid.n


# -- verification of the pruned automorphism -----------------------------------


@dataclass(frozen=True)
class PrunedAutomorphism:
    class_id: ClassId
    source: int
    anchor: int
    mapping: tuple[int, ...]  # mapping[v - 1] is the image of label v
    e1: EdgeId
    e2: EdgeId

    def image(self, v: int) -> int:
        return self.mapping[v - 1]


class PrunedAutomorphismError(AssertionError):
    """A failed check; ``vertex`` or ``edge`` names the witness."""

    def __init__(self, message: str, kind: str, vertex: int | None = None, edge: EdgeId | None = None):
        super().__init__(message)
        self.kind = kind
        self.vertex = vertex
        self.edge = edge

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertex": self.vertex, "edge": None if self.edge is None else list(self.edge),
                "message": str(self)}


def pruned_adjacency(cid: ClassId, removed: Iterable[EdgeId]) -> dict[int, set[int]]:
    """1-indexed adjacency of the class graph minus ``removed``."""
    drop = set(removed)
    adj: dict[int, set[int]] = {v: set() for v in range(1, cid.k + 1)}
    for u, v in cid.graph().edges():
        e = (u + 1, v + 1)
        if e not in drop:
            adj[u + 1].add(v + 1)
            adj[v + 1].add(u + 1)
    return adj


def transported_map(cid: ClassId, source: int, anchor: int) -> tuple[int, ...]:
    """phi conjugated by the rotation taking the default source to ``source``.

    ``psi(v) = phi_{anchor - t}(v - t) + t`` with ``t = source - s0``.
    """
    t = source - cid.default_source()
    base = cid.label(anchor - t)
    return tuple(cid.label(phi(cid, base, cid.label(v - t)) + t) for v in range(1, cid.k + 1))


def verify_pruned_automorphism(
    cid: ClassId, s: int | None = None, anchor: int | None = None, pruned: bool = True
) -> PrunedAutomorphism:
    """Build the map for source ``s`` and check it on G - E_s (or on G if not ``pruned``).

    Defaults: ``s`` is the default fixed source and ``anchor`` equals ``s``.
    Raises ``PrunedAutomorphismError`` naming the first violation.
    """
    _require_structural_range(cid)
    s = cid.default_source() if s is None else s
    anchor = s if anchor is None else anchor
    _check_label(cid, s, "source")
    _check_label(cid, anchor, "anchor")
    k = cid.k
    mapping = transported_map(cid, s, anchor)

    seen: dict[int, int] = {}
    for v, img in enumerate(mapping, start=1):
        if img in seen:
            raise PrunedAutomorphismError(
                f"{cid}: vertices {seen[img]} and {v} both map to {img}", "bijection", vertex=v
            )
        seen[img] = v

    removed = predicted_unused_edges(cid, s).edges if pruned else frozenset()
    adj = pruned_adjacency(cid, removed)
    for v in range(1, k + 1):
        image_nbrs = {mapping[u - 1] for u in adj[v]}
        target = adj[mapping[v - 1]]
        if image_nbrs != target:
            bad = sorted(image_nbrs ^ target)[0]
            if bad in image_nbrs:
                pre = next(u for u in adj[v] if mapping[u - 1] == bad)
                edge = cid.edge(v, pre)
            else:
                edge = cid.edge(mapping[v - 1], bad)
            raise PrunedAutomorphismError(
                f"{cid}: adjacency not preserved at vertex {v} (edge {edge})", "adjacency", vertex=v, edge=edge
            )

    e1 = cid.edge(anchor, cid.outer_partner(anchor))
    e2 = cid.edge(anchor, anchor + cid.chord)
    image = cid.edge(mapping[e1[0] - 1], mapping[e1[1] - 1])
    if image != e2:
        raise PrunedAutomorphismError(f"{cid}: {e1} maps to {image}, not {e2}", "swap", edge=e1)
    return PrunedAutomorphism(cid, s, anchor, mapping, e1, e2)


def orbit_balance(cid: ClassId, aut: PrunedAutomorphism) -> bool:
    """Each orbit of <aut, reflection about the source> on G - E_s has equally many
    length-1 and length-6n chords; requires ``aut`` to fix the source."""
    k = cid.k
    s = aut.source
    if aut.image(s) != s:
        return False
    removed = predicted_unused_edges(cid, s).edges
    h = Graph.from_edges(k, ((u, v) for u, v in cid.graph().edges() if (u + 1, v + 1) not in removed))
    gen = [x - 1 for x in aut.mapping]
    reflect = [(2 * (s - 1) - v) % k for v in range(k)]
    for orbit in edge_orbits(h, [gen, reflect]):
        outer = sum(1 for u, v in orbit if (v - u) % k in (1, k - 1))
        if 2 * outer != len(orbit):
            return False
    return True


# -- the certificate -------------------------------------------------------------

DIRECT_VALUES = {(1, 1): Fraction(13), (2, 1): Fraction(22)}


@dataclass(frozen=True)
class SourceCheck:
    source: int
    unused_match: bool
    automorphism_valid: bool | None
    orbit_balanced: bool | None
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.unused_match and self.automorphism_valid is not False and self.orbit_balanced is not False

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "unused_match": self.unused_match,
            "automorphism_valid": self.automorphism_valid,
            "orbit_balanced": self.orbit_balanced,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class EbuCertificate:
    class_id: ClassId
    per_source_checks: tuple[SourceCheck, ...]
    orbit_count: int
    verdict: bool
    uniform_value: Fraction | None = None
    exact_uniform: bool | None = None
    method: str = "structural"
    failures: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        cid = self.class_id
        return {
            "schema": "ebu-certificate/1",
            "class": cid.tag,
            "n": cid.n,
            "k": cid.k,
            "chords": [1, cid.chord],
            "method": self.method,
            "orbit_count": self.orbit_count,
            "verdict": self.verdict,
            "exact_uniform": self.exact_uniform,
            "value": None if self.uniform_value is None else format_rational(self.uniform_value),
            "per_source": [c.to_json() for c in self.per_source_checks],
            "failures": list(self.failures),
        }


def check_source(cid: ClassId, s: int) -> SourceCheck:
    unused = unused_formula_matches(cid, s)
    if cid.n < 2:
        return SourceCheck(s, unused, None, None)
    try:
        aut = verify_pruned_automorphism(cid, s)
    except PrunedAutomorphismError as exc:
        return SourceCheck(s, unused, False, None, exc.to_json())
    return SourceCheck(s, unused, True, orbit_balance(cid, aut))


def ebu_certificate(cid: ClassId, cross_check: bool = True) -> EbuCertificate:
    """Check every source, count edge orbits, and (by default) compare with exact B'."""
    g = cid.graph()
    orbit_count = len(edge_orbits(g))
    checks = tuple(check_source(cid, s) for s in range(1, cid.k + 1))
    failures: list[str] = []
    value = None
    exact = None
    if cross_check or cid.n < 2:
        report = edge_betweenness(g)
        exact = report.is_uniform
        value = report.uniform_value
    if cid.n < 2:
        method = "direct"
        expected = DIRECT_VALUES[(cid.tag, cid.n)]
        if value != expected:
            failures.append(f"direct value {value} differs from {expected}")
    else:
        method = "structural"
        for c in checks:
            if not c.passed:
                failures.append(f"source {c.source} failed")
        if exact is False:
            failures.append("exact edge betweenness is not uniform")
    if orbit_count > 2:
        failures.append(f"{orbit_count} edge orbits")
    return EbuCertificate(cid, checks, orbit_count, not failures, value, exact, method, tuple(failures))
