"""Transitivity, distance-regularity and the circulant-specific criteria."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .canonical import _UnionFind, canonical_form, permutation_orbits
from .graph import CirculantSpec, Graph, GraphError, circulant, distances_from, is_connected

# -- edge and vertex transitivity ------------------------------------------


def deletion_classes(g: Graph, stop_at: int | None = None) -> dict[bytes, list[tuple[int, int]]]:
    """Group the edges of ``g`` by the canonical form of ``g - e``.

    With ``stop_at`` the grouping stops as soon as that many classes exist.
    """
    groups: dict[bytes, list[tuple[int, int]]] = {}
    for e in g.edges():
        key = canonical_form(g.remove_edges([e])).canonical_bytes
        groups.setdefault(key, []).append(e)
        if stop_at is not None and len(groups) >= stop_at:
            break
    return groups


def is_edge_transitive(g: Graph, method: str = "deletion") -> bool:
    """Edge transitivity via single-edge deletions (default) or edge orbits.

    The deletion method uses the characterisation that ``g`` is
    edge-transitive iff all ``g - e`` are pairwise isomorphic.
    """
    if g.edge_count == 0:
        raise GraphError("edge transitivity is undefined for an edgeless graph")
    if method == "deletion":
        return len(deletion_classes(g, stop_at=2)) == 1
    if method == "orbits":
        return len(edge_orbits(g)) == 1
    raise ValueError(f"unknown method {method!r}")


def edge_orbits(g: Graph, gens: Sequence[Sequence[int]] | None = None) -> list[list[tuple[int, int]]]:
    """Orbits of the automorphism group on the edge set."""
    if gens is None:
        gens = canonical_form(g).automorphism_generators
    edges = list(g.edges())
    index = {e: i for i, e in enumerate(edges)}
    uf = _UnionFind(len(edges))
    for perm in gens:
        for i, (u, v) in enumerate(edges):
            a, b = perm[u], perm[v]
            uf.union(i, index[(a, b) if a < b else (b, a)])
    groups: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, e in enumerate(edges):
        groups[uf.find(i)].append(e)
    return sorted(groups.values())


def vertex_orbits(g: Graph) -> list[list[int]]:
    return permutation_orbits(g.vertex_count, canonical_form(g).automorphism_generators)


def is_vertex_transitive(g: Graph) -> bool:
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    return len(vertex_orbits(g)) == 1


# -- distance regularity -----------------------------------------------------


@dataclass(frozen=True)
class DistanceRegularity:
    distance_regular: bool
    b: tuple[int, ...] | None = None
    c: tuple[int, ...] | None = None
    witness: tuple[int, int] | None = None  # (v, u) pair breaking regularity

    @property
    def intersection_array(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if not self.distance_regular:
            return None
        return self.b[:-1], self.c[1:]


def distance_regularity(g: Graph) -> DistanceRegularity:
    """Check from raw BFS layers that b_i and c_i depend only on i."""
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    if not is_connected(g):
        raise GraphError("distance regularity needs a connected graph")
    adj = g.adjacency
    b: dict[int, int] = {}
    c: dict[int, int] = {}
    for v in range(g.vertex_count):
        dist = distances_from(g, v)
        for u, i in enumerate(dist):
            up = down = 0
            for w in adj[u]:
                if dist[w] == i + 1:
                    up += 1
                elif dist[w] == i - 1:
                    down += 1
            if b.setdefault(i, up) != up or c.setdefault(i, down) != down:
                return DistanceRegularity(False, witness=(v, u))
    d = max(b)
    return DistanceRegularity(True, tuple(b[i] for i in range(d + 1)), tuple(c[i] for i in range(d + 1)))


def is_distance_regular(g: Graph) -> bool:
    return distance_regularity(g).distance_regular


# -- circulant criteria -----------------------------------------------------


@dataclass(frozen=True)
class CirculantIsoParams:
    k: int
    a: int
    b: int
    lam: int
    Lam: Fraction

    @property
    def modulus(self) -> int:
        return self.k // gcd(self.k, self.a)

    def signed_values(self) -> frozenset[Fraction]:
        """``Lam`` together with the value obtained by negating ``lam``."""
        m = self.modulus
        gb = gcd(self.k, self.b)
        return frozenset({self.Lam, Fraction((m - self.lam) % m, gb)})


def _check_two_chords(k: int, a: int, b: int) -> None:
    if not (1 <= a <= k // 2 and 1 <= b <= k // 2):
        raise GraphError(f"chords ({a}, {b}) outside [1, {k // 2}]")
    if gcd(gcd(k, a), b) != 1:
        raise GraphError(f"C_{k}({a},{b}) is disconnected")


def circulant_lambda(k: int, a: int, b: int) -> CirculantIsoParams:
    """lambda_k(a, b): least lam >= 0 with gcd(k, a)*b = lam*a (mod k).

    The congruence fixes ``lam`` only modulo k/gcd(k, a); the least
    representative is returned. ``Lam`` is lam/gcd(k, b).
    """
    _check_two_chords(k, a, b)
    g = gcd(k, a)
    m = k // g
    lam = (b * pow(a // g, -1, m)) % m if m > 1 else 0
    assert (g * b - lam * a) % k == 0
    return CirculantIsoParams(k, a, b, lam, Fraction(lam, gcd(k, b)))


def circulant_isomorphic(k: int, p: Sequence[int], q: Sequence[int]) -> bool:
    """Isomorphism of connected 2-circulants from the gcd / Lambda conditions.

    Lambda values are compared up to the sign of lambda, since chords are
    only defined up to sign.
    """
    a, b = p
    a2, b2 = q
    _check_two_chords(k, a, b)
    _check_two_chords(k, a2, b2)
    if gcd(k, a) > gcd(k, b):
        a, b = b, a
    if gcd(k, a2) > gcd(k, b2):
        a2, b2 = b2, a2
    ga, gb, ga2, gb2 = gcd(k, a), gcd(k, b), gcd(k, a2), gcd(k, b2)
    mine = circulant_lambda(k, a, b).signed_values()
    if ga == ga2 < gb == gb2:
        return bool(mine & circulant_lambda(k, a2, b2).signed_values())
    if ga == ga2 == gb == gb2:
        theirs = circulant_lambda(k, a2, b2).signed_values() | circulant_lambda(k, b2, a2).signed_values()
        return bool(mine & theirs)
    return False


def _multiplier_equivalent(k: int, s: frozenset[int], t: frozenset[int]) -> bool:
    return any(gcd(u, k) == 1 and frozenset(u * x % k for x in s) == t for u in range(1, k))


def tetravalent_circulant_edge_transitive(k: int, b: int) -> bool:
    """Edge transitivity of C_k(1, b) from the tetravalent classification.

    True iff b^2 = +-1 (mod k), or k = 2m and C_k(1, b) is C_{2m}(1, m+1);
    the chord m+1 is read as its equivalent m-1.
    """
    if k < 5 or not 2 <= b <= (k - 1) // 2:
        raise GraphError(f"C_{k}(1,{b}) is not a simple tetravalent circulant")
    if (b * b) % k in (1, k - 1):
        return True
    if k % 2 == 0:
        m = k // 2
        if m - 1 >= 2:
            s = CirculantSpec(k, (1, b)).connection_set()
            t = CirculantSpec(k, (1, m - 1)).connection_set()
            return _multiplier_equivalent(k, s, t)
    return False


def _is_subgroup(k: int, s: frozenset[int]) -> bool:
    return all((x + y) % k in s for x in s for y in s)


def _quadratic_residues(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, p))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def circulant_distance_regular(spec: CirculantSpec) -> bool:
    """Distance regularity of a connected circulant from its connection set.

    Distance-regular circulants are exactly cycles, complete graphs,
    complete multipartite graphs, K_{m,m} minus a perfect matching with m
    odd, and Paley graphs of prime order.
    """
    k = spec.order
    s = spec.connection_set()
    if not spec.chords or gcd(k, *spec.chords) != 1:
        raise GraphError(f"{spec} is disconnected")
    if len(s) == 2:
        return True  # connected 2-regular: a cycle
    if len(s) == k - 1:
        return True
    # complete multipartite: non-adjacency plus identity forms a subgroup
    if _is_subgroup(k, frozenset(set(range(k)) - s)):
        return True
    if k % 2 == 0 and (k // 2) % 2 == 1:
        m = k // 2
        if all(x % 2 == 1 for x in s) and len(s) == m - 1:
            return True
    if _is_prime(k) and k % 4 == 1:
        qr = _quadratic_residues(k)
        if s == qr or s == frozenset(range(1, k)) - qr:
            return True
    return False


def circulant_is_vertex_transitive(spec: CirculantSpec) -> bool:
    g = circulant(spec)
    k = spec.order
    rot = tuple((v + 1) % k for v in range(k))
    return all(g.has_edge(rot[u], rot[v]) for u, v in g.edges())
