"""Canonical labelling by partition refinement with individualisation.

The search follows the usual nauty scheme: equitable refinement of an
ordered partition, individualisation of a vertex of the first non-singleton
cell, refinement traces as node invariants, and pruning by the orbits of the
automorphisms found so far. The canonical leaf is the one with the greatest
(trace sequence, relabelled adjacency) key.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, GraphError
from .graph6 import write_graph6

DEFAULT_LIMIT = 128


class SizeLimitExceeded(GraphError):
    pass


@dataclass(frozen=True)
class CanonicalLabel:
    canonical_bytes: bytes
    labeling: tuple[int, ...]  # labeling[v] = canonical label of vertex v
    automorphism_generators: tuple[tuple[int, ...], ...]
    group_order: int

    def orbits(self, n: int | None = None) -> list[list[int]]:
        n = len(self.labeling) if n is None else n
        return permutation_orbits(n, self.automorphism_generators)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def permutation_orbits(n: int, gens: Sequence[Sequence[int]]) -> list[list[int]]:
    uf = _UnionFind(n)
    for g in gens:
        for v in range(n):
            uf.union(v, g[v])
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


class _Node:
    __slots__ = ("lab", "cend", "cellof", "ncells")

    def __init__(self, lab, cend, cellof, ncells):
        self.lab = lab
        self.cend = cend
        self.cellof = cellof
        self.ncells = ncells

    def copy(self) -> _Node:
        return _Node(self.lab[:], self.cend[:], self.cellof[:], self.ncells)


class _Leaf:
    __slots__ = ("path", "traces", "lab", "cert")

    def __init__(self, path, traces, lab, cert):
        self.path = path
        self.traces = traces
        self.lab = lab
        self.cert = cert


class _Search:
    def __init__(self, g: Graph, colouring: Sequence[int] | None):
        self.n = g.vertex_count
        self.adj = g.adjacency
        self.masks = g.masks()
        self.colouring = colouring
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None
        self.gens: list[tuple[int, ...]] = []

    # -- partitions -------------------------------------------------------

    def initial(self) -> tuple[_Node, list]:
        n = self.n
        if self.colouring is None:
            lab = list(range(n))
            cend = [0] * n
            cellof = [0] * n
            if n:
                cend[0] = n
            node = _Node(lab, cend, cellof, 1 if n else 0)
            queue = [0] if n else []
        else:
            colours = sorted(set(self.colouring))
            lab = sorted(range(n), key=lambda v: (colours.index(self.colouring[v]), v))
            cend = [0] * n
            cellof = [0] * n
            queue = []
            start = 0
            ncells = 0
            while start < n:
                c = self.colouring[lab[start]]
                end = start
                while end < n and self.colouring[lab[end]] == c:
                    cellof[lab[end]] = start
                    end += 1
                cend[start] = end
                queue.append(start)
                ncells += 1
                start = end
            node = _Node(lab, cend, cellof, ncells)
        trace = self.refine(node, queue)
        return node, trace

    def refine(self, node: _Node, queue: list[int]) -> tuple:
        n = self.n
        masks = self.masks
        lab, cend, cellof = node.lab, node.cend, node.cellof
        inq = [False] * n
        q = deque(queue)
        for s in queue:
            inq[s] = True
        trace = []
        while q and node.ncells < n:
            w = q.popleft()
            inq[w] = False
            wmask = 0
            for i in range(w, cend[w]):
                wmask |= 1 << lab[i]
            start = 0
            while start < n:
                end = cend[start]
                if end - start > 1:
                    counts = [(masks[lab[i]] & wmask).bit_count() for i in range(start, end)]
                    c0 = counts[0]
                    if any(c != c0 for c in counts):
                        order = sorted(range(end - start), key=counts.__getitem__)
                        verts = [lab[start + i] for i in order]
                        cs = [counts[i] for i in order]
                        frags = []
                        fs = 0
                        for i in range(1, len(cs) + 1):
                            if i == len(cs) or cs[i] != cs[fs]:
                                frags.append((start + fs, start + i, cs[fs]))
                                fs = i
                        lab[start:end] = verts
                        for fstart, fend, _ in frags:
                            cend[fstart] = fend
                            for i in range(fstart, fend):
                                cellof[lab[i]] = fstart
                        node.ncells += len(frags) - 1
                        trace.append((start, tuple((c, fe - fb) for fb, fe, c in frags)))
                        if inq[start]:
                            for fstart, _, _ in frags[1:]:
                                q.append(fstart)
                                inq[fstart] = True
                        else:
                            big = max(range(len(frags)), key=lambda i: (frags[i][1] - frags[i][0], -i))
                            for i, (fstart, _, _) in enumerate(frags):
                                if i != big:
                                    q.append(fstart)
                                    inq[fstart] = True
                start = end
        trace.append((node.ncells,))
        return tuple(trace)

    def individualize(self, node: _Node, v: int) -> tuple[_Node, tuple]:
        child = node.copy()
        lab, cend, cellof = child.lab, child.cend, child.cellof
        start = cellof[v]
        end = cend[start]
        i = lab.index(v, start, end)
        lab[start], lab[i] = lab[i], lab[start]
        cend[start] = start + 1
        cend[start + 1] = end
        for j in range(start + 1, end):
            cellof[lab[j]] = start + 1
        child.ncells += 1
        trace = self.refine(child, [start])
        return child, trace

    def target_cell(self, node: _Node) -> list[int]:
        start = 0
        n = self.n
        while start < n:
            end = node.cend[start]
            if end - start > 1:
                return sorted(node.lab[start:end])
            start = end
        return []

    def certificate(self, lab: list[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        adj = self.adj
        out = []
        for v in lab:
            m = 0
            for u in adj[v]:
                m |= 1 << pos[u]
            out.append(m)
        return tuple(out)

    # -- search -----------------------------------------------------------

    def stabiliser_orbits(self, prefix: Sequence[int]) -> _UnionFind:
        uf = _UnionFind(self.n)
        for g in self.gens:
            if all(g[p] == p for p in prefix):
                for v in range(self.n):
                    if g[v] != v:
                        uf.union(v, g[v])
        return uf

    def add_automorphism(self, lab: list[int], target: list[int]) -> None:
        perm = [0] * self.n
        for a, b in zip(lab, target):
            perm[a] = b
        gen = tuple(perm)
        if any(gen[v] != v for v in range(self.n)) and gen not in self.gens:
            self.gens.append(gen)

    @staticmethod
    def _divergence(path: list[int], other: list[int]) -> int:
        d = 0
        for a, b in zip(path, other):
            if a != b:
                break
            d += 1
        return d

    def run(self) -> None:
        node, trace = self.initial()
        self.search(node, [], [trace], True)

    def search(self, node: _Node, path: list[int], traces: list[tuple], eq_first: bool):
        level = len(path)
        first = self.first
        if first is not None:
            if eq_first:
                eq_first = level < len(first.traces) and traces[level] == first.traces[level]
            if not eq_first and traces < self.best.traces[: level + 1]:
                return None

        if node.ncells == self.n:
            return self.leaf(node, path, traces, eq_first)

        cell = self.target_cell(node)
        explored: list[int] = []
        ngens = -1
        uf = None
        for v in cell:
            if explored:
                if ngens != len(self.gens):
                    uf = self.stabiliser_orbits(path)
                    ngens = len(self.gens)
                rv = uf.find(v)
                if any(uf.find(u) == rv for u in explored):
                    continue
            child, trace = self.individualize(node, v)
            r = self.search(child, path + [v], traces + [trace], eq_first)
            explored.append(v)
            if r is not None and r < level:
                return r
        return None

    def leaf(self, node: _Node, path, traces, eq_first: bool):
        lab = node.lab
        cert = self.certificate(lab)
        if self.first is None:
            self.first = self.best = _Leaf(path, traces, lab[:], cert)
            return None
        first, best = self.first, self.best
        if eq_first and traces == first.traces and cert == first.cert:
            self.add_automorphism(lab, first.lab)
            return self._divergence(path, first.path)
        if traces == best.traces:
            if cert == best.cert:
                self.add_automorphism(lab, best.lab)
                return self._divergence(path, best.path)
            if cert > best.cert:
                self.best = _Leaf(path, traces, lab[:], cert)
        elif traces > best.traces:
            self.best = _Leaf(path, traces, lab[:], cert)
        return None

    def group_order(self) -> int:
        order = 1
        path = self.first.path if self.first else []
        for level, v in enumerate(path):
            uf = self.stabiliser_orbits(path[:level])
            rv = uf.find(v)
            order *= sum(1 for u in range(self.n) if uf.find(u) == rv)
        return order


def canonical_form(
    g: Graph, colouring: Sequence[int] | None = None, limit: int = DEFAULT_LIMIT
) -> CanonicalLabel:
    """Canonical graph6 bytes and automorphism group generators of ``g``.

    ``colouring`` optionally assigns a colour to each vertex; isomorphisms
    must then preserve colours (colour values are compared by order).
    """
    n = g.vertex_count
    if n > limit:
        raise SizeLimitExceeded(f"{n} vertices exceeds the canonical-labelling limit {limit}")
    if colouring is not None and len(colouring) != n:
        raise GraphError("colouring length does not match vertex count")
    if n == 0:
        return CanonicalLabel(write_graph6(g), (), (), 1)
    s = _Search(g, colouring)
    s.run()
    lab = s.best.lab
    labeling = [0] * n
    for i, v in enumerate(lab):
        labeling[v] = i
    canon = g.relabel(labeling)
    cbytes = write_graph6(canon)
    if colouring is not None:
        colours = sorted(set(colouring))
        sig = ",".join(str(colours.index(colouring[v])) for v in lab)
        cbytes += b"|" + sig.encode()
    return CanonicalLabel(cbytes, tuple(labeling), tuple(s.gens), s.group_order())


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g).canonical_bytes == canonical_form(h).canonical_bytes


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    n = g.vertex_count
    if sorted(perm) != list(range(n)):
        return False
    return all(g.has_edge(perm[u], perm[v]) for u, v in g.edges())
