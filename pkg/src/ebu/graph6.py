"""graph6 encoding and decoding (bit-exact, undirected simple graphs only)."""

from __future__ import annotations

from typing import IO, Iterable, Iterator

from .graph import Graph, GraphError

HEADER = b">>graph6<<"


class Graph6Error(GraphError):
    pass


def _encode_size(n: int) -> bytes:
    if n < 0:
        raise Graph6Error(f"negative order {n}")
    if n <= 62:
        return bytes([63 + n])
    if n <= 258047:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    if n <= 68719476735:
        return bytes([126, 126] + [63 + (n >> s & 63) for s in (30, 24, 18, 12, 6, 0)])
    raise Graph6Error(f"order {n} not representable in graph6")


def _decode_size(data: bytes) -> tuple[int, int]:
    """Return ``(n, offset of the edge bytes)``."""
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 36-bit length prefix")
        n = 0
        for b in data[2:8]:
            n = n << 6 | (b - 63)
        if n <= 258047:
            raise Graph6Error("non-minimal length prefix")
        return n, 8
    if len(data) < 4:
        raise Graph6Error("truncated 18-bit length prefix")
    n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
    if n <= 62:
        raise Graph6Error("non-minimal length prefix")
    return n, 4


def parse_graph6(data: bytes | str) -> Graph:
    """Decode one graph6 line; an optional ``>>graph6<<`` header is tolerated."""
    if isinstance(data, str):
        data = data.encode("ascii", errors="replace")
    data = data.rstrip(b"\r\n")
    if data.startswith(HEADER):
        data = data[len(HEADER):]
    for b in data:
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b!r} outside the printable graph6 range")
    n, off = _decode_size(data)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[off:]
    if len(body) < need:
        raise Graph6Error(f"expected {need} edge bytes, got {len(body)}")
    if len(body) > need:
        raise Graph6Error("trailing garbage after edge bytes")

    nbrs: list[list[int]] = [[] for _ in range(n)]
    i, j = 0, 1
    bit = 0
    m = 0
    for byte in body:
        x = byte - 63
        for shift in (5, 4, 3, 2, 1, 0):
            if bit >= nbits:
                if x >> shift & 1:
                    raise Graph6Error("nonzero padding bits")
                continue
            if x >> shift & 1:
                nbrs[i].append(j)
                nbrs[j].append(i)
                m += 1
            bit += 1
            i += 1
            if i == j:
                i = 0
                j += 1
    # column-order traversal appends every neighbour list in ascending order
    return Graph._trusted(n, tuple(map(tuple, nbrs)), m)


def write_graph6(g: Graph, header: bool = False) -> bytes:
    n = g.vertex_count
    out = bytearray(HEADER if header else b"")
    out += _encode_size(n)
    acc = 0
    nacc = 0
    for j in range(1, n):
        row = g.adjacency[j]
        lower = set(u for u in row if u < j)
        for i in range(j):
            acc = acc << 1 | (i in lower)
            nacc += 1
            if nacc == 6:
                out.append(63 + acc)
                acc = nacc = 0
    if nacc:
        out.append(63 + (acc << (6 - nacc)))
    return bytes(out)


def iter_graph6_lines(stream: IO[bytes] | Iterable[bytes]) -> Iterator[bytes]:
    """Yield stripped graph6 lines, skipping blank lines."""
    for line in stream:
        line = line.strip()
        if line:
            yield line
