"""Finite simple graphs stored as adjacency bitsets.

Vertices are the integers ``0..n-1``.  Row ``adj[u]`` is a Python int whose
bit ``v`` is set iff ``{u, v}`` is an edge.  Python ints are unbounded, so
the same representation serves every ``n`` without a separate fallback.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, ParseError

GRAPH6_HEADER = ">>graph6<<"


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        if len(self.adj) != self.n:
            raise InputError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise InputError(f"row {u} has a bit outside 0..{self.n - 1}")
            if row >> u & 1:
                raise InputError(f"loop at vertex {u}")
            for v in bits(row):
                if not self.adj[v] >> u & 1:
                    raise InputError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << u) for u in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, u: int) -> list:
        return list(bits(self.adj[u]))

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    def degrees(self) -> list:
        return [row.bit_count() for row in self.adj]

    def edges(self) -> Iterator[tuple]:
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                yield (u, u + 1 + v)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which vertex ``u`` is renamed ``perm[u]``."""
        rows = [0] * self.n
        for u, v in self.edges():
            a, b = perm[u], perm[v]
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return Graph(self.n, tuple(rows))

    def components(self) -> list:
        """Connected components as ascending vertex lists, ordered by minimum vertex."""
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(list(bits(comp)))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count}, g6={to_graph6(self)!r})"


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ row ^ (1 << u) for u, row in enumerate(g.adj)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    return Graph(g.n + h.n, g.adj + tuple(row << shift for row in h.adj))


def induced_subgraph(g: Graph, s) -> Graph:
    """Subgraph induced on ``s`` (an iterable of vertices or a bitmask).

    Vertices are relabelled ``0..|s|-1`` in ascending original order.
    """
    verts = sorted(set(bits(s))) if isinstance(s, int) else sorted(set(s))
    for v in verts:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} not in graph of order {g.n}")
    pos = {v: i for i, v in enumerate(verts)}
    sel = mask_of(verts)
    rows = []
    for v in verts:
        row = 0
        for w in bits(g.adj[v] & sel):
            row |= 1 << pos[w]
        rows.append(row)
    return Graph(len(verts), tuple(rows))


# -- graph6 ------------------------------------------------------------------

def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 68719476736:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise InputError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    out = bytearray(_encode_n(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    s = text.strip("\r\n")
    start = 0
    if s.startswith(GRAPH6_HEADER):
        start = len(GRAPH6_HEADER)
    data = s.encode("ascii", errors="replace")
    for i in range(start, len(data)):
        if not 63 <= data[i] <= 126:
            raise ParseError(f"character {data[i]!r} outside 63..126", offset=i)
    if len(data) <= start:
        raise ParseError("empty graph6 string", offset=start)
    pos = start
    if data[pos] != 126:
        n = data[pos] - 63
        pos += 1
    elif len(data) > pos + 1 and data[pos + 1] == 126:
        if len(data) < pos + 8:
            raise ParseError("truncated vertex count", offset=len(data))
        n = 0
        for c in data[pos + 2:pos + 8]:
            n = n << 6 | (c - 63)
        pos += 8
    else:
        if len(data) < pos + 4:
            raise ParseError("truncated vertex count", offset=len(data))
        n = 0
        for c in data[pos + 1:pos + 4]:
            n = n << 6 | (c - 63)
        pos += 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    have = len(data) - pos
    if have != need:
        raise ParseError(f"expected {need} data bytes for n={n}, found {have}",
                         offset=pos + min(have, need))
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            c = data[pos + k // 6] - 63
            if c >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if nbits % 6:
        pad = 6 - nbits % 6
        if (data[-1] - 63) & ((1 << pad) - 1):
            raise ParseError("nonzero padding bits", offset=len(data) - 1)
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> list:
    return [from_graph6(line) for line in lines if line.strip()]


def to_dot(g: Graph, colors: Optional[Sequence[int]] = None, name: str = "G") -> str:
    """Render ``g`` as an undirected DOT graph; ``colors`` become a node attribute."""
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        attr = f' [color="{colors[v]}"]' if colors is not None else ""
        lines.append(f"  {v}{attr};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def all_pairs(n: int):
    return combinations(range(n), 2)


def are_isomorphic(g: Graph, h: Graph) -> Optional[dict]:
    """Return a vertex bijection ``g -> h`` if the graphs are isomorphic, else None."""
    if g.n != h.n or g.edge_count != h.edge_count or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    from .symmetry import ColoredStructure, canonical_form

    lab_g, cert_g = canonical_form(ColoredStructure.plain(g))
    lab_h, cert_h = canonical_form(ColoredStructure.plain(h))
    if cert_g != cert_h:
        return None
    # lab maps vertex -> canonical position; compose g -> canon -> h
    inv_h = {p: v for v, p in lab_h.items()}
    return {v: inv_h[p] for v, p in lab_g.items()}
