"""Graphs with vertex colours and extra symmetric binary relations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from ..errors import InputError
from ..graph import Graph, bits, complement, induced_subgraph, mask_of


@dataclass(frozen=True)
class ColoredStructure:
    """A graph plus a vertex colouring and zero or more added binary relations.

    The pair colour of ``{u, v}`` is ``adj(u, v) + 2 * rel_0(u, v) + 4 * rel_1(u, v) + ...``,
    so colour 0 means "non-adjacent and unrelated", colour 1 a plain edge, and
    anything ``>= 2`` involves an added relation.  The code is fixed by the
    number of relations, so induced substructures keep the parent's numbering.
    """

    graph: Graph
    vcolor: tuple = None
    relations: tuple = ()

    def __post_init__(self):
        n = self.graph.n
        if self.vcolor is None:
            object.__setattr__(self, "vcolor", (0,) * n)
        if len(self.vcolor) != n:
            raise InputError("vertex colouring has the wrong length")
        full = (1 << n) - 1
        for rel in self.relations:
            if len(rel) != n:
                raise InputError("relation has the wrong number of rows")
            for u, row in enumerate(rel):
                if row & ~full or row >> u & 1:
                    raise InputError(f"relation row {u} is out of range or reflexive")
                for v in bits(row):
                    if not rel[v] >> u & 1:
                        raise InputError("added relations must be symmetric")

    @classmethod
    def plain(cls, g: Graph) -> "ColoredStructure":
        return cls(g)

    @classmethod
    def with_relation(cls, g: Graph, pairs: Iterable[Sequence[int]],
                      vcolor: Optional[Sequence[int]] = None) -> "ColoredStructure":
        rows = [0] * g.n
        for u, v in pairs:
            if u == v:
                raise InputError("relation pairs must be distinct vertices")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(g, tuple(vcolor) if vcolor is not None else None, (tuple(rows),))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def npcolors(self) -> int:
        return 2 << len(self.relations)

    def pair_color(self, u: int, v: int) -> int:
        c = self.graph.adj[u] >> v & 1
        for r, rel in enumerate(self.relations):
            c |= (rel[u] >> v & 1) << (r + 1)
        return c

    @cached_property
    def layers(self) -> tuple:
        """One bitset-row table per nonzero pair colour, in colour order."""
        if not self.relations:
            return (self.graph.adj,)
        n = self.n
        out = []
        for code in range(1, self.npcolors):
            rows = []
            for u in range(n):
                row = self.graph.adj[u] if code & 1 else ~self.graph.adj[u]
                for r, rel in enumerate(self.relations):
                    row &= rel[u] if code >> (r + 1) & 1 else ~rel[u]
                rows.append(row & ((1 << n) - 1) & ~(1 << u))
            out.append(tuple(rows))
        return tuple(out)

    def pattern(self, tup: Sequence[int]) -> tuple:
        """Isomorphism type of the ordered tuple: its colours and pairwise colours."""
        k = len(tup)
        return (tuple(self.vcolor[v] for v in tup),
                tuple(self.pair_color(tup[i], tup[j]) for i in range(k) for j in range(i + 1, k)))

    def induced(self, s) -> "ColoredStructure":
        verts = sorted(set(bits(s))) if isinstance(s, int) else sorted(set(s))
        g = induced_subgraph(self.graph, verts)
        rels = tuple(induced_subgraph(Graph(self.n, rel), verts).adj for rel in self.relations)
        return ColoredStructure(g, tuple(self.vcolor[v] for v in verts), rels)

    def reduct(self) -> Graph:
        return self.graph

    def complement(self) -> "ColoredStructure":
        """Complement the graph part; colours and added relations are kept."""
        return ColoredStructure(complement(self.graph), self.vcolor, self.relations)

    def recolor(self, vcolor: Sequence[int]) -> "ColoredStructure":
        return ColoredStructure(self.graph, tuple(vcolor), self.relations)

    def relabel(self, perm: Sequence[int]) -> "ColoredStructure":
        vc = [0] * self.n
        for u in range(self.n):
            vc[perm[u]] = self.vcolor[u]
        rels = tuple(Graph(self.n, rel).relabel(perm).adj for rel in self.relations)
        return ColoredStructure(self.graph.relabel(perm), tuple(vc), rels)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if sorted(perm) != list(range(self.n)):
            return False
        for u in range(self.n):
            if self.vcolor[perm[u]] != self.vcolor[u]:
                return False
        for rows in self.layers:
            for u in range(self.n):
                img = 0
                for v in bits(rows[u]):
                    img |= 1 << perm[v]
                if rows[perm[u]] != img:
                    return False
        return True

    def relation_pairs(self, r: int = 0) -> list:
        rel = self.relations[r]
        return [(u, v) for u in range(self.n) for v in bits(rel[u]) if u < v]

    def vertex_mask(self, color: int) -> int:
        return mask_of(v for v in range(self.n) if self.vcolor[v] == color)
