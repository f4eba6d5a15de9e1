"""Homogeneous expansions: one unary predicate, or one binary relation.

A unary expansion marks one vertex orbit.  A binary expansion marks a union
of at most two orbits of unordered pairs, found by trying candidate unions
smallest first and keeping the first one whose expansion is homogeneous and
has the same automorphism group as the graph.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import NotApplicable
from .graph import Graph, from_graph6, to_graph6
from .homogeneity import Spectrum, low_levels, spectrum
from .symmetry import ColoredStructure, automorphism_group
from .classifier import _pair_orbits

UNARY = "unary"
BINARY = "binary"


class NoExpansionFound(NotApplicable):
    """No candidate union of pair orbits gives a homogeneous expansion."""

    def __init__(self, message, tried):
        super().__init__(message)
        self.tried = tried


@dataclass
class Expansion:
    base: Graph
    kind: str
    colors: Optional[tuple] = None      # unary: vertex colour 0/1
    pairs: Optional[tuple] = None       # binary: sorted pairs (u, v) with u < v
    provenance: list = field(default_factory=list)

    @property
    def structure(self) -> ColoredStructure:
        if self.kind == UNARY:
            return ColoredStructure(self.base, tuple(self.colors))
        return ColoredStructure.with_relation(self.base, self.pairs)

    def reduct(self) -> Graph:
        return self.structure.reduct()

    def to_json(self, report: Optional["ExpansionReport"] = None) -> dict:
        out = {"kind": self.kind}
        if self.kind == UNARY:
            out["colored_vertices"] = [v for v, c in enumerate(self.colors) if c]
        else:
            out["related_pairs"] = [list(p) for p in self.pairs]
        out["provenance"] = self.provenance
        if report is not None:
            out["verification"] = report.to_json()
        return out

    def dumps(self, report: Optional["ExpansionReport"] = None) -> tuple:
        """``(graph6 line, sidecar JSON text)``."""
        return to_graph6(self.base), json.dumps(self.to_json(report))

    @classmethod
    def loads(cls, g6: str, sidecar: str) -> "Expansion":
        g = from_graph6(g6)
        d = json.loads(sidecar)
        if d["kind"] == UNARY:
            marked = set(d["colored_vertices"])
            return cls(g, UNARY, colors=tuple(int(v in marked) for v in range(g.n)),
                       provenance=d.get("provenance", []))
        pairs = tuple(sorted(tuple(sorted(p)) for p in d["related_pairs"]))
        return cls(g, BINARY, pairs=pairs, provenance=d.get("provenance", []))


def unary_expansion(g: Graph, budget: Optional[int] = None) -> Expansion:
    """Colour the smaller of exactly two vertex orbits with colour 1.

    When both orbits have the same size, the orbit containing vertex 0 keeps
    colour 0.
    """
    orbits = automorphism_group(g, budget).orbits()
    if len(orbits) != 2:
        raise NotApplicable(f"unary expansion needs exactly two vertex orbits, found {len(orbits)}")
    a, b = orbits   # sorted by minimum, so 0 is in a
    marked = b if len(b) <= len(a) else a
    colors = tuple(int(v in marked) for v in range(g.n))
    prov = [{"orbit": sorted(marked), "size": len(marked)}]
    return Expansion(g, UNARY, colors=colors, provenance=prov)


def candidate_unions(g: Graph, budget: Optional[int] = None) -> list:
    """Unions of one or two pair orbits, smallest first, ties by orbit order."""
    orbits = _pair_orbits(g.n, automorphism_group(g, budget).generators)
    cands = [(size, (i,)) for i, (_, size) in enumerate(orbits)]
    cands += [(orbits[i][1] + orbits[j][1], (i, j)) for i, j in combinations(range(len(orbits)), 2)]
    cands.sort()
    return [(idx, [orbits[i] for i in idx]) for _, idx in cands]


def _orbit_pairs(g: Graph, gens, rep) -> list:
    seen = {rep}
    stack = [rep]
    while stack:
        u, v = stack.pop()
        for p in gens:
            a, b = p[u], p[v]
            img = (a, b) if a < b else (b, a)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return sorted(seen)


def binary_expansion(g: Graph, budget: Optional[int] = None) -> Expansion:
    """Smallest union of at most two pair orbits giving a homogeneous expansion with Aut unchanged."""
    low = low_levels(g, 2, budget)
    if len(low) < 2 or not low[0].holds or low[1].holds:
        raise NotApplicable("binary expansion needs a 1-homogeneous graph that is not 2-homogeneous")
    grp = automorphism_group(g, budget)
    tried = []
    for idx, orbits in candidate_unions(g, budget):
        pairs = []
        for rep, _ in orbits:
            pairs.extend(_orbit_pairs(g, grp.generators, rep))
        s = ColoredStructure.with_relation(g, pairs)
        tried.append([list(rep) for rep, _ in orbits])
        if not spectrum(s, budget, stop_at_failure=True).all_hold:
            continue
        if not automorphism_group(s, budget).equals(grp):
            continue
        prov = [{"orbit_rep": list(rep), "size": size} for rep, size in orbits]
        return Expansion(g, BINARY, pairs=tuple(sorted(pairs)), provenance=prov)
    raise NoExpansionFound("no union of at most two pair orbits gives a homogeneous expansion", tried)


@dataclass
class ExpansionReport:
    reduct_ok: bool
    base_order: int
    expansion_order: int
    aut_equal: bool
    aut_subgroup: bool
    spectrum: Spectrum
    relation_invariant: bool = True

    @property
    def aut_index(self) -> Optional[int]:
        if not self.aut_subgroup:
            return None
        return self.base_order // self.expansion_order

    @property
    def spectrum_all_holds(self) -> bool:
        return self.spectrum.all_hold

    def ok(self, kind: str) -> bool:
        if not (self.reduct_ok and self.spectrum_all_holds):
            return False
        if kind == BINARY:
            return self.aut_equal and self.relation_invariant
        return self.aut_subgroup

    def to_json(self) -> dict:
        return {
            "reduct_ok": self.reduct_ok,
            "base_order": self.base_order,
            "expansion_order": self.expansion_order,
            "aut_equal": self.aut_equal,
            "aut_index": self.aut_index,
            "relation_invariant": self.relation_invariant,
            "spectrum_all_holds": self.spectrum_all_holds,
            "geq_threshold": self.spectrum.to_json()["geq_threshold"],
        }


def verify_expansion(e: Expansion, budget: Optional[int] = None) -> ExpansionReport:
    """Check the reduct, compare automorphism groups and compute the expansion's spectrum."""
    s = e.structure
    base = automorphism_group(e.base, budget)
    exp = automorphism_group(s, budget)
    subgroup = all(base.contains(h) for h in exp.generators)
    invariant = True
    if e.kind == BINARY:
        rel = set(e.pairs)
        for p in base.generators:
            for u, v in e.pairs:
                a, b = p[u], p[v]
                if ((a, b) if a < b else (b, a)) not in rel:
                    invariant = False
                    break
    return ExpansionReport(
        reduct_ok=e.reduct() == e.base,
        base_order=base.order,
        expansion_order=exp.order,
        aut_equal=base.equals(exp),
        aut_subgroup=subgroup,
        spectrum=spectrum(s, budget),
        relation_invariant=invariant,
    )
