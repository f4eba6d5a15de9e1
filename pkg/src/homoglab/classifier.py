"""Recognise which family a finite graph belongs to and report its orbit anatomy.

The pipeline works on one "side" at a time: the graph itself or its
complement.  The side with the larger of (maximum clique, maximum
independent set) is tried first; if it matches nothing the other side is
tried.  Every positive answer is checked by generating the claimed family
member and finding an explicit isomorphism.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .errors import BudgetExceeded
from .families import (CASE_CATALOG, CASE_H_12, CASE_H_T1, CASE_H_T2, CASE_II,
                       CatalogEntry, FamilySpec, gen_catalog, generate)
from .graph import Graph, are_isomorphic, bits, complement, induced_subgraph, mask_of
from .homogeneity import low_levels, spectrum
from .symmetry import automorphism_group, canonical_form
from .symmetry.search import default_budget

HOMOGENEOUS = "Homogeneous"
CASE2 = "CaseII"
CASE3 = "CaseIII"
UNKNOWN = "Unknown"

MAX_ORBIT_SUBSETS = 12   # CaseII search tries every union of up to this many vertex orbits


# -- cliques ------------------------------------------------------------------

def max_clique(g: Graph, budget: Optional[int] = None) -> list:
    """Exact maximum clique by branch and bound with a greedy colouring bound.

    Returns the vertices in ascending order.  Among maximum cliques the first
    one found is returned, which is deterministic for a given labelling.
    """
    if budget is None:
        budget = default_budget()
    adj = g.adj
    best = []
    nodes = 0

    def colour_order(p):
        # vertices of p with an upper bound on the clique size through each, ascending
        order = []
        uncoloured = p
        colour = 0
        while uncoloured:
            colour += 1
            q = uncoloured
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~adj[v] & ~low
                uncoloured &= ~low
                order.append((v, colour))
        return order

    def expand(clique, p):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("max clique search exceeded budget", nodes=nodes, best=sorted(best))
        for v, c in reversed(colour_order(p)):
            if len(clique) + c <= len(best):
                return
            grown = clique + [v]
            rest = p & adj[v]
            if rest:
                expand(grown, rest)
            elif len(grown) > len(best):
                best = grown
            p &= ~(1 << v)

    if g.n:
        expand([], (1 << g.n) - 1)
    return sorted(best)


def max_independent_set(g: Graph, budget: Optional[int] = None) -> list:
    return max_clique(complement(g), budget)


def _has_clique(g: Graph, within: int, size: int) -> bool:
    if size <= 0:
        return True
    if within.bit_count() < size:
        return False
    sub = induced_subgraph(g, list(bits(within)))
    return len(max_clique(sub)) >= size


# -- orbit anatomy ------------------------------------------------------------

@dataclass
class PairOrbit:
    rep: tuple
    size: int
    adjacent: bool
    tag: str

    def to_json(self) -> dict:
        return {"rep": list(self.rep), "size": self.size, "adjacent": self.adjacent, "tag": self.tag}


@dataclass
class OrbitAnatomy:
    one_orbits: list                    # vertex orbits, each ascending
    pair_orbits: list                   # PairOrbit per orbit of unordered distinct pairs
    clique_number: int

    @property
    def two_orbit_tags(self) -> dict:
        return {p.rep: p.tag for p in self.pair_orbits}

    def count(self, adjacent: bool) -> int:
        return sum(1 for p in self.pair_orbits if p.adjacent == adjacent)

    def to_json(self) -> dict:
        return {
            "one_orbits": [{"size": len(o), "vertices": o} for o in self.one_orbits],
            "two_orbits": [p.to_json() for p in self.pair_orbits],
            "clique_number": self.clique_number,
        }


def _pair_orbits(n: int, gens) -> list:
    """Orbits of unordered distinct pairs as ``(min pair, size)``, sorted by representative."""
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    for g in gens:
        for u, v in combinations(range(n), 2):
            a, b = g[u], g[v]
            img = (a, b) if a < b else (b, a)
            r1, r2 = find((u, v)), find(img)
            if r1 != r2:
                if r1 < r2:
                    parent[r2] = r1
                else:
                    parent[r1] = r2
    sizes = {}
    for p in combinations(range(n), 2):
        r = find(p)
        sizes[r] = sizes.get(r, 0) + 1
    return sorted(sizes.items())


def orbit_anatomy(g: Graph, budget: Optional[int] = None) -> OrbitAnatomy:
    """Vertex orbits and tagged orbits of unordered pairs.

    An adjacent orbit is ``q1`` when its pairs lie in a maximum clique and
    ``q2`` otherwise.  A non-adjacent orbit is ``p2`` when the common
    neighbourhood of a pair contains a clique one smaller than the maximum,
    and ``p1`` otherwise.  Two orbits of the same adjacency that receive the
    same tag are both reported as ``other``.
    """
    grp = automorphism_group(g, budget)
    clique = max_clique(g, budget)
    omega = len(clique)
    orbits = []
    for (u, v), size in _pair_orbits(g.n, grp.generators):
        if g.has_edge(u, v):
            common = g.adj[u] & g.adj[v]
            tag = "q1" if _has_clique(g, common, omega - 2) else "q2"
            orbits.append(PairOrbit((u, v), size, True, tag))
        else:
            common = g.adj[u] & g.adj[v]
            tag = "p2" if omega >= 2 and _has_clique(g, common, omega - 1) else "p1"
            orbits.append(PairOrbit((u, v), size, False, tag))
    for adjacent in (True, False):
        same = [p for p in orbits if p.adjacent == adjacent]
        tags = [p.tag for p in same]
        for p in same:
            if tags.count(p.tag) > 1:
                p.tag = "other"
    return OrbitAnatomy(grp.orbits(), orbits, omega)


# -- recognition --------------------------------------------------------------

def _equal_cliques(g: Graph) -> Optional[tuple]:
    """``(count, size)`` if g is a disjoint union of equal cliques."""
    comps = g.components()
    size = len(comps[0]) if comps else 0
    for comp in comps:
        if len(comp) != size:
            return None
        m = mask_of(comp)
        for v in comp:
            if g.adj[v] | (1 << v) != m:
                return None
    return (len(comps), size) if comps else None


def catalog_match(g: Graph) -> Optional[CatalogEntry]:
    """The catalogue entry isomorphic to g, if any (checked by isomorphism)."""
    cands = []
    dc = _equal_cliques(g)
    if dc:
        cands.append(CatalogEntry("disjoint-cliques", *dc))
    cdc = _equal_cliques(complement(g))
    if cdc:
        cands.append(CatalogEntry("complement-of-disjoint-cliques", *cdc))
    if g.n == 5:
        cands.append(CatalogEntry("C5"))
    if g.n == 9:
        cands.append(CatalogEntry("rook3x3"))
    for e in cands:
        if are_isomorphic(gen_catalog(e), g) is not None:
            return e
    return None


def _case_ii(g: Graph, orbits: list) -> Optional[FamilySpec]:
    """Split the vertex orbits into a complete-multipartite part and a catalogue part."""
    if len(orbits) > MAX_ORBIT_SUBSETS:
        return None
    found = []
    full = (1 << g.n) - 1
    for r in range(1, len(orbits)):
        for chosen in combinations(orbits, r):
            p = mask_of(v for o in chosen for v in o)
            q = full & ~p
            if any(g.adj[v] & q for v in bits(p)):
                continue
            shape = _equal_cliques(complement(induced_subgraph(g, list(bits(p)))))
            if shape is None:
                continue
            m, t = shape
            h = catalog_match(induced_subgraph(g, list(bits(q))))
            if h is None:
                continue
            found.append((p.bit_count(), m, t, h))
    if not found:
        return None
    found.sort(key=lambda x: (-x[0], -x[1], x[2]))
    _, m, t, h = found[0]
    return FamilySpec(CASE_II, m=m, t=t, h=h)


def _divisors(x: int) -> list:
    return [d for d in range(1, x + 1) if x % d == 0]


def _case_iii(g: Graph) -> list:
    """Candidate CaseIII specs from vertex count, degree and connectivity."""
    n = g.n
    if n % 2 or not g.is_regular() or n == 0:
        return []
    d = g.degree(0)
    half = n // 2
    out = []
    if not g.is_connected():
        comps = g.components()
        if len(comps) == 2:
            shape = _equal_cliques(complement(induced_subgraph(g, comps[0])))
            if shape is not None:
                m, t = shape
                if t >= 2 and d == (m - 1) * t:
                    out.append(FamilySpec(CASE_H_T1, m=m, t=t))
    elif d == half:
        for t in _divisors(half):
            m = half // t
            if t == 1:
                out.append(FamilySpec(CASE_H_12, m=m))
            else:
                out.append(FamilySpec(CASE_H_T2, m=m, t=t))
    return out


# -- classification -----------------------------------------------------------

@dataclass
class Classification:
    verdict: str
    spec: Optional[FamilySpec]
    complemented: bool
    anatomy: Optional[OrbitAnatomy]
    mapping: Optional[dict] = None      # input vertex -> vertex of generate(spec)
    notes: list = field(default_factory=list)

    @property
    def positive(self) -> bool:
        return self.verdict != UNKNOWN

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "params": self.spec.to_json() if self.spec else None,
            "complemented": self.complemented,
            "anatomy": self.anatomy.to_json() if self.anatomy else None,
            "witness_mapping": ({str(k): v for k, v in sorted(self.mapping.items())}
                                if self.mapping is not None else None),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def summary(self) -> str:
        if self.spec is None:
            return f"{self.verdict} (complemented={str(self.complemented).lower()})"
        p = self.spec
        parts = [p.case]
        if p.t is not None:
            parts.append(f"t={p.t}")
        if p.m is not None:
            parts.append(f"m={p.m}")
        if p.h is not None:
            parts.append(f"h={p.h.label()}")
        parts.append(f"complemented={str(p.complemented).lower()}")
        return f"{self.verdict}: " + " ".join(parts)


def side_order(g: Graph, budget: Optional[int] = None) -> list:
    """``[(graph, complemented), ...]`` with the preferred side first.

    The side whose clique number is at least its independence number comes
    first.  On a tie the side with more edges wins, then the larger canonical
    form, so a graph and its complement always agree on the order.
    """
    gc = complement(g)
    omega, alpha = len(max_clique(g, budget)), len(max_clique(gc, budget))
    if omega != alpha:
        keep = omega > alpha
    else:
        e, ec = g.edge_count, gc.edge_count
        if e != ec:
            keep = e > ec
        else:
            keep = canonical_form(g, budget)[1] >= canonical_form(gc, budget)[1]
    return [(g, False), (gc, True)] if keep else [(gc, True), (g, False)]


def _verified(g: Graph, spec: FamilySpec, complemented: bool):
    """Attach the complement flag and an explicit isomorphism, or None if it fails."""
    spec = FamilySpec(spec.case, spec.m, spec.t, spec.h, complemented)
    mapping = are_isomorphic(g, generate(spec))
    if mapping is None:
        return None
    return spec, mapping


def classify(g: Graph, budget: Optional[int] = None, anatomy: bool = True) -> Classification:
    """Decide which family ``g`` is a finite member of.

    The anatomy describes the side the match was found on (the complement
    when ``complemented`` is set), or ``g`` itself for Unknown.  Raises
    ``BudgetExceeded`` if a search runs out of nodes.
    """
    sides = side_order(g, budget)
    low = low_levels(g, 2, budget)
    one = low[0].holds if low else True
    two = low[1].holds if len(low) > 1 else True

    def result(verdict, side=g, hit=None, comp=False, notes=()):
        anat = orbit_anatomy(side, budget) if anatomy else None
        spec, mapping = hit if hit else (None, None)
        return Classification(verdict, spec, comp, anat, mapping, list(notes))

    if not one:
        grp_orbits = automorphism_group(g, budget).orbits()
        for side, comp in sides:
            spec = _case_ii(side, grp_orbits)
            if spec is not None:
                hit = _verified(g, spec, comp)
                if hit:
                    return result(CASE2, side, hit, comp)
        return result(UNKNOWN)

    if not two:
        for side, comp in sides:
            for spec in _case_iii(side):
                hit = _verified(g, spec, comp)
                if hit:
                    return result(CASE3, side, hit, comp)
        return result(UNKNOWN)

    if not spectrum(g, budget, stop_at_failure=True).all_hold:
        return result(UNKNOWN)
    for side, comp in sides:
        entry = catalog_match(side)
        if entry is not None:
            hit = _verified(g, FamilySpec(CASE_CATALOG, h=entry), comp)
            if hit:
                return result(HOMOGENEOUS, side, hit, comp)
    return result(HOMOGENEOUS, notes=["no catalogue match"])


# -- round-trip grid ------------------------------------------------------------

DEFAULT_GRID_H = ("K1", "K2", "K3", "2K2", "C5")

OK = "ok"
MISMATCH = "mismatch"
COLLAPSE = "expected-collapse"


def _category(case: str) -> str:
    if case == CASE_CATALOG:
        return HOMOGENEOUS
    return CASE2 if case == CASE_II else CASE3


@dataclass
class GridCell:
    spec: FamilySpec
    status: str
    result: Optional[Classification]
    reason: str = ""

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "status": self.status, "reason": self.reason,
                "classification": self.result.summary() if self.result else None}


@dataclass
class GridReport:
    cells: list

    @property
    def mismatches(self) -> list:
        return [c for c in self.cells if c.status == MISMATCH]

    @property
    def collapses(self) -> list:
        return [c for c in self.cells if c.status == COLLAPSE]

    def to_json(self) -> dict:
        return {"cells": len(self.cells), "mismatches": len(self.mismatches),
                "expected_collapses": len(self.collapses),
                "details": [c.to_json() for c in self.cells]}


def grid_specs(tmax: int = 3, mmax: int = 4, hs: Sequence[str] = DEFAULT_GRID_H) -> list:
    entries = [CatalogEntry.parse(h) for h in hs]
    out = []
    for comp in (False, True):
        for e in entries:
            out.append(FamilySpec(CASE_CATALOG, h=e, complemented=comp))
        for t in range(1, tmax + 1):
            for m in range(1, mmax + 1):
                for e in entries:
                    out.append(FamilySpec(CASE_II, m=m, t=t, h=e, complemented=comp))
        for t in range(2, tmax + 1):
            for m in range(1, mmax + 1):
                out.append(FamilySpec(CASE_H_T1, m=m, t=t, complemented=comp))
        for t in range(1, tmax + 1):
            for m in range(1, mmax + 1):
                out.append(FamilySpec(CASE_H_T2, m=m, t=t, complemented=comp))
        for m in range(1, mmax + 1):
            out.append(FamilySpec(CASE_H_12, m=m, complemented=comp))
    return out


def check_cell(spec: FamilySpec, budget: Optional[int] = None) -> GridCell:
    g = generate(spec)
    try:
        res = classify(g, budget, anatomy=False)
    except BudgetExceeded as exc:
        return GridCell(spec, MISMATCH, None, f"budget: {exc}")
    if not res.positive:
        return GridCell(spec, MISMATCH, res, "classified Unknown")
    if res.mapping is None or are_isomorphic(g, generate(res.spec)) is None:
        return GridCell(spec, MISMATCH, res, "recovered spec does not regenerate the input")
    if res.verdict == _category(spec.case):
        return GridCell(spec, OK, res)
    # a truncated family member can be a graph of another kind altogether
    if spec.m == 1:
        return GridCell(spec, COLLAPSE, res, "m = 1 truncation")
    if res.verdict == HOMOGENEOUS:
        return GridCell(spec, COLLAPSE, res, "truncation is a homogeneous graph")
    return GridCell(spec, MISMATCH, res, f"expected {_category(spec.case)}")


def roundtrip_grid(tmax: int = 3, mmax: int = 4, hs: Sequence[str] = DEFAULT_GRID_H,
                   budget: Optional[int] = None, jobs: int = 1) -> GridReport:
    """Classify every generated grid member and compare with the family spec that produced it."""
    specs = grid_specs(tmax, mmax, hs)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as pool:
            cells = list(pool.map(check_cell, specs, [budget] * len(specs)))
    else:
        cells = [check_cell(s, budget) for s in specs]
    return GridReport(cells)
