"""Automorphism groups, canonical forms and orbit queries."""
from __future__ import annotations

from math import perm as falling_factorial
from typing import Optional, Sequence

from ..errors import BudgetExceeded, InputError
from ..graph import Graph, bits, mask_of
from .perm import PermGroup, format_cycles, mul, orbit_partition
from .search import default_budget, initial_cells, ir_search, refine
from .structure import ColoredStructure

__all__ = [
    "ColoredStructure", "PermGroup", "color_refine", "automorphism_group",
    "canonical_form", "cert_bytes", "tuple_orbit_same", "orbits_on_ktuples",
    "set_stabilizer_restriction", "generators_text", "as_structure",
]


def as_structure(s) -> ColoredStructure:
    if isinstance(s, Graph):
        return ColoredStructure.plain(s)
    return s


def color_refine(s, initial: Optional[Sequence[Sequence[int]]] = None) -> list:
    """Coarsest equitable refinement of ``initial`` (default: the vertex colour classes)."""
    s = as_structure(s)
    if initial is None:
        cells = initial_cells(s.n, s.vcolor)
    else:
        cells = [sorted(c) for c in initial if c]
        if sorted(v for c in cells for v in c) != list(range(s.n)):
            raise InputError("initial colouring is not a partition of the vertices")
    return [sorted(c) for c in refine(cells, [mask_of(c) for c in cells], s.layers)]


def automorphism_group(s, budget: Optional[int] = None) -> PermGroup:
    """Automorphism group of a graph or coloured structure.

    The group order from the Schreier-Sims chain is checked against the
    orbit-stabilizer product collected during the search.
    """
    s = as_structure(s)
    res = ir_search(s.n, s.vcolor, s.layers, budget, canonical=False)
    for g in res.generators:
        if not s.is_automorphism(g):
            raise RuntimeError("search produced a non-automorphism")
    grp = PermGroup(s.n, res.generators, res.first_path)
    if grp.order != res.orbit_product:
        raise RuntimeError(f"order mismatch: chain {grp.order} vs search {res.orbit_product}")
    grp.search_nodes = res.nodes
    return grp


def cert_bytes(cert: tuple) -> bytes:
    n = cert[0]
    width = max(1, (n + 7) // 8)
    out = bytearray(n.to_bytes(4, "big"))
    for c in cert[1]:
        out += int(c).to_bytes(4, "big", signed=True)
    for row in cert[2:]:
        out += row.to_bytes(width, "big")
    return bytes(out)


def canonical_form(s, budget: Optional[int] = None):
    """Return ``(labeling, canonical_bytes)``; ``labeling[v]`` is v's canonical position."""
    s = as_structure(s)
    res = ir_search(s.n, s.vcolor, s.layers, budget, canonical=True)
    labeling = {v: i for i, v in enumerate(res.labeling)}
    return labeling, cert_bytes(res.cert)


def tuple_orbit_same(grp: PermGroup, a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff some element of ``grp`` maps ``a[i]`` to ``b[i]`` for every i."""
    if len(a) != len(b):
        raise InputError("tuple length mismatch")
    for t in (a, b):
        if len(set(t)) != len(t):
            raise InputError("tuple entries must be distinct")
        if any(not 0 <= x < grp.degree for x in t):
            raise InputError("tuple entry outside the group's degree")
    return grp.transporter(a, b) is not None


def orbits_on_ktuples(s, k: int, limit: int = 10 ** 7, grp: Optional[PermGroup] = None) -> list:
    """Orbit representatives of injective k-tuples with their orbit sizes.

    Representatives are built as ``(a, x)`` where ``a`` runs over
    representatives of (k-1)-tuple orbits and ``x`` over orbits of the
    pointwise stabilizer of ``a``; sizes are ``|G| / |G_a|``.
    """
    s = as_structure(s)
    n = s.n
    if not 1 <= k <= n:
        raise InputError(f"k must be in 1..{n}")
    if falling_factorial(n, k) > limit:
        raise BudgetExceeded(f"{falling_factorial(n, k)} injective {k}-tuples exceeds limit {limit}")
    if grp is None:
        grp = automorphism_group(s)
    order = grp.order
    out = []

    def extend(prefix, stab: PermGroup):
        used = set(prefix)
        for orb in orbit_partition(n, stab.generators):
            pts = [x for x in orb if x not in used]
            if not pts or len(pts) != len(orb):
                continue
            x = pts[0]
            tup = prefix + (x,)
            sub = stab.stabilizer([x])
            if len(tup) == k:
                out.append((tup, order // sub.order))
            else:
                extend(tup, sub)

    extend((), grp)
    out.sort()
    return out


def set_stabilizer_restriction(grp: PermGroup, s, budget: Optional[int] = None) -> PermGroup:
    """Group induced on ``s`` by the elements of ``grp`` that stabilize ``s`` setwise.

    Backtracks through a stabilizer chain whose base starts with ``s``: a
    partial product survives only while it maps every processed base point
    into ``s``.  Each surviving leaf is one element of the induced group.
    """
    pts = sorted(set(bits(s))) if isinstance(s, int) else sorted(set(s))
    if any(not 0 <= x < grp.degree for x in pts):
        raise InputError("set member outside the group's degree")
    if budget is None:
        budget = default_budget()
    k = len(pts)
    pos = {v: i for i, v in enumerate(pts)}
    chained = grp.with_base(pts)
    chained._build()
    trans = chained._trans
    induced = PermGroup(k, [])
    nodes = 0

    def rec(level, g):
        nonlocal induced, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("set stabilizer search exceeded budget", nodes=nodes)
        if level == k:
            img = tuple(pos[g[v]] for v in pts)
            if not induced.contains(img):
                induced = PermGroup(k, induced.generators + [img])
            return
        used = {g[pts[j]] for j in range(level)}
        for x, u in sorted(trans[level].items()):
            y = g[x]
            if y in pos and y not in used:
                rec(level + 1, mul(g, u))

    rec(0, tuple(range(grp.degree)))
    return induced


def generators_text(grp: PermGroup) -> str:
    """One generator per line in cycle notation."""
    return "".join(format_cycles(g) + "\n" for g in grp.generators)
