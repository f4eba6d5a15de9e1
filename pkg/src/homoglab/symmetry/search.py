"""Individualization-refinement search for automorphisms and canonical labels.

The search tree is the usual one: refine to an equitable ordered partition,
pick the first smallest non-singleton cell, individualize each of its
vertices in ascending order, recurse.  Leaves are discrete partitions, read
as labellings ``position -> vertex``.

Pruning is by

* automorphisms: a child is skipped when an already explored sibling lies in
  the same orbit of the automorphisms found so far that fix the current
  prefix pointwise;
* node invariants: each node carries a hash of its refinement trace, and a
  subtree whose invariant sequence differs from the first path and is below
  the best path so far cannot contribute;
* back-jumping: when a leaf equivalent to the first leaf turns up off the
  first path, the search returns to the deepest first-path ancestor.

Leaf certificates are compared lexicographically after the invariant
sequence, so the canonical leaf is the maximum of ``(invariants, cert)``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import BudgetExceeded

DEFAULT_BUDGET = 2_000_000
_SHIFT = 12  # bits per colour count in packed refinement keys; n < 4096
_JUMP = object()


def default_budget() -> int:
    env = os.environ.get("HOMOGLAB_BUDGET")
    if env:
        try:
            val = int(env)
        except ValueError:
            val = 0
        if val > 0:
            return val
    return DEFAULT_BUDGET


def _mask(cell) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def refine(cells: list, queue: list, layers: Sequence[Sequence[int]], trace: Optional[list] = None) -> list:
    """Refine the ordered partition ``cells`` against the splitter masks in ``queue``.

    Returns the new list of cells (the input lists are not mutated).  Every
    fragment created is appended to the queue, so the result is equitable:
    any two vertices in one cell have the same number of neighbours of each
    pair colour in every cell.  Fragments replace their parent in place,
    ordered by their count signature, which keeps the result label-invariant.
    """
    single = len(layers) == 1
    if single:
        rows = layers[0]
    qi = 0
    while qi < len(queue):
        splitter = queue[qi]
        qi += 1
        out = []
        split_any = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            if single:
                keys = [(rows[v] & splitter).bit_count() for v in cell]
            else:
                keys = []
                for v in cell:
                    key = 0
                    for lay in layers:
                        key = (key << _SHIFT) | (lay[v] & splitter).bit_count()
                    keys.append(key)
            k0 = keys[0]
            for k in keys:
                if k != k0:
                    break
            else:
                out.append(cell)
                continue
            groups = {}
            for v, k in zip(cell, keys):
                groups.setdefault(k, []).append(v)
            split_any = True
            order = sorted(groups)
            if trace is not None:
                trace.append((len(out), tuple((k, len(groups[k])) for k in order)))
            for k in order:
                frag = groups[k]
                out.append(frag)
                queue.append(_mask(frag))
        if split_any:
            cells = out
    return cells


def initial_cells(n: int, colors: Sequence[int]) -> list:
    """Ordered partition by colour value (ascending)."""
    groups = {}
    for v in range(n):
        groups.setdefault(colors[v], []).append(v)
    return [groups[c] for c in sorted(groups)]


def equitable_partition(n: int, colors: Sequence[int], layers) -> list:
    cells = initial_cells(n, colors)
    return refine(cells, [_mask(c) for c in cells], layers)


@dataclass
class SearchResult:
    generators: list          # automorphisms found, as tuples
    labeling: tuple           # canonical leaf: position -> vertex
    cert: tuple               # certificate of the canonical leaf
    first_path: tuple         # individualized vertices on the first path (a base)
    orbit_product: int        # product of first-path orbit sizes = |Aut|
    nodes: int


def _neighbor_lists(n, layers) -> tuple:
    out = []
    for rows in layers:
        lists = []
        for u in range(n):
            row = rows[u]
            nb = []
            while row:
                low = row & -row
                nb.append(low.bit_length() - 1)
                row ^= low
            lists.append(nb)
        out.append(lists)
    return tuple(out)


def _certificate(n, colors, nbrs, lab) -> tuple:
    """Vertex colours in label order, then each layer's rows relabelled by position."""
    pw = [0] * n
    for i, v in enumerate(lab):
        pw[v] = 1 << i
    out = [n, tuple(colors[v] for v in lab)]
    for lists in nbrs:
        for v in lab:
            out.append(sum(map(pw.__getitem__, lists[v])))
    return tuple(out)


class _IRSearch:
    def __init__(self, n, colors, layers, budget, canonical):
        self.n = n
        self.colors = colors
        self.layers = layers
        self.nbrs = _neighbor_lists(n, layers)
        self.budget = budget
        self.canonical = canonical
        self.nodes = 0
        self.gens = []
        self.first = None       # (invs, lab, cert)
        self.best = None        # (key, lab, cert)
        self.first_path = ()

    def run(self) -> SearchResult:
        cells = initial_cells(self.n, self.colors)
        trace = []
        cells = refine(cells, [_mask(c) for c in cells], self.layers, trace)
        self._rec(cells, (), ((0, hash(tuple(trace))),), True)
        _, lab, cert = self.best
        return SearchResult(self.gens, tuple(lab), cert, self.first_path,
                            self._orbit_product(), self.nodes)

    def _fixing(self, prefix):
        if not prefix:
            return self.gens
        return [g for g in self.gens if all(g[p] == p for p in prefix)]

    def _orbit_product(self) -> int:
        # |Aut| = product over first-path levels of the orbit of the chosen vertex
        out = 1
        path = self.first_path
        for i, v in enumerate(path):
            gens = self._fixing(path[:i])
            orb = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for g in gens:
                    y = g[x]
                    if y not in orb:
                        orb.add(y)
                        stack.append(y)
            out *= len(orb)
        return out

    def _viable(self, invs) -> bool:
        d = len(invs)
        if self.first[0][:d] == invs:
            return True
        if not self.canonical:
            return False
        best_key = self.best[0]
        return invs >= best_key[:d]

    def _rec(self, cells, prefix, invs, on_first):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes",
                                 nodes=self.nodes, generators=list(self.gens))
        n = self.n
        if len(cells) == n:
            return self._leaf(cells, prefix, invs)
        target = None
        for c in cells:
            if len(c) > 1 and (target is None or len(c) < len(target)):
                target = c
                if len(c) == 2:
                    break
        tidx = cells.index(target)
        explored = []
        orbit = None
        seen_gens = -1
        for w in sorted(target):
            if explored:
                if seen_gens != len(self.gens):
                    fix = self._fixing(prefix)
                    orbit = set(explored)
                    stack = list(explored)
                    while stack:
                        x = stack.pop()
                        for g in fix:
                            y = g[x]
                            if y not in orbit:
                                orbit.add(y)
                                stack.append(y)
                    seen_gens = len(self.gens)
                if w in orbit:
                    continue
            rest = [v for v in target if v != w]
            child = cells[:tidx] + [[w], rest] + cells[tidx + 1:]
            trace = []
            child = refine(child, [1 << w], self.layers, trace)
            cinvs = invs + ((0, hash((tidx, tuple(trace)))),)
            explored.append(w)
            if orbit is not None:
                orbit.add(w)
                stack = [w]
                fix = self._fixing(prefix)
                while stack:
                    x = stack.pop()
                    for g in fix:
                        y = g[x]
                        if y not in orbit:
                            orbit.add(y)
                            stack.append(y)
            if self.first is not None and not self._viable(cinvs):
                continue
            r = self._rec(child, prefix + (w,), cinvs, on_first and len(explored) == 1)
            if r is _JUMP and not on_first:
                return _JUMP
        return None

    def _leaf(self, cells, prefix, invs):
        lab = [c[0] for c in cells]
        if self.first is None:
            cert = _certificate(self.n, self.colors, self.nbrs, lab)
            self.first = (invs, lab, cert)
            self.best = (invs + ((1, cert),), lab, cert)
            self.first_path = prefix
            return None
        first_invs, first_lab, first_cert = self.first
        cert = None
        if invs == first_invs:
            cert = _certificate(self.n, self.colors, self.nbrs, lab)
            if cert == first_cert:
                self._add_gen(first_lab, lab)
                return _JUMP
        if self.canonical:
            if cert is None:
                cert = _certificate(self.n, self.colors, self.nbrs, lab)
            key = invs + ((1, cert),)
            best_key, best_lab, _ = self.best
            if key == best_key:
                self._add_gen(best_lab, lab)
            elif key > best_key:
                self.best = (key, lab, cert)
        return None

    def _add_gen(self, src_lab, dst_lab):
        g = [0] * self.n
        for a, b in zip(src_lab, dst_lab):
            g[a] = b
        g = tuple(g)
        if any(i != x for i, x in enumerate(g)):
            self.gens.append(g)


def ir_search(n: int, colors: Sequence[int], layers, budget: Optional[int] = None,
              canonical: bool = True) -> SearchResult:
    """Run the search on the structure given by vertex ``colors`` and pair-colour ``layers``."""
    if budget is None:
        budget = default_budget()
    if n == 0:
        return SearchResult([], (), (0, ()), (), 1, 0)
    return _IRSearch(n, tuple(colors), layers, budget, canonical).run()
