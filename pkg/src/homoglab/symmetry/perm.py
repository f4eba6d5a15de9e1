"""Permutation groups via a deterministic Schreier-Sims stabilizer chain.

Permutations are tuples ``p`` with ``p[x]`` the image of ``x``.
``mul(p, q)`` applies ``q`` first, then ``p``.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ..errors import BudgetExceeded, InputError


def identity(n: int) -> tuple:
    return tuple(range(n))


def mul(p: Sequence[int], q: Sequence[int]) -> tuple:
    return tuple(map(p.__getitem__, q))


def inverse(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def cycles(p: Sequence[int]) -> list:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def format_cycles(p: Sequence[int]) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def orbit_partition(n: int, gens: Iterable[Sequence[int]]) -> list:
    """Orbits of the group generated by ``gens`` on ``0..n-1``, each sorted, by minimum."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    groups = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return [groups[r] for r in sorted(groups)]


def orbit_of(points: Iterable[int], gens: Sequence[Sequence[int]]) -> set:
    orb = set(points)
    stack = list(orb)
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in orb:
                orb.add(y)
                stack.append(y)
    return orb


class PermGroup:
    """A permutation group on ``0..degree-1`` given by generators.

    The stabilizer chain is built lazily.  ``with_base(prefix)`` returns a
    copy whose chain starts with the given base points, which is how point
    stabilizers and tuple transporters are obtained.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (),
                 base_prefix: Sequence[int] = ()):
        self.degree = degree
        gens = []
        seen = set()
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise InputError("generator is not a permutation of the right degree")
            if not is_identity(g) and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = gens
        self._prefix = tuple(base_prefix)
        self._built = False

    # -- chain construction ---------------------------------------------------

    def _build(self):
        if self._built:
            return
        n = self.degree
        ident = identity(n)
        base = []
        for b in self._prefix:
            if b not in base:
                base.append(b)
        strong = list(self.generators)
        for g in strong:
            if all(g[b] == b for b in base):
                base.append(next(x for x in range(n) if g[x] != x))
        self.base = base
        self.strong = strong
        self._levels_gens = [[g for g in strong if all(g[b] == b for b in base[:i])]
                             for i in range(len(base))]
        self._trans = [self._transversal(i) for i in range(len(base))]
        self._inv = {}
        self._inv_src = {}

        i = len(base) - 1
        while i >= 0:
            restart = self._schreier_pass(i, ident)
            if restart is None:
                i -= 1
            else:
                i = restart
        self._built = True

    def _transversal(self, i: int) -> dict:
        b = self.base[i]
        gens = self._levels_gens[i]
        trans = {b: identity(self.degree)}
        queue = [b]
        for x in queue:
            u = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = mul(g, u)
                    queue.append(y)
        return trans

    def _sift(self, g, start=0):
        for j in range(start, len(self.base)):
            x = g[self.base[j]]
            u = self._trans[j].get(x)
            if u is None:
                return g, j
            key = (j, x)
            ui = self._inv.get(key)
            if ui is None or self._inv_src.get(key) is not u:
                ui = self._inv[key] = inverse(u)
                self._inv_src[key] = u
            g = mul(ui, g)
        return g, len(self.base)

    def _schreier_pass(self, i: int, ident) -> Optional[int]:
        trans = self._trans[i]
        for p, up in list(trans.items()):
            for s in self._levels_gens[i]:
                q = s[p]
                t = mul(inverse(trans[q]), mul(s, up))
                if t == ident:
                    continue
                h, j = self._sift(t, i + 1)
                if j < len(self.base) or not is_identity(h):
                    if j == len(self.base):
                        self.base.append(next(x for x in range(self.degree) if h[x] != x))
                        self._levels_gens.append([])
                        self._trans.append({})
                    self.strong.append(h)
                    for l in range(i + 1, j + 1):
                        self._levels_gens[l].append(h)
                        self._trans[l] = self._transversal(l)
                    return j
        return None

    # -- queries --------------------------------------------------------------

    @property
    def order(self) -> int:
        self._build()
        out = 1
        for t in self._trans:
            out *= len(t)
        return out

    def base_orbit_sizes(self) -> list:
        self._build()
        return [len(t) for t in self._trans]

    def contains(self, g: Sequence[int]) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        self._build()
        h, j = self._sift(g)
        return j == len(self.base) and is_identity(h)

    def orbits(self) -> list:
        return orbit_partition(self.degree, self.generators)

    def orbit(self, x: int) -> set:
        return orbit_of([x], self.generators)

    def with_base(self, prefix: Sequence[int]) -> "PermGroup":
        return PermGroup(self.degree, self.generators, prefix)

    def stabilizer(self, points: Sequence[int]) -> "PermGroup":
        """Pointwise stabilizer of ``points``."""
        pts = list(dict.fromkeys(points))
        chained = self.with_base(pts)
        chained._build()
        gens = chained._levels_gens[len(pts)] if len(pts) < len(chained.base) else []
        return PermGroup(self.degree, gens)

    def transporter(self, a: Sequence[int], b: Sequence[int]) -> Optional[tuple]:
        """Some element mapping ``a[i] -> b[i]`` for all i, or None."""
        if len(a) != len(b):
            raise InputError("tuple length mismatch")
        chained = self.with_base(a)
        chained._build()
        n = self.degree
        g = identity(n)  # accumulated element; target for the rest is g^-1(b)
        target = list(b)
        for i in range(len(a)):
            u = chained._trans[i].get(target[i])
            if u is None:
                return None
            g = mul(g, u)
            uinv = inverse(u)
            target = [uinv[x] for x in target]
        return g

    def equals(self, other: "PermGroup") -> bool:
        """Equality by order plus mutual membership of generators."""
        return (self.degree == other.degree and self.order == other.order
                and all(other.contains(g) for g in self.generators)
                and all(self.contains(g) for g in other.generators))

    def restrict(self, points: Sequence[int]) -> "PermGroup":
        """Group induced on ``points`` by generators that stabilize it setwise."""
        pts = sorted(points)
        pos = {v: i for i, v in enumerate(pts)}
        gens = []
        for g in self.generators:
            img = [pos.get(g[v]) for v in pts]
            if None in img:
                raise InputError("generator does not stabilize the point set")
            gens.append(tuple(img))
        return PermGroup(len(pts), gens)

    def elements(self, limit: int = 10 ** 6):
        """Enumerate all elements (for small groups and tests)."""
        self._build()
        if self.order > limit:
            raise BudgetExceeded("group too large to enumerate", order=self.order)
        levels = [list(t.values()) for t in self._trans]
        out = [identity(self.degree)]
        for us in reversed(levels):
            out = [mul(u, g) for u in us for g in out]
        return out

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"
