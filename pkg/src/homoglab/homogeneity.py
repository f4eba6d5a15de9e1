"""k-homogeneity of coloured structures, the full spectrum, and a brute-force oracle.

The main engine walks the orbits of k-subsets level by level.  Each orbit
representative ``C`` is stored with generators of its setwise stabilizer,
which come out of a search on the structure with ``C`` marked.  Children of
``C`` are ``C + {x}`` for one ``x`` per stabilizer orbit outside ``C``;
children are merged by the canonical form of the marked structure.  Orbits
of subsets larger than n/2 are the complements of orbits below n/2.

At each level, the structure is k-homogeneous iff

1. no two subset orbits induce isomorphic substructures, and
2. for every representative ``C`` the setwise stabilizer, restricted to
   ``C``, is all of ``Aut(s[C])``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from math import perm as falling_factorial
from typing import Optional, Union

from .errors import BudgetExceeded, InputError
from .graph import bits
from .symmetry import PermGroup, as_structure, automorphism_group
from .symmetry.perm import orbit_partition
from .symmetry.search import default_budget, ir_search
from .symmetry.structure import ColoredStructure

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown(budget)"

ORACLE_MAX_N = 8


@dataclass(frozen=True, order=True)
class Witness:
    """Two injective tuples with the same ordered pattern in different Aut-orbits."""
    a: tuple
    b: tuple

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        return cls(tuple(d["a"]), tuple(d["b"]))


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[Witness] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def __str__(self):
        if self.witness is None:
            return self.status
        return f"{self.status} a={list(self.witness.a)} b={list(self.witness.b)}"


@dataclass
class Spectrum:
    n: int
    verdicts: list                  # verdicts[k - 1] for k = 1..n
    witnesses: dict = field(default_factory=dict)   # k -> Witness (smallest and largest failing k)

    def verdict(self, k: int) -> Verdict:
        if not 1 <= k <= self.n:
            raise InputError(f"k must be in 1..{self.n}")
        return self.verdicts[k - 1]

    def statuses(self) -> tuple:
        return tuple(v.status for v in self.verdicts)

    def _threshold(self, unknown_holds: bool) -> int:
        k = self.n
        while k >= 1:
            st = self.verdicts[k - 1].status
            if st == FAILS or (st == UNKNOWN and not unknown_holds):
                break
            k -= 1
        return k + 1

    @property
    def geq_threshold(self) -> Union[int, tuple]:
        """Smallest k* with every k >= k* holding; an interval ``(lo, hi)`` if some k is unknown."""
        lo, hi = self._threshold(True), self._threshold(False)
        return lo if lo == hi else (lo, hi)

    @property
    def complete(self) -> bool:
        return all(v.status != UNKNOWN for v in self.verdicts)

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def failing(self) -> list:
        return [k for k, v in enumerate(self.verdicts, 1) if v.fails]

    def to_json(self) -> dict:
        thr = self.geq_threshold
        return {
            "n": self.n,
            "verdicts": [v.status for v in self.verdicts],
            "geq_threshold": list(thr) if isinstance(thr, tuple) else thr,
            "witnesses": {str(k): w.to_json() for k, w in sorted(self.witnesses.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def text(self) -> str:
        lines = [f"n = {self.n}"]
        for k, v in enumerate(self.verdicts, 1):
            lines.append(f"k={k}: {v}")
        thr = self.geq_threshold
        lines.append(f"geq_threshold = {thr if isinstance(thr, int) else list(thr)}")
        return "\n".join(lines) + "\n"


def _spectrum_from(n: int, verdicts: list) -> Spectrum:
    spec = Spectrum(n, verdicts)
    fails = spec.failing()
    for k in (fails[:1] + fails[-1:]):
        w = verdicts[k - 1].witness
        if w is not None:
            spec.witnesses[k] = w
    return spec


# -- subset-orbit engine ------------------------------------------------------

class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def take(self, nodes: int):
        self.used += nodes
        if self.used > self.limit:
            raise BudgetExceeded(f"level exceeded {self.limit} search nodes", nodes=self.used)

    def remaining(self) -> int:
        return max(1, self.limit - self.used)


def _marked_colors(vcolor, mask):
    return tuple(2 * c + (mask >> v & 1) for v, c in enumerate(vcolor))


def _pinned_colors(vcolor, members):
    # every member gets its own colour, so automorphisms must fix them pointwise
    n = len(vcolor)
    out = [c * (n + 1) for c in vcolor]
    for i, v in enumerate(members):
        out[v] += i + 1
    return out


class _SubsetOrbits:
    """Orbit representatives of k-subsets.

    Each representative is ``(mask, generators, order)`` where the
    generators generate the setwise stabilizer and ``order`` is its size.
    """

    def __init__(self, s: ColoredStructure, grp: PermGroup, budget: int):
        self.s = s
        self.n = s.n
        self.budget = budget
        self.levels = [[(0, list(grp.generators), grp.order)]]

    def level(self, k: int) -> list:
        """Representatives at level k (k <= n // 2 are built, the rest mirrored)."""
        if k > self.n - k:
            full = (1 << self.n) - 1
            return [(full & ~c, gens, order) for c, gens, order in self.level(self.n - k)]
        while len(self.levels) <= k:
            self.levels.append(self._extend(self.levels[-1]))
        return self.levels[k]

    def _extend(self, reps: list) -> list:
        s, n = self.s, self.n
        budget = _Budget(self.budget)
        seen = set()
        out = []
        for c, gens, _ in reps:
            for orb in orbit_partition(n, gens):
                x = orb[0]
                if c >> x & 1:
                    continue
                d = c | 1 << x
                budget.take(1)
                res = ir_search(n, _marked_colors(s.vcolor, d), s.layers,
                                budget.remaining(), canonical=True)
                budget.take(res.nodes)
                if res.cert in seen:
                    continue
                seen.add(res.cert)
                out.append((d, res.generators, res.orbit_product))
        return out


def _extends(s: ColoredStructure, a, b, budget: _Budget) -> bool:
    """Whether some automorphism maps the tuple ``a`` onto ``b`` entrywise."""
    certs = []
    for t in (a, b):
        res = ir_search(s.n, _pinned_colors(s.vcolor, t), s.layers, budget.remaining(), canonical=True)
        budget.take(res.nodes)
        certs.append(res.cert)
    return certs[0] == certs[1]


def _check_level(s: ColoredStructure, reps: list, budget: int) -> Verdict:
    """Apply the two conditions to the representatives of one level.

    The stabilizer condition uses orders only: the setwise stabilizer of C
    acts on C as all of Aut(s[C]) iff |Stab(C)| = |Aut(s[C])| * |Fix(C)|,
    where Fix(C) fixes C pointwise.  A witness is produced only for the
    lexicographically smallest failing representative.
    """
    budget = _Budget(budget)
    types = {}
    failures = []   # (a, kind, data)
    for c, gens, stab_order in reps:
        members = tuple(bits(c))
        sub = s.induced(members)
        res = ir_search(sub.n, sub.vcolor, sub.layers, budget.remaining(), canonical=True)
        budget.take(res.nodes)
        key = res.cert
        if key in types:
            other, olab = types[key]
            lab = res.labeling
            pos = {v: i for i, v in enumerate(lab)}
            opos = {v: i for i, v in enumerate(olab)}
            forward = tuple(other[olab[pos[i]]] for i in range(len(members)))
            backward = tuple(members[lab[opos[j]]] for j in range(len(other)))
            w = min(Witness(members, forward), Witness(other, backward))
            failures.append((w.a, "type", w))
            continue
        types[key] = (members, res.labeling)
        fix = ir_search(s.n, _pinned_colors(s.vcolor, members), s.layers,
                        budget.remaining(), canonical=False)
        budget.take(fix.nodes)
        if stab_order != res.orbit_product * fix.orbit_product:
            failures.append((members, "stab", res.generators))
    if not failures:
        return Verdict(HOLDS)
    witnesses = []
    least = min(f[0] for f in failures)
    for a, kind, data in failures:
        if a != least:
            continue
        if kind == "type":
            witnesses.append(data)
            continue
        for h in data:
            b = tuple(a[h[i]] for i in range(len(a)))
            if not _extends(s, a, b, budget):
                witnesses.append(Witness(a, b))
        if not witnesses:
            raise RuntimeError("stabilizer orders disagree but every generator extends")
    return Verdict(FAILS, min(witnesses))


def _normalize(s) -> ColoredStructure:
    s = as_structure(s)
    if not isinstance(s, ColoredStructure):
        raise InputError("expected a Graph or ColoredStructure")
    return s


def _engine(s: ColoredStructure, budget: Optional[int]):
    if budget is None:
        budget = default_budget()
    grp = automorphism_group(s, budget)
    return _SubsetOrbits(s, grp, budget), budget


def is_k_homogeneous(s, k: int, budget: Optional[int] = None) -> Verdict:
    """Decide whether every isomorphism between induced k-substructures extends to an automorphism.

    Raises ``BudgetExceeded`` when the search runs out of nodes.
    """
    s = _normalize(s)
    if not isinstance(k, int) or not 1 <= k <= max(s.n, 1) or s.n == 0:
        raise InputError(f"k must be in 1..{s.n}")
    if k == s.n:
        return Verdict(HOLDS)
    tree, budget = _engine(s, budget)
    return _check_level(s, tree.level(k), budget)


def low_levels(s, kmax: int, budget: Optional[int] = None) -> list:
    """Verdicts for k = 1..kmax (clipped to n) sharing one subset-orbit tree."""
    s = _normalize(s)
    kmax = min(kmax, s.n)
    if kmax < 1:
        return []
    tree, budget = _engine(s, budget)
    return [Verdict(HOLDS) if k == s.n else _check_level(s, tree.level(k), budget)
            for k in range(1, kmax + 1)]


def spectrum(s, budget: Optional[int] = None, stop_at_failure: bool = False,
             use_cache: bool = True) -> Spectrum:
    """Verdicts for every k = 1..n.

    A level whose search exceeds ``budget`` nodes is reported as unknown,
    together with every level that depends on it.  With ``stop_at_failure``
    the remaining levels after the first failure are left unknown; this is
    only meant for quick yes/no homogeneity checks.

    Complete results are memoised per exact structure; pass
    ``use_cache=False`` to force a fresh computation.
    """
    s = _normalize(s)
    if budget is None:
        budget = default_budget()
    if use_cache:
        hit = _CACHE.get(s)
        if hit is not None:
            return hit
    out = _spectrum(s, budget, stop_at_failure)
    if use_cache and out.complete:
        if len(_CACHE) >= _CACHE_SIZE:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[s] = out
    return out


_CACHE: dict = {}
_CACHE_SIZE = 256


def clear_cache():
    _CACHE.clear()


def _spectrum(s: ColoredStructure, budget: int, stop_at_failure: bool) -> Spectrum:
    n = s.n
    if n == 0:
        return Spectrum(0, [])
    verdicts = [None] * n
    verdicts[n - 1] = Verdict(HOLDS)
    try:
        tree, budget = _engine(s, budget)
    except BudgetExceeded:
        for k in range(1, n):
            verdicts[k - 1] = Verdict(UNKNOWN)
        return _spectrum_from(n, verdicts)
    # lower half first, each level paired with its mirror
    stopped = False
    for j in range(1, n // 2 + 1):
        ks = [j] if j == n - j else [j, n - j]
        if stopped:
            for k in ks:
                verdicts[k - 1] = verdicts[k - 1] or Verdict(UNKNOWN)
            continue
        try:
            tree.level(j)
        except BudgetExceeded:
            for k in range(j, n - j + 1):
                if verdicts[k - 1] is None:
                    verdicts[k - 1] = Verdict(UNKNOWN)
            break
        for k in ks:
            if verdicts[k - 1] is not None:
                continue
            try:
                verdicts[k - 1] = _check_level(s, tree.level(k), budget)
            except BudgetExceeded:
                verdicts[k - 1] = Verdict(UNKNOWN)
            if stop_at_failure and verdicts[k - 1].fails:
                stopped = True
    for k in range(1, n + 1):
        if verdicts[k - 1] is None:
            verdicts[k - 1] = Verdict(UNKNOWN)
    return _spectrum_from(n, verdicts)


def is_homogeneous(s, budget: Optional[int] = None) -> bool:
    """True iff every level holds (stops at the first failing level)."""
    return spectrum(s, budget, stop_at_failure=True).all_hold


# -- brute force --------------------------------------------------------------

def _all_automorphisms(s: ColoredStructure) -> list:
    n = s.n
    out = []
    img = [-1] * n
    used = [False] * n

    def rec(u):
        if u == n:
            out.append(tuple(img))
            return
        for y in range(n):
            if used[y] or s.vcolor[y] != s.vcolor[u]:
                continue
            if all(s.pair_color(u, w) == s.pair_color(y, img[w]) for w in range(u)):
                img[u] = y
                used[y] = True
                rec(u + 1)
                used[y] = False
        img[u] = -1

    rec(0)
    return out


def naive_spectrum_oracle(s) -> Spectrum:
    """Spectrum by exhaustive enumeration: every automorphism, every injective tuple.

    Witnesses are the lexicographically smallest failing pair ``(a, b)``.
    """
    s = _normalize(s)
    n = s.n
    if n > ORACLE_MAX_N:
        raise InputError(f"oracle is limited to n <= {ORACLE_MAX_N}")
    autos = _all_automorphisms(s)
    pc = [[s.pair_color(u, v) if u != v else -1 for v in range(n)] for u in range(n)]
    vc = s.vcolor
    verdicts = []
    for k in range(1, n + 1):
        idx = [(i, j) for i in range(k) for j in range(i + 1, k)]
        classes = {}
        for tup in permutations(range(n), k):
            key = (tuple(vc[v] for v in tup), tuple(pc[tup[i]][tup[j]] for i, j in idx))
            classes.setdefault(key, []).append(tup)
        witness = None
        for members in classes.values():
            a = members[0]  # permutations() yields tuples in lexicographic order
            if len(members) == 1:
                continue
            orbit = {tuple(g[x] for x in a) for g in autos}
            if len(orbit) == len(members):
                continue
            b = next(t for t in members if t not in orbit)
            if witness is None or (a, b) < (witness.a, witness.b):
                witness = Witness(a, b)
        verdicts.append(Verdict(HOLDS) if witness is None else Verdict(FAILS, witness))
    return _spectrum_from(n, verdicts)


def count_realized_ktypes(s, k: int, limit: int = 10 ** 7) -> int:
    """Number of distinct ordered patterns realised by injective k-tuples."""
    s = _normalize(s)
    if not isinstance(k, int) or not 1 <= k <= s.n:
        raise InputError(f"k must be in 1..{s.n}")
    total = falling_factorial(s.n, k)
    if total > limit:
        raise BudgetExceeded(f"{total} injective {k}-tuples exceeds limit {limit}", tuples=total)
    return len({s.pattern(t) for t in permutations(range(s.n), k)})


def validate_witness(s, w: Witness, grp: Optional[PermGroup] = None) -> bool:
    """A witness is valid when a_i -> b_i preserves the pattern and no automorphism realises it."""
    from .symmetry import tuple_orbit_same
    s = _normalize(s)
    if len(w.a) != len(w.b) or s.pattern(w.a) != s.pattern(w.b):
        return False
    if grp is None:
        grp = automorphism_group(s)
    return not tuple_orbit_same(grp, w.a, w.b)
