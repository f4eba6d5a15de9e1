"""Finite truncations of the graph families G_t, H_{t,1}, H_{t,2}, H_{1,2},
and the catalogue of finite homogeneous graphs.

The integer coordinate is truncated to ``0..m-1``.  Vertex layout is
part-major, then column ``a``, then row ``i``:

    index(part, a, i) = part * t * m + a * t + i        (i in 0..t-1)
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .graph import Graph, complement, disjoint_union

MAX_ORDER = 4096

CASE_CATALOG = "Homogeneous-catalog"
CASE_II = "CaseII"
CASE_H_T1 = "CaseIII-H_t1"
CASE_H_T2 = "CaseIII-H_t2"
CASE_H_12 = "CaseIII-H_12"
CASES = (CASE_CATALOG, CASE_II, CASE_H_T1, CASE_H_T2, CASE_H_12)
CASE_III = (CASE_H_T1, CASE_H_T2, CASE_H_12)

CATALOG_KINDS = ("disjoint-cliques", "complement-of-disjoint-cliques", "C5", "rook3x3",
                 "complement-of-C5", "complement-of-rook3x3")


def _check_order(n: int):
    if n > MAX_ORDER:
        raise InputError(f"{n} vertices exceeds the supported maximum of {MAX_ORDER}")


def _positive(name, value, least=1):
    if not isinstance(value, int) or value < least:
        raise InputError(f"{name} must be an integer >= {least}, got {value!r}")


@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    count: Optional[int] = None
    size: Optional[int] = None

    def __post_init__(self):
        if self.kind not in CATALOG_KINDS:
            raise InputError(f"unknown catalogue kind {self.kind!r}")
        if "disjoint-cliques" in self.kind:
            _positive("count", self.count)
            _positive("size", self.size)

    @property
    def order(self) -> int:
        if "disjoint-cliques" in self.kind:
            return self.count * self.size
        return 5 if "C5" in self.kind else 9

    @classmethod
    def parse(cls, text: str) -> "CatalogEntry":
        """Parse short names: ``K3``, ``2K2``, ``co-3K2``, ``C5``, ``rook3x3``, ``co-C5``."""
        t = text.strip()
        comp = t.startswith("co-")
        if comp:
            t = t[3:]
        m = re.fullmatch(r"(\d*)K(\d+)", t)
        if m:
            count = int(m.group(1)) if m.group(1) else 1
            kind = "complement-of-disjoint-cliques" if comp else "disjoint-cliques"
            return cls(kind, count, int(m.group(2)))
        if t in ("C5", "rook3x3"):
            return cls(("complement-of-" if comp else "") + t)
        raise InputError(f"cannot parse catalogue entry {text!r}")

    def label(self) -> str:
        if "disjoint-cliques" in self.kind:
            base = f"{self.count if self.count != 1 else ''}K{self.size}"
            return ("co-" if self.kind.startswith("complement") else "") + base
        return self.kind.replace("complement-of-", "co-")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.count is not None:
            out["count"] = self.count
            out["size"] = self.size
        return out

    @classmethod
    def from_json(cls, d: dict) -> "CatalogEntry":
        return cls(d["kind"], d.get("count"), d.get("size"))


@dataclass(frozen=True)
class FamilySpec:
    case: str
    m: Optional[int] = None
    t: Optional[int] = None
    h: Optional[CatalogEntry] = None
    complemented: bool = False

    def __post_init__(self):
        if self.case not in CASES:
            raise InputError(f"unknown case {self.case!r}")
        if self.case == CASE_CATALOG:
            if self.h is None:
                raise InputError("catalogue spec needs an entry")
            return
        _positive("m", self.m)
        if self.case == CASE_II:
            _positive("t", self.t)
            if self.h is None:
                raise InputError("CaseII needs a catalogue entry h")
        elif self.case == CASE_H_T1:
            _positive("t", self.t, 2)
        elif self.case == CASE_H_T2:
            _positive("t", self.t)

    @property
    def order(self) -> int:
        if self.case == CASE_CATALOG:
            return self.h.order
        if self.case == CASE_II:
            return self.m * self.t + self.h.order
        if self.case == CASE_H_12:
            return 2 * self.m
        return 2 * self.t * self.m

    @property
    def is_alias(self) -> bool:
        """H_{t,2} with t = 1 is the same finite graph as H_{1,2}."""
        return self.case == CASE_H_T2 and self.t == 1

    def to_json(self) -> dict:
        out = {"case": self.case}
        if self.t is not None:
            out["t"] = self.t
        if self.m is not None:
            out["m"] = self.m
        if self.h is not None:
            out["h"] = self.h.to_json()
        out["complemented"] = self.complemented
        out["n"] = self.order
        if self.is_alias:
            out["alias"] = CASE_H_12
        return out

    @classmethod
    def from_json(cls, d: dict) -> "FamilySpec":
        h = CatalogEntry.from_json(d["h"]) if d.get("h") else None
        return cls(d["case"], d.get("m"), d.get("t"), h, bool(d.get("complemented", False)))


def gen_g_t(t: int, m: int) -> Graph:
    """Complement of m disjoint copies of K_t: (a, i) ~ (b, j) iff a != b."""
    _positive("t", t)
    _positive("m", m)
    n = t * m
    _check_order(n)
    full = (1 << n) - 1
    rows = []
    for a in range(m):
        column = ((1 << t) - 1) << (a * t)
        rows.extend([full & ~column] * t)
    return Graph(n, tuple(rows))


def gen_h_t1(t: int, m: int) -> Graph:
    """Two disjoint copies of G_t."""
    _positive("t", t, 2)
    _positive("m", m)
    _check_order(2 * t * m)
    half = gen_g_t(t, m)
    return disjoint_union(half, half)


def _h_t2(t: int, m: int) -> Graph:
    n = 2 * t * m
    _check_order(n)
    half = t * m
    base = disjoint_union(gen_g_t(t, m), gen_g_t(t, m)).adj
    rows = list(base)
    for a in range(m):
        column = ((1 << t) - 1) << (a * t)
        for i in range(t):
            rows[a * t + i] |= column << half
            rows[half + a * t + i] |= column
    return Graph(n, tuple(rows))


def gen_h_t2(t: int, m: int) -> Graph:
    """H_{t,1} plus a complete bipartite K_{t,t} between the two copies of each column.

    ``t = 1`` is accepted and gives exactly ``gen_h_12(m)``.
    """
    _positive("t", t)
    _positive("m", m)
    return _h_t2(t, m)


def gen_h_12(m: int) -> Graph:
    """Two copies of K_m joined by the perfect matching (a, 1) -- (a, 2)."""
    _positive("m", m)
    return _h_t2(1, m)


def gen_catalog(e: CatalogEntry) -> Graph:
    kind = e.kind
    if kind == "disjoint-cliques":
        _check_order(e.count * e.size)
        return complement(gen_g_t(e.size, e.count))
    if kind == "complement-of-disjoint-cliques":
        _check_order(e.count * e.size)
        return gen_g_t(e.size, e.count)
    if kind.endswith("C5"):
        g = Graph.cycle(5)
    else:
        # 3x3 rook graph: cells (r, c) -> 3r + c, adjacent when sharing a row or column
        g = Graph.from_edges(9, [(u, v) for u in range(9) for v in range(u + 1, 9)
                                 if u // 3 == v // 3 or u % 3 == v % 3])
    return complement(g) if kind.startswith("complement-of-") else g


def generate(spec: FamilySpec) -> Graph:
    if spec.case == CASE_CATALOG:
        g = gen_catalog(spec.h)
    elif spec.case == CASE_II:
        g = disjoint_union(gen_g_t(spec.t, spec.m), gen_catalog(spec.h))
    elif spec.case == CASE_H_T1:
        g = gen_h_t1(spec.t, spec.m)
    elif spec.case == CASE_H_T2:
        g = gen_h_t2(spec.t, spec.m)
    else:
        g = gen_h_12(spec.m)
    return complement(g) if spec.complemented else g
