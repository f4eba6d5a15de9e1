"""Shared corpora and independent oracles for the test suite.

The oracles here use networkx and plain enumeration only; none of them
touch the package's search or group code.
"""
import random
from itertools import combinations, permutations

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from homoglab.families import (CatalogEntry, gen_catalog, gen_g_t, gen_h_12, gen_h_t1,
                               gen_h_t2)
from homoglab.graph import Graph, complement, disjoint_union

CORPUS_SEED = 20261015


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    return G


def nx_automorphisms(g: Graph) -> list:
    G = to_nx(g)
    out = []
    for m in GraphMatcher(G, G).isomorphisms_iter():
        out.append(tuple(m[v] for v in range(g.n)))
    return out


def brute_aut_order(g: Graph) -> int:
    """Count permutations preserving adjacency, by filtering all n! of them."""
    edges = {frozenset(e) for e in g.edges()}
    count = 0
    for p in permutations(range(g.n)):
        if all(frozenset((p[u], p[v])) in edges for u, v in g.edges()):
            count += 1
    return count


def nx_spectrum(g: Graph) -> str:
    """k-homogeneity per k as a string of H/F, via set orbits under an explicit automorphism list.

    For each k: the k-subsets are split into orbits of Aut(g); k-homogeneity
    holds iff no two orbits have isomorphic induced subgraphs and, for each
    orbit representative S, the automorphisms fixing S setwise induce every
    automorphism of g[S].
    """
    autos = nx_automorphisms(g)
    G = to_nx(g)
    out = []
    for k in range(1, g.n + 1):
        seen = set()
        reps = []
        for s in combinations(range(g.n), k):
            fs = frozenset(s)
            if fs in seen:
                continue
            orbit = {frozenset(a[v] for v in s) for a in autos}
            seen |= orbit
            reps.append(s)
        ok = True
        subs = [G.subgraph(s).copy() for s in reps]
        for i in range(len(reps)):
            for j in range(i):
                if nx.is_isomorphic(subs[i], subs[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for s, sub in zip(reps, subs):
                fs = frozenset(s)
                induced = {tuple(a[v] for v in s) for a in autos if frozenset(a[v] for v in s) == fs}
                full = sum(1 for _ in GraphMatcher(sub, sub).isomorphisms_iter())
                if len(induced) != full:
                    ok = False
                    break
        out.append("H" if ok else "F")
    return "".join(out)


def random_graph(rng: random.Random, n: int, p: float = None) -> Graph:
    if p is None:
        p = rng.random()
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_corpus(count: int = 200, lo: int = 4, hi: int = 7, seed: int = CORPUS_SEED) -> list:
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(lo, hi)) for _ in range(count)]


def petersen() -> Graph:
    return Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                            + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
                            + [(i, i + 5) for i in range(5)])


def prism() -> Graph:
    return gen_h_12(3)


def octahedron() -> Graph:
    return gen_g_t(2, 3)


def oct_k3() -> Graph:
    return disjoint_union(gen_g_t(2, 3), Graph.complete(3))


def family_shadows(max_n: int) -> list:
    """Family members and catalogue graphs (and complements) with at most ``max_n`` vertices."""
    out = []
    for t in range(1, 5):
        for m in range(1, 6):
            cands = [gen_g_t(t, m), gen_h_t2(t, m)]
            if t >= 2:
                cands.append(gen_h_t1(t, m))
            for h in ("K1", "K2", "K3", "2K2", "C5"):
                cands.append(disjoint_union(gen_g_t(t, m), gen_catalog(CatalogEntry.parse(h))))
            for g in cands:
                if g.n <= max_n:
                    out.extend([g, complement(g)])
    for m in range(1, 6):
        g = gen_h_12(m)
        if g.n <= max_n:
            out.extend([g, complement(g)])
    for e in ("C5", "rook3x3"):
        g = gen_catalog(CatalogEntry.parse(e))
        if g.n <= max_n:
            out.append(g)
    uniq = []
    seen = set()
    for g in out:
        if g not in seen:
            seen.add(g)
            uniq.append(g)
    return uniq


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
