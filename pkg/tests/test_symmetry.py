import random
from itertools import combinations, permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homoglab.errors import BudgetExceeded, InputError
from homoglab.families import CatalogEntry, gen_catalog, gen_g_t, gen_h_12
from homoglab.graph import Graph
from homoglab.symmetry import (ColoredStructure, PermGroup, automorphism_group, canonical_form,
                               color_refine, generators_text, orbits_on_ktuples,
                               set_stabilizer_restriction, tuple_orbit_same)
from homoglab.symmetry.perm import cycles, format_cycles, inverse, mul, orbit_partition

from conftest import brute_aut_order, nx_automorphisms, octahedron, oct_k3, petersen, prism, random_graph
from test_graph import graphs


# -- permutations -------------------------------------------------------------

def test_mul_applies_right_factor_first():
    p, q = (1, 2, 0), (0, 2, 1)
    assert mul(p, q) == tuple(p[q[x]] for x in range(3))
    assert mul(p, inverse(p)) == (0, 1, 2)


def test_cycle_helpers():
    assert cycles((1, 0, 2, 4, 3)) == [[0, 1], [3, 4]]
    assert format_cycles((0, 1)) == "()"
    assert format_cycles((1, 2, 0)) == "(0 1 2)"
    assert orbit_partition(5, [(1, 0, 2, 4, 3)]) == [[0, 1], [2], [3, 4]]


def test_schreier_sims_symmetric_group():
    n = 6
    grp = PermGroup(n, [(1, 0, 2, 3, 4, 5), (1, 2, 3, 4, 5, 0)])
    assert grp.order == factorial(n)
    assert len(grp.elements()) == factorial(n)
    assert grp.contains((5, 4, 3, 2, 1, 0))


def test_schreier_sims_matches_closure_on_random_groups():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 7)
        gens = []
        for _ in range(rng.randint(1, 3)):
            p = list(range(n))
            rng.shuffle(p)
            gens.append(tuple(p))
        closure = {tuple(range(n))}
        frontier = list(closure)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = mul(g, x)
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        grp = PermGroup(n, gens)
        assert grp.order == len(closure)
        assert set(grp.elements()) == closure
        for p in permutations(range(n)):
            assert grp.contains(p) == (p in closure)


def test_stabilizer_and_transporter():
    grp = automorphism_group(Graph.cycle(6))
    assert grp.order == 12
    assert grp.stabilizer([0]).order == 2
    assert grp.stabilizer([0, 1]).order == 1
    g = grp.transporter((0, 1), (3, 2))
    assert g is not None and g[0] == 3 and g[1] == 2
    assert grp.transporter((0, 1), (0, 2)) is None


def test_permgroup_rejects_bad_generators():
    with pytest.raises(InputError):
        PermGroup(3, [(0, 0, 1)])


def test_restrict_and_equals():
    grp = automorphism_group(prism())
    tri = grp.stabilizer([])  # same group
    assert grp.equals(tri)
    assert not grp.equals(PermGroup(6, []))


# -- automorphism groups ------------------------------------------------------

@pytest.mark.parametrize("name,g,order", [
    ("K4", Graph.complete(4), 24),
    ("C5", Graph.cycle(5), 10),
    ("prism", gen_h_12(3), 12),
    ("octahedron", gen_g_t(2, 3), 48),
    ("rook3x3", gen_catalog(CatalogEntry("rook3x3")), 72),
    ("petersen", petersen(), 120),
    ("oct+K3", oct_k3(), 288),
])
def test_known_orders(name, g, order):
    # orders cross-checked against networkx's exhaustive matcher
    assert len(nx_automorphisms(g)) == order
    grp = automorphism_group(g)
    assert grp.order == order
    for gen in grp.generators:
        assert all(g.has_edge(gen[u], gen[v]) for u, v in g.edges())


def test_large_symmetric_groups():
    assert automorphism_group(Graph.empty(24)).order == factorial(24)
    assert automorphism_group(Graph.complete(20)).order == factorial(20)


@pytest.mark.parametrize("t", range(1, 4))
@pytest.mark.parametrize("m", range(1, 4))
def test_multipartite_order_formula(t, m):
    assert automorphism_group(gen_g_t(t, m)).order == factorial(t) ** m * factorial(m)


def test_orders_match_brute_force_on_random_graphs():
    rng = random.Random(3)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 6))
        assert automorphism_group(g).order == brute_aut_order(g)


def test_coloured_and_relational_structures():
    c6 = Graph.cycle(6)
    s = ColoredStructure(c6, (1, 0, 0, 0, 0, 0))
    assert automorphism_group(s).order == 2
    r = ColoredStructure.with_relation(c6, [(0, 3)])
    assert automorphism_group(r).order == 4
    with pytest.raises(InputError):
        ColoredStructure(c6, (0,))
    with pytest.raises(InputError):
        ColoredStructure.with_relation(c6, [(1, 1)])


def test_structure_pattern_and_layers():
    s = ColoredStructure.with_relation(Graph.path(3), [(0, 2)], vcolor=(0, 1, 0))
    assert s.pattern((0, 1, 2)) == ((0, 1, 0), (1, 2, 1))
    assert s.npcolors == 4 and len(s.layers) == 3
    assert s.relation_pairs() == [(0, 2)]
    assert s.reduct() == Graph.path(3)
    assert s.induced([0, 2]).relation_pairs() == [(0, 1)]


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        automorphism_group(Graph.empty(8), budget=3)


# -- canonical forms ----------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(graphs(max_n=10), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    lab, cert = canonical_form(g)
    lab2, cert2 = canonical_form(g.relabel(perm))
    assert cert == cert2
    assert sorted(lab.values()) == list(range(g.n))


def test_canonical_form_separates_non_isomorphic():
    rng = random.Random(9)
    by_cert = {}
    for _ in range(200):
        g = random_graph(rng, 5)
        by_cert.setdefault(canonical_form(g)[1], []).append(g)
    from conftest import to_nx
    import networkx as nx
    for gs in by_cert.values():
        for h in gs[1:]:
            assert nx.is_isomorphic(to_nx(gs[0]), to_nx(h))
    # 34 isomorphism classes of 5-vertex graphs; a sample of 200 hits most of them
    assert len(by_cert) <= 34


def test_color_refine_equitable():
    cells = color_refine(oct_k3())
    assert sorted(map(len, cells)) == [3, 6]
    assert color_refine(Graph.path(4)) == [[0, 3], [1, 2]]


# -- orbit queries ------------------------------------------------------------

def test_tuple_orbit_same():
    grp = automorphism_group(prism())
    assert tuple_orbit_same(grp, (0, 1), (4, 5))
    assert not tuple_orbit_same(grp, (0, 1), (0, 3))
    with pytest.raises(InputError):
        tuple_orbit_same(grp, (0, 1), (0,))
    with pytest.raises(InputError):
        tuple_orbit_same(grp, (0, 0), (1, 1))
    with pytest.raises(InputError):
        tuple_orbit_same(grp, (0, 9), (1, 2))


def _brute_tuple_orbits(g, k):
    autos = nx_automorphisms(g)
    seen = set()
    count = 0
    for t in permutations(range(g.n), k):
        if t in seen:
            continue
        count += 1
        seen |= {tuple(a[x] for x in t) for a in autos}
    return count


@pytest.mark.parametrize("g", [Graph.cycle(5), prism(), octahedron(), oct_k3(), petersen()])
def test_orbits_on_ktuples_matches_brute_force(g):
    for k in (1, 2, 3):
        orbs = orbits_on_ktuples(g, k)
        assert len(orbs) == _brute_tuple_orbits(g, k)
        total = sum(size for _, size in orbs)
        assert total == factorial(g.n) // factorial(g.n - k)


def test_orbits_on_ktuples_c5_pairs():
    assert len(orbits_on_ktuples(Graph.cycle(5), 2)) == 2


def test_orbits_on_ktuples_limit():
    with pytest.raises(BudgetExceeded):
        orbits_on_ktuples(Graph.empty(12), 8, limit=1000)


def test_set_stabilizer_restriction():
    g = prism()
    grp = automorphism_group(g)
    # the triangle {0,1,2} is stabilized by a group acting as S3 on it
    assert set_stabilizer_restriction(grp, [0, 1, 2]).order == 6
    # a matching edge: the swap is realised
    assert set_stabilizer_restriction(grp, [0, 3]).order == 2
    autos = nx_automorphisms(g)
    for s in combinations(range(6), 3):
        fs = set(s)
        induced = {tuple(a[v] for v in s) for a in autos if {a[v] for v in s} == fs}
        assert set_stabilizer_restriction(grp, s).order == len(induced)


def test_generators_text():
    text = generators_text(automorphism_group(Graph.cycle(4)))
    assert all(line.startswith("(") for line in text.splitlines())
