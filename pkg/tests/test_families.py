import collections
import itertools
from fractions import Fraction

import networkx as nx
import pytest

from patrolrange.families import (FAMILY_KINDS, build_family, enumerate_trees, make_clique_triod,
                                  make_cycle_triod, make_figure_graphs, make_grid,
                                  make_interval_graph, make_triod, random_caterpillar,
                                  random_interval_graph, random_tree, tree_canonical_form,
                                  tree_from_pruefer)
from patrolrange.formulas import ell3_tree
from patrolrange.graph import DomainError, is_caterpillar, is_chordal, is_tree


def nxg(g):
    h = nx.Graph(list(g.edges))
    h.add_nodes_from(g.vertices)
    return h


def test_triod_shapes():
    k13 = make_triod(1, 1, 1)
    assert k13.n == 4 and k13.degree(0) == 3
    assert ell3_tree(make_triod(2, 2, 2), 0) == 2
    fig = make_triod(5, 6, 6)
    assert fig.n == 18 and ell3_tree(fig, 0) == 5
    with pytest.raises(DomainError):
        make_triod(0, 1, 1)


def test_clique_triod_shapes():
    g = make_clique_triod(3, 1, 1, 1)
    assert g.n == 6 and len(g.edges) == 6
    assert make_clique_triod(4, 2, 2, 2).n == 10
    assert make_clique_triod(3, 2, 3, 4).n == 12
    with pytest.raises(DomainError):
        make_clique_triod(2, 1, 1, 1)


def test_cycle_triod_shapes():
    g = make_cycle_triod(4, 9)
    assert g.n == 3 * 4 + 3 * 9
    a, b, c = g.meta["attach"]
    assert g.d(a, b) == g.d(b, c) == g.d(a, c) == 4
    assert [g.d(a, t) for t in g.meta["tips"]][0] == 9
    assert make_cycle_triod(2, 2).n == 12


@pytest.mark.parametrize("l", range(1, 7))
def test_unit_cycle_triod_is_the_clique_triod(l):
    assert nx.is_isomorphic(nxg(make_cycle_triod(1, l)), nxg(make_clique_triod(3, l, l, l)))


def test_grids():
    assert nx.is_isomorphic(nxg(make_grid(1, 5)), nx.path_graph(5))
    assert nx.is_isomorphic(nxg(make_grid(2, 2)), nx.cycle_graph(4))
    g = make_grid(4, 6)
    assert g.n == 24 and g.meta["coords"][7] == (1, 1)
    assert nx.is_isomorphic(nxg(g), nx.grid_2d_graph(4, 6))


def test_interval_examples():
    assert nx.is_isomorphic(nxg(make_interval_graph([(0, 2), (1, 3), (2.5, 4)])), nx.path_graph(3))
    assert nx.is_isomorphic(nxg(make_interval_graph([(0, 3), (1, 4), (2, 5)])), nx.complete_graph(3))
    with pytest.raises(DomainError):
        make_interval_graph([])
    with pytest.raises(DomainError):
        make_interval_graph([(0, 1), (2, 3)])


def test_touching_endpoints_are_perturbed_and_reported():
    g = make_interval_graph([(0, 1), (1, 2), (2, 3)])
    assert len(g.edges) == 2 and g.meta["perturbed"]


def test_random_interval_graphs_are_connected_chordal_and_ordered():
    for seed in range(40):
        g = random_interval_graph(12, seed)
        assert nx.is_chordal(nxg(g)) and is_chordal(g)
        order = g.meta["order"]
        lefts = [Fraction(g.meta["intervals"][v][0]) for v in order]
        assert lefts == sorted(lefts) and sorted(order) == list(g.vertices)


def test_interval_graphs_chordal_up_to_14():
    for n in range(2, 15):
        for seed in range(3):
            g = random_interval_graph(n, seed)
            assert is_chordal(g) and nx.is_chordal(nxg(g))


def test_figure_graphs():
    fig1, fig1e, fig2, fig2e = make_figure_graphs()
    assert (fig1.n, fig2.n) == (18, 13)
    assert len(fig1e.edges) == len(fig1.edges) + 1 and len(fig2e.edges) == len(fig2.edges) + 1
    u, v = fig1e.meta["extra_edge"]
    assert fig1.d(0, u) == fig1.d(0, v) == 1
    u, v = fig2e.meta["extra_edge"]
    assert sorted((fig2.d(0, u), fig2.d(0, v))) == [1, 2]


# A000055: number of free trees on n vertices
FREE_TREES = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551]


def test_enumerate_tree_counts():
    assert [sum(1 for _ in enumerate_trees(n)) for n in range(1, 13)] == FREE_TREES
    with pytest.raises(DomainError):
        next(enumerate_trees(13))


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_brute_force(n):
    buckets: dict[str, list] = {}
    codes = itertools.product(range(n), repeat=n - 2) if n > 2 else [None]
    for code in codes:
        t = nx.path_graph(n) if code is None else nx.from_prufer_sequence(list(code))
        same = buckets.setdefault(nx.weisfeiler_lehman_graph_hash(t), [])
        if not any(nx.is_isomorphic(t, c) for c in same):
            same.append(t)
    classes = [c for group in buckets.values() for c in group]
    ours = [nxg(t) for t in enumerate_trees(n)]
    assert len(ours) == len(classes)
    assert all(any(nx.is_isomorphic(t, c) for c in classes) for t in ours)


def test_pruefer_decoding_matches_networkx():
    for code in itertools.product(range(5), repeat=3):
        assert nx.is_isomorphic(nxg(tree_from_pruefer(code)), nx.from_prufer_sequence(list(code)))


def test_canonical_form_detects_isomorphism():
    for n in range(3, 10):
        for a, b in itertools.combinations(list(enumerate_trees(n)), 2):
            assert tree_canonical_form(a) != tree_canonical_form(b)
    t = random_tree(11, 3)
    assert tree_canonical_form(t) == tree_canonical_form(t.relabel(list(range(10, -1, -1))))


def test_random_tree_is_deterministic_and_uniform():
    assert random_tree(10, seed=7) == random_tree(10, seed=7)
    assert is_tree(random_tree(16, 1))
    counts = collections.Counter(random_tree(4, s).edges for s in range(3200))
    # 16 labelled trees on 4 vertices, 200 expected each
    assert len(counts) == 16 and all(140 < c < 260 for c in counts.values())


def test_random_caterpillar():
    for seed in range(20):
        g = random_caterpillar(12, seed)
        assert g.n == 12 and is_caterpillar(g)


def test_build_family_covers_every_kind():
    params = {"path": {"n": 4}, "cycle": {"n": 5}, "triod": {"a": 1, "b": 2, "c": 3},
              "clique_triod": {"q": 3, "a": 1, "b": 1, "c": 1}, "cycle_triod": {"k": 2, "l": 2},
              "grid": {"n": 2, "m": 3}, "caterpillar": {"n": 7}, "interval": {"n": 6, "seed": 1},
              "random_tree": {"n": 8, "seed": 2}, "figure1": {}, "figure2": {"e": True}}
    assert set(params) == set(FAMILY_KINDS)
    for kind, p in params.items():
        assert build_family(kind, p).n >= 1
    with pytest.raises(DomainError, match="missing"):
        build_family("grid", {"n": 2})
    with pytest.raises(DomainError, match="unknown"):
        build_family("hypercube", {})
