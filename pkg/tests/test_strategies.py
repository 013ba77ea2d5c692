import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import seeded_patrol, trees
from patrolrange.families import (enumerate_trees, make_clique_triod, make_figure_graphs,
                                  make_grid, make_interval_graph, make_path, make_star, make_triod,
                                  random_caterpillar, random_interval_graph, random_tree)
from patrolrange.formulas import predict_tree
from patrolrange.graph import DomainError, closed_neighborhood, validate_walk
from patrolrange.solver import best_response
from patrolrange.strategies import (CLIQUE_TRIOD_SHADOW, GRID_FIBER, TRIOD_SHADOW, PatrolPlan,
                                    caterpillar_patrol, check_around, check_plan,
                                    clique_triod_automaton, clique_triod_patrol, cycle_triod_patrol,
                                    grid_fiber_patrol, grid_projection_robber, grid_robber_automaton,
                                    interval_sweep_patrol, projection_modes, shadow_walk, spine_path,
                                    tree_dfs_patrol, triod_automaton, triod_shadow_robber,
                                    viable_masks)
from patrolrange.strategies.shadow import next_houses


def test_check_around_examples():
    spider = make_triod(3, 3, 3)
    leaf = spider.meta["branches"][0][-1]
    frag = check_around(spider, 0, leaf, 1)
    assert frag == [1, 2, 1, 0]
    assert check_around(spider, 0, 0, 2) == []
    p7 = make_path(7)
    frag = check_around(p7, 3, 0, 1)
    cover = 0
    for v in frag:
        cover |= p7.balls(1)[v]
    assert cover >> 0 & 1 and frag[-1] == 3
    with pytest.raises(DomainError):
        check_around(p7, 3, 0, 0)


@given(trees(min_n=2, max_n=14), st.data())
def test_check_around_covers_target_and_returns(t, data):
    o = data.draw(st.integers(0, t.n - 1))
    rho = data.draw(st.integers(0, 3))
    target = data.draw(st.sampled_from([v for v in t.vertices if t.d(o, v) <= 2 * rho + 1]))
    frag = check_around(t, o, target, rho)
    if t.d(o, target) <= rho:
        assert frag == []
        return
    assert frag[-1] == o and validate_walk(t, [o] + frag)
    assert any(t.d(v, target) <= rho for v in frag)
    # the origin leaves the cop's range for at most one step
    assert sum(t.d(v, o) > rho for v in frag) <= 1


def test_tree_dfs_examples():
    assert tree_dfs_patrol(make_path(6)).rho == 0
    plan = tree_dfs_patrol(make_triod(2, 2, 2))
    assert plan.rho == 1 and check_plan(plan)
    plan = tree_dfs_patrol(make_figure_graphs()[0])
    assert plan.rho == 2 and check_plan(plan)


def test_spine_contains_every_maximum_origin():
    for seed in range(60):
        t = random_tree(14, seed)
        from patrolrange.formulas import max_ell3_tree

        top, origins = max_ell3_tree(t)
        if top:
            assert set(origins) <= set(spine_path(t))


def _cleared(g, walk, rho):
    balls = g.balls(rho)
    s = g.all & ~balls[walk[0]]
    out = [g.all & ~s]
    for c in walk[1:]:
        s = closed_neighborhood(g, s & ~balls[c]) & ~balls[c]
        out.append(g.all & ~s)
    return out


@given(trees(min_n=1, max_n=16))
@settings(max_examples=80)
def test_tree_dfs_cleared_set_only_grows_between_spine_steps(t):
    plan = tree_dfs_patrol(t)
    cleared = _cleared(t, plan.walk, plan.rho)
    marks = [cleared[i] for i, note in enumerate(plan.annotations)
             if note.startswith(("advance", "start"))] + [cleared[-1]]
    assert all(a & ~b == 0 for a, b in zip(marks, marks[1:]))
    assert cleared[-1] == t.all
    assert plan.rho == predict_tree(t).value


def test_caterpillar_examples():
    assert caterpillar_patrol(make_path(4)).walk == [0, 1, 2, 3]
    assert caterpillar_patrol(make_star(3)).walk == [1, 0, 3, 0, 2]
    for seed in range(10):
        g = random_caterpillar(12, seed)
        plan = caterpillar_patrol(g)
        assert plan.rho == 0 and check_plan(plan)
        backbone = {v for v in g.vertices if g.degree(v) > 1}
        if backbone:
            assert all(plan.walk[i] in backbone or plan.walk[i + 1] in backbone
                       for i in range(len(plan.walk) - 1))
    with pytest.raises(DomainError):
        caterpillar_patrol(make_triod(2, 2, 2))


def test_interval_examples():
    k3 = make_interval_graph([(0, 3), (1, 4), (2, 5)])
    plan = interval_sweep_patrol(k3, k3.meta["order"])
    assert plan.rho == 1 and check_plan(plan)
    p5 = make_interval_graph([(0, 2), (1, 4), (3, 6), (5, 8), (7, 9)])
    assert interval_sweep_patrol(p5, p5.meta["order"]).rho == 0
    g = random_interval_graph(12, 1)
    assert check_plan(interval_sweep_patrol(g, g.meta["order"]))
    with pytest.raises(DomainError):
        interval_sweep_patrol(k3, [0, 1])


def test_interval_order_must_fit_the_graph():
    g = make_interval_graph([(0, 2), (1, 4), (3, 6), (5, 8), (1.5, 2.5), (4.5, 5.5), (0.5, 1.2)])
    order = g.meta["order"]
    bad = [order[0], order[-1]] + order[1:-1]
    if not g.has_edge(order[0], order[-1]):
        with pytest.raises(DomainError):
            interval_sweep_patrol(g, bad)


@pytest.mark.parametrize("n, m, rho", [(3, 4, 1), (4, 6, 2), (1, 5, 0), (2, 3, 1), (5, 5, 2)])
def test_grid_fiber(n, m, rho):
    plan = grid_fiber_patrol(n, m)
    assert plan.rho == rho and plan.construction == GRID_FIBER
    assert check_plan(plan)
    assert "bound" in plan.annotations[0]


def test_grid_fiber_needs_wide_grid():
    with pytest.raises(DomainError):
        grid_fiber_patrol(5, 3)


@pytest.mark.parametrize("k, l, rho", [(2, 2, 2), (1, 3, 2), (2, 3, 2), (1, 1, 1), (3, 2, 4)])
def test_cycle_triod_sweep(k, l, rho):
    plan = cycle_triod_patrol(k, l)
    assert plan.rho == rho and check_plan(plan)


@pytest.mark.parametrize("q, l", [(3, 1), (3, 2), (3, 3), (3, 4), (4, 2)])
def test_clique_triod_sweep(q, l):
    plan = clique_triod_patrol(q, l)
    assert check_plan(plan)


def test_patrol_plan_json_roundtrip():
    plan = tree_dfs_patrol(make_triod(2, 2, 2))
    data = json.loads(plan.to_json())
    assert set(data) == {"rho", "walk", "annotations", "construction"}
    back = PatrolPlan.from_dict(data)
    assert back.walk == plan.walk and back.rho == plan.rho
    with pytest.raises(ValueError):
        PatrolPlan([0, 1], 0, "x", ["one"])


# -- robbers ---------------------------------------------------------------------

def test_shadow_spec_examples():
    spider = make_triod(4, 4, 4)
    for seed in range(10):
        run = triod_shadow_robber(spider, None, seeded_patrol(spider, seed, [4, 8, 12]), 1)
        assert run.ok and run.min_distance >= 2
    ct = make_clique_triod(3, 3, 3, 3)
    for seed in range(10):
        run = triod_shadow_robber(ct, None, seeded_patrol(ct, seed, [5, 8, 11]), 1)
        assert run.ok and run.min_distance >= 2


def test_shadow_fails_where_the_cop_wins():
    spider = make_triod(2, 2, 2)
    plan = tree_dfs_patrol(spider)
    with pytest.raises(DomainError):
        triod_automaton(spider, 1)
    run = triod_shadow_robber(spider, None, plan.walk, 1, strict=False)
    assert not run.ok and run.reason


def test_automata_shapes():
    aut = triod_automaton(make_triod(4, 4, 4), 1)
    assert aut.kind == TRIOD_SHADOW and [bin(h).count("1") for h in aut.houses] == [2, 2, 2]
    ct = make_clique_triod(3, 3, 3, 3)
    aut = clique_triod_automaton(ct, 1)
    assert aut.kind == CLIQUE_TRIOD_SHADOW and aut.origins == [0, 1, 2]
    with pytest.raises(DomainError):
        clique_triod_automaton(make_triod(3, 3, 3), 1)
    with pytest.raises(DomainError):
        triod_shadow_robber(make_triod(4, 4, 4), aut, [0], 2)


def test_next_houses():
    assert next_houses([None, 0, 0, None, 1], [None, 0, None, None, 1]) == [0, 1, 1, 1, None]


def test_shadow_rejects_bad_patrol():
    with pytest.raises(DomainError):
        triod_shadow_robber(make_triod(4, 4, 4), None, [1, 5], 1)


def test_grid_robber_beats_the_fiber_sweep():
    plan = grid_fiber_patrol(11, 14)
    run = grid_projection_robber(11, 14, 3, plan.walk)
    assert run.ok and run.min_distance >= 4
    run = grid_projection_robber(21, 30, 8, grid_fiber_patrol(21, 30).walk)
    assert run.ok and run.min_distance >= 9


def test_grid_robber_even_height_uses_odd_subgrid():
    g = make_grid(12, 14)
    for seed in range(6):
        patrol = seeded_patrol(g, seed, [0, 13, 11 * 14, 12 * 14 - 1])
        run = grid_projection_robber(12, 14, 3, patrol)
        assert run.ok and all(v < 11 * 14 for v in run.walk)


def test_grid_robber_walk_is_real_and_safe():
    g = make_grid(11, 14)
    patrol = seeded_patrol(g, 3, [0])
    run = grid_projection_robber(11, 14, 3, patrol)
    assert run.ok and validate_walk(g, run.walk) and len(run.walk) == len(patrol)
    assert all(g.d(r, c) > 3 for r, c in zip(run.walk, patrol))


def test_modes_follow_houses():
    robber = grid_robber_automaton(11, 14, 3)
    gt = robber.tree
    up_tip, down_tip = gt.branches["up"][-1], gt.branches["down"][-1]
    right_far = gt.branches["right"][-1]
    g = gt.grid
    from patrolrange.graph import shortest_path

    walk = shortest_path(g, right_far, up_tip)
    assert set(projection_modes(robber, walk)) == {"up"}
    walk = shortest_path(g, up_tip, down_tip)
    modes = projection_modes(robber, walk)
    assert modes[0] == "up" and modes[-1] == "down"
    # the switch happens on the middle row, left of the tree column
    switch = next(t for t, m in enumerate(modes) if m == "down")
    assert gt.switching >> walk[switch] & 1


def test_viability_masks_shrink_only_near_the_cop():
    robber = grid_robber_automaton(11, 14, 3)
    patrol = grid_fiber_patrol(11, 14).walk
    masks = viable_masks(robber, patrol)
    assert len(masks) == len(patrol) and all(masks)


def test_unguarded_rules_still_beat_the_fiber_sweep():
    assert grid_projection_robber(11, 14, 3, grid_fiber_patrol(11, 14).walk, guard=False).ok


def test_grid_robber_preconditions():
    with pytest.raises(DomainError):
        grid_projection_robber(14, 11, 3, [0])
    with pytest.raises(DomainError):
        grid_projection_robber(11, 14, 3, [0, 2])
    with pytest.raises(DomainError):
        grid_projection_robber(11, 14, 5, [0])
