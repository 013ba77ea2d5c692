"""Cop patrols and robber evasion strategies."""
from .grid import GridRobber, grid_projection_robber, grid_robber_automaton, projection_modes, viable_masks
from .patrols import (CATERPILLAR, CLIQUE_TRIOD, CYCLE_TRIOD, GRID_FIBER, INTERVAL, TREE_DFS,
                      PatrolPlan, caterpillar_patrol, check_around, check_plan, clique_triod_patrol,
                      cycle_triod_patrol, grid_fiber_patrol, interval_sweep_patrol, spine_path,
                      tree_dfs_patrol)
from .shadow import (CLIQUE_TRIOD_SHADOW, GRID_PROJECTION, TRIOD_SHADOW, EvasionRun, RobberAutomaton,
                     clique_triod_automaton, shadow_walk, triod_automaton, triod_shadow_robber)

__all__ = [
    "CATERPILLAR", "CLIQUE_TRIOD", "CLIQUE_TRIOD_SHADOW", "CYCLE_TRIOD", "EvasionRun", "GRID_FIBER",
    "GRID_PROJECTION", "GridRobber", "INTERVAL", "PatrolPlan", "RobberAutomaton", "TREE_DFS",
    "TRIOD_SHADOW", "caterpillar_patrol", "check_around", "check_plan", "clique_triod_automaton",
    "clique_triod_patrol", "cycle_triod_patrol", "grid_fiber_patrol", "grid_projection_robber",
    "grid_robber_automaton", "interval_sweep_patrol", "projection_modes", "shadow_walk", "spine_path",
    "tree_dfs_patrol", "triod_automaton", "triod_shadow_robber", "viable_masks",
]
