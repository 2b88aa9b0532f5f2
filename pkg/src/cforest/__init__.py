"""Central forests in trees: m disjoint k-node subtrees closest to every node."""

from .centers import central_k_tree, jordan_center, m_center_exact
from .forest import (
    CFOutcome,
    Forest,
    InfeasibleError,
    STMatrix,
    adjacent_center_bound,
    build_st,
    cf,
    extend_st,
    feasibility_bound,
    nodes_to_be_removed,
    prune_st,
)
from .tree import Tree, TreeError, bfs_distances, is_connected_subset, leaves, set_eccentricity

__all__ = [
    "CFOutcome", "Forest", "InfeasibleError", "STMatrix", "Tree", "TreeError",
    "adjacent_center_bound", "bfs_distances", "build_st", "central_k_tree", "cf",
    "extend_st", "feasibility_bound", "is_connected_subset", "jordan_center", "leaves",
    "m_center_exact", "nodes_to_be_removed", "prune_st", "set_eccentricity",
]
