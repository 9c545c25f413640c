"""Exact spanning-tree family weights, Rayleigh monotonicity and forest correlation."""

from .forests import ForestCorrelation, SearchSpec, enumerate_forests, forest_correlation, search_counterexample
from .graph import Edge, GraphError, Multigraph, contract_edge, delete_edge, is_bridge, is_connected, parse_graph
from .monotonicity import (
    CoefficientCounts,
    MatroidBasisList,
    MonomialKey,
    OrientedForestClasses,
    flip_orientation_check,
    important_forests,
    matroid_rayleigh_check,
    monomial_tally,
    parse_matroid,
    rayleigh_delta,
    verify_identity,
)
from .sampler import Xoshiro256, empirical_conditionals, exact_conditionals, sample_spanning_tree
from .trees import (
    FamilyWeights,
    effective_resistance,
    enumerate_spanning_trees,
    family_weights,
    tree_weight_total,
)

__all__ = [
    "CoefficientCounts",
    "Edge",
    "FamilyWeights",
    "ForestCorrelation",
    "GraphError",
    "MatroidBasisList",
    "MonomialKey",
    "Multigraph",
    "OrientedForestClasses",
    "SearchSpec",
    "Xoshiro256",
    "contract_edge",
    "delete_edge",
    "effective_resistance",
    "empirical_conditionals",
    "enumerate_forests",
    "enumerate_spanning_trees",
    "exact_conditionals",
    "family_weights",
    "flip_orientation_check",
    "forest_correlation",
    "important_forests",
    "is_bridge",
    "is_connected",
    "matroid_rayleigh_check",
    "monomial_tally",
    "parse_graph",
    "parse_matroid",
    "rayleigh_delta",
    "sample_spanning_tree",
    "search_counterexample",
    "tree_weight_total",
    "verify_identity",
]
