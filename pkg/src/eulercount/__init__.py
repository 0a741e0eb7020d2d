"""Exact Euler tour counting for Eulerian multigraphs of bounded treewidth."""

from .multigraph import (
    EulerianStatus,
    GraphFormatError,
    MultiGraph,
    NotEulerianError,
    eulerian_status,
    factorial_factor,
    format_edge_list,
    parse_edge_list,
)
from .orbdp import DpTable, count_euler_tours, count_orbs
from .treedecomp import (
    NiceTreeDecomposition,
    TreeDecomposition,
    make_nice,
    min_fill_decompose,
    validate_decomposition,
)

__all__ = [
    "DpTable",
    "EulerianStatus",
    "GraphFormatError",
    "MultiGraph",
    "NiceTreeDecomposition",
    "NotEulerianError",
    "TreeDecomposition",
    "count_euler_tours",
    "count_orbs",
    "eulerian_status",
    "factorial_factor",
    "format_edge_list",
    "make_nice",
    "min_fill_decompose",
    "parse_edge_list",
    "validate_decomposition",
]
