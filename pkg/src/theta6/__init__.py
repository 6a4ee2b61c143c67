"""Theta6-graphs and half-Theta6 (TD-Delaunay) graphs with exact arithmetic."""

from .geom import (
    DOWN,
    UP,
    GeneralPositionError,
    Point,
    Region,
    Triangle,
    bounding_region,
    cone_index,
    contains,
    disjoint_closed,
    from_cartesian,
    general_position,
    interiors_disjoint,
    smallest_triangle,
    td_size,
)
from .graph import (
    AugmentedSet,
    ProximityGraph,
    SpanningTree,
    augment,
    build_by_oracle,
    build_fast,
    build_half,
    degeneracy_order,
    greedy_color,
    greedy_independent,
    mst_td,
    path_in_triangle,
)

__version__ = "0.1.0"

__all__ = [
    "DOWN",
    "UP",
    "AugmentedSet",
    "GeneralPositionError",
    "Point",
    "ProximityGraph",
    "Region",
    "SpanningTree",
    "Triangle",
    "__version__",
    "augment",
    "bounding_region",
    "build_by_oracle",
    "build_fast",
    "build_half",
    "cone_index",
    "contains",
    "degeneracy_order",
    "disjoint_closed",
    "from_cartesian",
    "general_position",
    "greedy_color",
    "greedy_independent",
    "interiors_disjoint",
    "mst_td",
    "path_in_triangle",
    "smallest_triangle",
    "td_size",
]
