"""Exact counting for equal-sum equations and rainbow-free colorings on grids.

The main entry points are re-exported here; see the submodules for the
full interfaces.
"""

__version__ = "0.1.0"

from .errors import CapacityError, ConstructionError, DomainError, PropertyViolation
from .grid import Ambient, EquationSpec, Grid, PointSet, full_grid, point_sum, rank, unrank
from .solutions import (count_cross, count_solutions, count_through_point, greedy_disjoint_family,
                        multiplicity_map)
from .coloring import count_deviating, count_rainbow_free, is_rainbow_free, lower_bound_value
from .templates import (Template, classify_template, count_rainbow_subtemplates,
                        count_template_colorings, is_subtemplate)
from .hypergraph import build_hypergraph, codegree_function, container_parameters, hypergraph_stats
from .constructions import (build_corner_sets, forcing_property_check, odd_coordinate_set,
                            shifted_subgrid, solution_free_ratio_set)
from .extremal import extremal_scan, full_grid_trend

__all__ = [
    "Ambient", "CapacityError", "ConstructionError", "DomainError", "EquationSpec", "Grid",
    "PointSet", "PropertyViolation", "Template", "build_corner_sets", "build_hypergraph",
    "classify_template", "codegree_function", "container_parameters", "count_cross",
    "count_deviating", "count_rainbow_free", "count_rainbow_subtemplates", "count_solutions",
    "count_template_colorings", "count_through_point", "extremal_scan", "forcing_property_check",
    "full_grid", "full_grid_trend", "greedy_disjoint_family", "hypergraph_stats",
    "is_rainbow_free", "is_subtemplate", "lower_bound_value", "multiplicity_map",
    "odd_coordinate_set", "point_sum", "rank", "shifted_subgrid", "solution_free_ratio_set",
    "unrank",
]
