"""Exact scattering diagram completion and Maurer-Cartan tree sums."""
from .lie import LieElement, LieError, LieTerm, bch, bracket, derivation_apply, group_act
from .mc import MCError, PolyFormDgLa, mc_residual, obstruction, solve_fixed_point, solve_tree_sum
from .scattering import (ConeViolation, Diagram, DiagramError, Loop, MonodromyError, Support, Wall,
                         complete, is_consistent, log_seed, minimalize, path_ordered_product)
from .series import Series, SeriesError, exp_positive, log_one_plus
from .trees import PlanarTree, enumerate_trees, label_edges

__version__ = "0.1.0"

__all__ = [
    "ConeViolation", "Diagram", "DiagramError", "LieElement", "LieError", "LieTerm", "Loop", "MCError",
    "MonodromyError", "PlanarTree", "PolyFormDgLa", "Series", "SeriesError", "Support", "Wall", "bch",
    "bracket", "complete", "derivation_apply", "enumerate_trees", "exp_positive", "group_act",
    "is_consistent", "label_edges", "log_one_plus", "log_seed", "mc_residual", "minimalize", "obstruction",
    "path_ordered_product", "solve_fixed_point", "solve_tree_sum",
]
