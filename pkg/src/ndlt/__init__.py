"""Next-depth lookahead decision trees."""

from ndlt.baseline import build_exhaustive_thresholds_greedy, build_greedy_tree
from ndlt.builder import FixedSplitPlan, build_tree, choose_split, predict, rank_parent_candidates
from ndlt.core import (
    DataError,
    DatasetView,
    Hyperparams,
    HyperparamError,
    Internal,
    Leaf,
    SplitCandidate,
    TrainedTree,
    dumps_tree,
    loads_tree,
    validate_hyperparams,
)
from ndlt.impurity import gini, gini_from_histogram, split_impurity
from ndlt.lookahead import compute_side_min_impurity, generate_thresholds, lower_eval, total_error, weight_w1

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "DatasetView",
    "FixedSplitPlan",
    "HyperparamError",
    "Hyperparams",
    "Internal",
    "Leaf",
    "SplitCandidate",
    "TrainedTree",
    "build_exhaustive_thresholds_greedy",
    "build_greedy_tree",
    "build_tree",
    "choose_split",
    "compute_side_min_impurity",
    "dumps_tree",
    "generate_thresholds",
    "gini",
    "gini_from_histogram",
    "loads_tree",
    "lower_eval",
    "predict",
    "rank_parent_candidates",
    "split_impurity",
    "total_error",
    "validate_hyperparams",
    "weight_w1",
]
