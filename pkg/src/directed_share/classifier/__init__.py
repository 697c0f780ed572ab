"""Decision-tree share classifier, its text format and evaluation harness."""

from .evaluate import (
    COARSE_ABLATION,
    DETAILED_ABLATION,
    AblationRow,
    EvalReport,
    FoldResult,
    Metrics,
    Scores,
    ablation,
    ablation_frame,
    cross_validate,
    metrics,
    stratified_folds,
)
from .text import LABELS, dumps, format_threshold, loads
from .tree import DecisionTree, Leaf, Split, TreeParams, fit_arrays, gini, predict, train_tree

__all__ = [
    "TreeParams",
    "Leaf",
    "Split",
    "DecisionTree",
    "train_tree",
    "fit_arrays",
    "predict",
    "gini",
    "LABELS",
    "dumps",
    "loads",
    "format_threshold",
    "Scores",
    "Metrics",
    "metrics",
    "FoldResult",
    "EvalReport",
    "stratified_folds",
    "cross_validate",
    "AblationRow",
    "COARSE_ABLATION",
    "DETAILED_ABLATION",
    "ablation",
    "ablation_frame",
]
