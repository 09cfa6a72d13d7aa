"""Cascade size and virality prediction from initial-network features."""

from .boosting import (
    BaselineRule,
    GbrConfig,
    GbrModel,
    baseline_predict,
    feature_importance,
    fit_gbr,
    mae,
)
from .dataset import (
    Aggregation,
    Dataset,
    Target,
    assemble_dataset,
    assemble_sites,
    select_top_features,
    split,
)
from .experiment import ExperimentConfig, ExperimentReport, run_experiment
from .tree import PresortedMatrix, RegressionTree, fit_tree

__all__ = [
    "Aggregation",
    "BaselineRule",
    "Dataset",
    "ExperimentConfig",
    "ExperimentReport",
    "GbrConfig",
    "GbrModel",
    "PresortedMatrix",
    "RegressionTree",
    "Target",
    "assemble_dataset",
    "assemble_sites",
    "baseline_predict",
    "feature_importance",
    "fit_gbr",
    "fit_tree",
    "mae",
    "run_experiment",
    "select_top_features",
    "split",
]
