"""Gradient-boosted regression trees for squared loss, plus naive baselines."""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .tree import PresortedMatrix, RegressionTree, fit_tree

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GbrConfig:
    n_estimators: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 1
    subsample: float = 1.0

    def __post_init__(self):
        if self.n_estimators < 0:
            raise ValueError("n_estimators must be >= 0")
        if not 0 < self.learning_rate <= 1:
            raise ValueError("learning_rate must lie in (0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0 < self.subsample <= 1:
            raise ValueError("subsample must lie in (0, 1]")


@dataclass
class GbrModel:
    initial_prediction: float
    learning_rate: float
    trees: list[RegressionTree] = field(default_factory=list)
    feature_names: tuple[str, ...] = ()
    train_loss: list[float] = field(default_factory=list)
    n_features: int = 0

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.full(X.shape[0], self.initial_prediction)
        for t in self.trees:
            out += self.learning_rate * t.predict(X)
        return out

    def to_dict(self) -> dict:
        return {
            "initial": self.initial_prediction,
            "rate": self.learning_rate,
            "feature_names": list(self.feature_names),
            "n_features": self.n_features,
            "max_depth": self.trees[0].max_depth if self.trees else 0,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbrModel":
        depth = data.get("max_depth", 0)
        return cls(
            initial_prediction=float(data["initial"]),
            learning_rate=float(data["rate"]),
            trees=[RegressionTree.from_dict(t, depth) for t in data["trees"]],
            feature_names=tuple(data.get("feature_names", ())),
            n_features=int(data.get("n_features", len(data.get("feature_names", ())))),
        )

    def save(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: Path) -> "GbrModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit_gbr(
    X,
    y,
    config: GbrConfig | None = None,
    seed: int = 0,
    feature_names: Sequence[str] = (),
) -> GbrModel:
    """Boost squared-loss trees on the running residuals.

    Starts from the target mean. Stops early once a fitted tree neither
    splits nor moves the prediction, since every later tree would repeat it.
    """
    config = config or GbrConfig()
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("cannot fit on an empty training set")
    data = PresortedMatrix(X)
    if data.X.shape[0] != y.size:
        raise ValueError("X and y disagree on the number of rows")
    rng = np.random.default_rng(seed)
    model = GbrModel(
        float(y.mean()),
        config.learning_rate,
        feature_names=tuple(feature_names),
        n_features=data.X.shape[1],
    )
    pred = np.full(y.size, model.initial_prediction)
    model.train_loss.append(float(np.mean((y - pred) ** 2)))
    n_sub = max(1, int(round(config.subsample * y.size)))
    for _ in range(config.n_estimators):
        residual = y - pred
        mask = None
        if n_sub < y.size:
            mask = np.zeros(y.size, dtype=bool)
            mask[rng.choice(y.size, n_sub, replace=False)] = True
        tree = fit_tree(data, residual, config.max_depth, mask, config.min_samples_leaf)
        if tree.n_splits == 0 and abs(tree.value[0]) < 1e-15:
            break
        model.trees.append(tree)
        pred = pred + config.learning_rate * tree.predict(data.X)
        model.train_loss.append(float(np.mean((y - pred) ** 2)))
    return model


def mae(predictions, truths) -> float:
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(truths, dtype=float)
    if p.shape != t.shape:
        raise ValueError("predictions and truths differ in shape")
    if p.size == 0:
        raise ValueError("mae of an empty set")
    return float(np.mean(np.abs(t - p)))


class BaselineRule(str, enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"
    CONSTANT = "constant"


def baseline_predict(train_targets, rule: BaselineRule | str = BaselineRule.MEAN, constant: float = 0.0) -> float:
    """The constant a naive rule would predict for every test row."""
    rule = BaselineRule(rule)
    if rule is BaselineRule.CONSTANT:
        return float(constant)
    y = np.asarray(train_targets, dtype=float)
    if y.size == 0:
        raise ValueError(f"{rule.value} baseline needs training targets")
    return float(y.mean() if rule is BaselineRule.MEAN else np.median(y))


def feature_importance(model: GbrModel, n_features: int | None = None) -> np.ndarray:
    """Total squared-error reduction credited to each feature, normalised to 1.

    Each split's reduction is already weighted by its node's sample count.
    A model without splits gets uniform weights.
    """
    if n_features is None:
        n_features = model.n_features or len(model.feature_names)
    if not n_features:
        raise ValueError("number of features unknown")
    w = np.zeros(n_features)
    for t in model.trees:
        for f, g in zip(t.feature, t.gain):
            if f >= 0:
                w[f] += g
    total = w.sum()
    if total <= 0:
        log.warning("model has no splits; importance is uniform")
        return np.full(n_features, 1.0 / n_features)
    return w / total
