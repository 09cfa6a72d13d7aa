from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..cascade import CascadeTree
from ..graphcore.measures import FEATURE_NAMES, NodeMeasures
from ..metrics import SigmoidMode, cascade_virality, normalize_virality


class Target(str, enum.Enum):
    SIZE = "size"
    VIRALITY = "virality"


class Aggregation(str, enum.Enum):
    INITIATOR = "initiator"
    MEAN = "mean"


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    cascade_ids: list
    sites: list
    feature_names: tuple[str, ...] = FEATURE_NAMES
    imputed: np.ndarray = field(default=None)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float).reshape(len(self.y), -1)
        self.y = np.asarray(self.y, dtype=float)
        if self.imputed is None:
            self.imputed = np.zeros(len(self.y), dtype=bool)
        if self.X.shape[1] != len(self.feature_names):
            raise ValueError("feature matrix width does not match feature names")

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=int)
        return Dataset(
            self.X[rows],
            self.y[rows],
            [self.cascade_ids[i] for i in rows],
            [self.sites[i] for i in rows],
            self.feature_names,
            self.imputed[rows],
        )

    def with_target(self, y) -> "Dataset":
        return Dataset(self.X, np.asarray(y, dtype=float), self.cascade_ids, self.sites, self.feature_names, self.imputed)


def _feature_row(tree: CascadeTree, measures: Mapping, aggregation: Aggregation) -> np.ndarray:
    if aggregation is Aggregation.INITIATOR:
        if tree.root not in measures:
            raise KeyError(f"no measures for cascade {tree.id} initiator {tree.root!r}")
        return np.array(measures[tree.root].as_vector())
    rows = [measures[v].as_vector() for v in tree.nodes if v in measures]
    if not rows:
        raise KeyError(f"no measures for any node of cascade {tree.id}")
    return np.mean(rows, axis=0)


def assemble_sites(
    inputs: Mapping[str, tuple[Sequence[CascadeTree], Mapping[object, NodeMeasures]]],
    target: Target | str,
    aggregation: Aggregation | str = Aggregation.INITIATOR,
    sigmoid: SigmoidMode | str = SigmoidMode.LOGISTIC,
) -> Dataset:
    """One row per cascade over several sites.

    Features come from ``G_0`` only. Virality targets are squashed with the
    sigmoid over the pooled sample so that sites share one scale.
    """
    target = Target(target)
    aggregation = Aggregation(aggregation)
    X, y, ids, sites = [], [], [], []
    for site in sorted(inputs):
        trees, measures = inputs[site]
        for t in trees:
            X.append(_feature_row(t, measures, aggregation))
            y.append(float(len(t.nodes)) if target is Target.SIZE else cascade_virality(t))
            ids.append(t.id)
            sites.append(site)
    if not X:
        raise ValueError("no cascades to build a dataset from")
    X = np.vstack(X)
    bad = ~np.isfinite(X)
    imputed = bad.any(axis=1)
    X[bad] = 0.0
    if target is Target.VIRALITY:
        y = normalize_virality(y, sigmoid)
    return Dataset(X, np.array(y), ids, sites, FEATURE_NAMES, imputed)


def assemble_dataset(
    trees: Sequence[CascadeTree],
    measures: Mapping[object, NodeMeasures],
    target: Target | str,
    site: str = "",
    aggregation: Aggregation | str = Aggregation.INITIATOR,
    sigmoid: SigmoidMode | str = SigmoidMode.LOGISTIC,
) -> Dataset:
    return assemble_sites({site: (trees, measures)}, target, aggregation, sigmoid)


def split(dataset: Dataset, train_fraction: float = 0.75, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Uniformly random train/test partition, reproducible from ``seed``."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = len(dataset)
    if n < 2:
        raise ValueError("need at least two rows to split")
    n_train = min(n - 1, max(1, int(round(train_fraction * n))))
    perm = np.random.default_rng(seed).permutation(n)
    return dataset.subset(np.sort(perm[:n_train])), dataset.subset(np.sort(perm[n_train:]))


def select_top_features(dataset: Dataset, weights, j: int = 5) -> Dataset:
    """Keep the ``j`` highest-weight features, in their original column order."""
    m = dataset.X.shape[1]
    if not 1 <= j <= m:
        raise ValueError(f"j must lie in 1..{m}")
    w = np.asarray(weights, dtype=float)
    # stable sort on -w keeps the lower index first among ties
    keep = np.sort(np.argsort(-w, kind="stable")[:j])
    return Dataset(
        dataset.X[:, keep],
        dataset.y,
        dataset.cascade_ids,
        dataset.sites,
        tuple(dataset.feature_names[i] for i in keep),
        dataset.imputed,
    )
