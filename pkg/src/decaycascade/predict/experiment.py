"""Repeated random-split evaluation of boosted trees against naive baselines."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .boosting import BaselineRule, GbrConfig, GbrModel, baseline_predict, feature_importance, fit_gbr, mae
from .dataset import Dataset, split

BASELINES = (BaselineRule.MEAN, BaselineRule.MEDIAN, BaselineRule.CONSTANT)


@dataclass(frozen=True)
class ExperimentConfig:
    runs: int = 100
    train_fraction: float = 0.75
    seed: int = 0
    gbr: GbrConfig = field(default_factory=GbrConfig)
    baseline_constant: float = 0.0
    threads: int | None = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass
class ExperimentReport:
    target: str
    feature_names: list
    mae_model: list
    mae_baselines: dict  # rule -> per-run MAE
    baseline_rule: str
    importance: list
    n_rows: int
    n_train: int
    config: dict
    model: GbrModel | None = None  # the run-0 fit; not part of to_dict()

    @property
    def mae_baseline(self) -> list:
        return self.mae_baselines[self.baseline_rule]

    def summary(self) -> dict:
        model = np.asarray(self.mae_model)
        base = np.asarray(self.mae_baseline)
        mean_base = float(base.mean())
        return {
            "runs": len(model),
            "mae_model_mean": float(model.mean()),
            "mae_model_std": float(model.std()),
            "mae_baseline_mean": mean_base,
            "mae_baseline_std": float(base.std()),
            "improvement": (mean_base - float(model.mean())) / mean_base if mean_base > 0 else 0.0,
        }

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "n_rows": self.n_rows,
            "n_train": self.n_train,
            "baseline_rule": self.baseline_rule,
            "summary": self.summary(),
            "importance": dict(zip(self.feature_names, self.importance)),
            "baseline_means": {k: float(np.mean(v)) for k, v in self.mae_baselines.items()},
            "config": self.config,
        }

    def write(self, json_path: Path, runs_csv: Path) -> None:
        Path(json_path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        self.write_runs_csv(runs_csv)

    def write_runs_csv(self, runs_csv: Path) -> None:
        """One row per run, for box plots of the two error distributions."""
        with open(runs_csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("run", "mae_model", "mae_baseline"))
            for i, (a, b) in enumerate(zip(self.mae_model, self.mae_baseline)):
                w.writerow((i, repr(a), repr(b)))


def _one_run(dataset: Dataset, config: ExperimentConfig, seeds: tuple[int, int]):
    split_seed, fit_seed = seeds
    train, test = split(dataset, config.train_fraction, split_seed)
    model = fit_gbr(train.X, train.y, config.gbr, fit_seed, dataset.feature_names)
    model_mae = mae(model.predict(test.X), test.y)
    base = {}
    for rule in BASELINES:
        c = baseline_predict(train.y, rule, config.baseline_constant)
        base[rule.value] = mae(np.full(len(test), c), test.y)
    return model_mae, base, model, len(train)


def run_experiment(dataset: Dataset, config: ExperimentConfig | None = None, target: str = "") -> ExperimentReport:
    """``runs`` fresh splits; model and baselines scored on each test part.

    The reported baseline is the rule with the lowest mean test MAE.
    Importances come from the run-0 model. Per-run seeds are spawned from
    ``config.seed``, so results do not depend on the thread count.
    """
    config = config or ExperimentConfig()
    children = np.random.SeedSequence(config.seed).spawn(config.runs)
    seeds = [tuple(int(s) for s in c.generate_state(2)) for c in children]
    threads = config.threads or os.cpu_count() or 1
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda s: _one_run(dataset, config, s), seeds))
    else:
        results = [_one_run(dataset, config, s) for s in seeds]

    mae_model = [r[0] for r in results]
    mae_base = {rule.value: [r[1][rule.value] for r in results] for rule in BASELINES}
    best = min(mae_base, key=lambda k: (np.mean(mae_base[k]), k))
    weights = feature_importance(results[0][2], len(dataset.feature_names))
    cfg = asdict(config)
    cfg.pop("threads")
    return ExperimentReport(
        target=target,
        feature_names=list(dataset.feature_names),
        mae_model=mae_model,
        mae_baselines=mae_base,
        baseline_rule=best,
        importance=[float(w) for w in weights],
        n_rows=len(dataset),
        n_train=results[0][3],
        config=cfg,
        model=results[0][2],
    )
