"""Run configuration shared by every CLI stage."""

from __future__ import annotations

import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..cascade import InitiatorMode
from ..ingest import CoreFilterMode
from ..metrics import DegreeBase, SigmoidMode
from ..predict import Aggregation

THREADS_ENV = "DECAYCASCADE_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # ingest
    k: int = 10
    window: int | None = None  # seconds; None spreads the event span over k windows
    start: int | None = None
    core_mode: str = CoreFilterMode.REPUTATION.value
    core_threshold: int = 500
    # cascades
    include_alive: bool = False
    initiator_mode: str = InitiatorMode.EARLIEST.value
    # measures and metrics
    eigen_tol: float = 1e-10
    eigen_max_iter: int = 10000
    min_cut_sample_cap: int | None = None
    sigmoid: str = SigmoidMode.LOGISTIC.value
    degree_base: str = DegreeBase.TREE.value
    bins: int = 20
    # prediction
    n_estimators: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 1
    subsample: float = 1.0
    runs: int = 100
    train_fraction: float = 0.75
    aggregation: str = Aggregation.INITIATOR.value
    baseline_constant: float = 0.0
    seed: int = 0
    threads: int | None = None

    def __post_init__(self):
        _check(self.k >= 2, "k must be at least 2")
        _check(self.window is None or self.window > 0, "window must be positive")
        _check(self.start is None or self.start >= 0, "start must be non-negative")
        _check(self.core_threshold > 0, "core_threshold must be positive")
        _check(self.eigen_tol > 0 and self.eigen_max_iter >= 1, "eigenvector settings must be positive")
        _check(self.min_cut_sample_cap is None or self.min_cut_sample_cap >= 2, "min_cut_sample_cap must be >= 2")
        _check(self.bins >= 2, "bins must be at least 2")
        _check(self.n_estimators >= 1, "n_estimators must be >= 1")
        _check(0 < self.learning_rate <= 1, "learning_rate must lie in (0, 1]")
        _check(self.max_depth >= 1 and self.min_samples_leaf >= 1, "tree sizes must be >= 1")
        _check(0 < self.subsample <= 1, "subsample must lie in (0, 1]")
        _check(self.runs >= 1, "runs must be >= 1")
        _check(0 < self.train_fraction < 1, "train_fraction must lie in (0, 1)")
        _check(self.threads is None or self.threads >= 1, "threads must be >= 1")
        for name, enum_type in _ENUMS.items():
            allowed = [e.value for e in enum_type]
            _check(getattr(self, name) in allowed, f"{name} must be one of {allowed}")

    def subset(self, *names: str) -> dict:
        return {n: getattr(self, n) for n in names}

    def to_dict(self) -> dict:
        """Everything except the thread count, which never changes results."""
        d = asdict(self)
        d.pop("threads")
        return d


_ENUMS = {
    "core_mode": CoreFilterMode,
    "initiator_mode": InitiatorMode,
    "sigmoid": SigmoidMode,
    "degree_base": DegreeBase,
    "aggregation": Aggregation,
}

INGEST_KEYS = ("k", "window", "start", "core_mode", "core_threshold")
CASCADE_KEYS = ("include_alive", "initiator_mode")
METRIC_KEYS = ("eigen_tol", "eigen_max_iter", "min_cut_sample_cap", "sigmoid", "degree_base", "seed")
COMPARE_KEYS = ("sigmoid", "bins")
PREDICT_KEYS = (
    "sigmoid", "n_estimators", "learning_rate", "max_depth", "min_samples_leaf", "subsample",
    "runs", "train_fraction", "aggregation", "baseline_constant", "seed",
)


def _check(ok: bool, msg: str) -> None:
    if not ok:
        raise ConfigError(msg)


def _coerce(name: str, value: Any) -> Any:
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    try:
        if value is None:
            return None
        if "bool" in kind:
            if isinstance(value, str):
                low = value.lower()
                if low not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                return low in ("true", "1", "yes")
            return bool(value)
        if "int" in kind:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(value)
            return int(value)
        if "float" in kind:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {name}: {value!r}") from None


def read_config_file(path: Path) -> dict:
    """Top-level scalars of a TOML file, keyed by RunConfig field name."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path}: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in known:
            raise ConfigError(f"config {path}: unknown key {key!r}")
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config {path}: {key} must be a scalar")
        out[name] = _coerce(name, value)
    return out


def build_config(
    file_values: Mapping[str, Any] | None = None,
    overrides: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> RunConfig:
    """Defaults, then the config file, then command-line flags.

    The thread count comes from the flag, else the environment variable,
    else the config file, else the machine's CPU count.
    """
    env = os.environ if env is None else env
    values = dict(file_values or {})
    flags = {k: _coerce(k, v) for k, v in (overrides or {}).items() if v is not None}
    values.update(flags)
    if "threads" not in flags and env.get(THREADS_ENV):
        values["threads"] = _coerce("threads", env[THREADS_ENV])
    cfg = RunConfig(**values)
    if cfg.threads is None:
        cfg = replace(cfg, threads=os.cpu_count() or 1)
    return cfg
