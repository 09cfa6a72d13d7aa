"""Empirical distributions and two-sample comparisons."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class EmpiricalSample:
    values: tuple
    label: str = ""

    @classmethod
    def of(cls, values, label: str = "") -> "EmpiricalSample":
        return cls(tuple(sorted(float(v) for v in values)), label)

    def __len__(self) -> int:
        return len(self.values)


def _values(sample) -> np.ndarray:
    vals = sample.values if isinstance(sample, EmpiricalSample) else sample
    arr = np.sort(np.asarray(vals, dtype=float))
    if arr.size == 0:
        raise ValueError("empty sample")
    return arr


def ecdf(sample):
    """Right-continuous ECDF ``F(x) = P(X <= x)`` as a vectorised callable."""
    arr = _values(sample)

    def F(x):
        return np.searchsorted(arr, x, side="right") / arr.size

    return F


def eccdf(sample):
    """Complementary ECDF ``P(X > x)``."""
    F = ecdf(sample)
    return lambda x: 1.0 - F(x)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n1: int
    n2: int


def kolmogorov_sf(lam: float, eps: float = 1e-10) -> float:
    """``Q_KS(lam) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2)``, clamped to [0, 1].

    The alternating series converges slowly for small ``lam``; below 1.18 the
    equivalent theta-function form ``1 - sqrt(2 pi)/lam sum exp(-(2j-1)^2 pi^2 / (8 lam^2))``
    is summed instead.
    """
    if lam <= 0:
        return 1.0
    if lam < 1.18:
        total = 0.0
        j = 1
        while True:
            term = math.exp(-((2 * j - 1) ** 2) * math.pi**2 / (8 * lam * lam))
            total += term
            if term < eps * total or term == 0.0:
                break
            j += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2 * math.pi) / lam * total))
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * lam * lam)
        total += sign * term
        if term < eps:
            break
        sign = -sign
        j += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(a, b) -> KsResult:
    """Two-sample KS statistic with the asymptotic (Stephens-corrected) p-value."""
    xa, xb = _values(a), _values(b)
    n1, n2 = xa.size, xb.size
    pooled = np.concatenate([xa, xb])
    # both ECDFs are step functions jumping only at pooled points, so the
    # supremum is attained at one of them (right limits suffice)
    fa = np.searchsorted(xa, pooled, side="right") / n1
    fb = np.searchsorted(xb, pooled, side="right") / n2
    d = float(np.max(np.abs(fa - fb)))
    ne = n1 * n2 / (n1 + n2)
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    return KsResult(d, kolmogorov_sf(lam), n1, n2)


@dataclass(frozen=True)
class HistogramDistribution:
    bin_edges: tuple
    probabilities: tuple

    def __post_init__(self):
        if len(self.probabilities) != len(self.bin_edges) - 1:
            raise ValueError("need exactly one probability per bin")
        p = np.asarray(self.probabilities, dtype=float)
        if (p < 0).any() or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must be non-negative and sum to 1")


def _probs(p) -> np.ndarray:
    return np.asarray(p.probabilities if isinstance(p, HistogramDistribution) else p, dtype=float)


def shannon_entropy(p) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    x = _probs(p)
    nz = x[x > 0]
    return float(-(nz * np.log2(nz)).sum())


def kl_divergence(p, q) -> float:
    """``KL(P || Q)`` in bits; ``inf`` when Q misses mass that P has."""
    _check_shared(p, q)
    x, y = _probs(p), _probs(q)
    mask = x > 0
    if (y[mask] == 0).any():
        return math.inf
    return float((x[mask] * np.log2(x[mask] / y[mask])).sum())


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in bits, in [0, 1]."""
    _check_shared(p, q)
    x, y = _probs(p), _probs(q)
    r = 0.5 * (x + y)
    return float(min(1.0, max(0.0, 0.5 * (kl_divergence(x, r) + kl_divergence(y, r)))))


def _check_shared(p, q) -> None:
    if isinstance(p, HistogramDistribution) and isinstance(q, HistogramDistribution):
        if p.bin_edges != q.bin_edges:
            raise ValueError("distributions must share bin edges")
    elif len(_probs(p)) != len(_probs(q)):
        raise ValueError("distributions must have the same number of bins")


def shared_histogram(a, b, bins: int = 20) -> tuple[HistogramDistribution, HistogramDistribution]:
    """Equal-width bins over the pooled range, each sample normalised.

    A degenerate pooled range yields one bin holding all mass for both.
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    xa, xb = _values(a), _values(b)
    lo = min(xa[0], xb[0])
    hi = max(xa[-1], xb[-1])
    if lo == hi:
        edges = (float(lo), float(hi))
        return HistogramDistribution(edges, (1.0,)), HistogramDistribution(edges, (1.0,))
    edges = np.linspace(lo, hi, bins + 1)
    out = []
    for x in (xa, xb):
        counts, _ = np.histogram(x, bins=edges)
        probs = counts / counts.sum()
        out.append(HistogramDistribution(tuple(float(e) for e in edges), tuple(float(p) for p in probs)))
    return out[0], out[1]


def js_between_samples(a, b, bins: int = 20) -> float:
    p, q = shared_histogram(a, b, bins)
    return js_divergence(p, q)


def five_number_summary(sample) -> tuple[float, float, float, float, float]:
    arr = _values(sample)
    q = np.quantile(arr, [0.0, 0.25, 0.5, 0.75, 1.0])
    return tuple(float(x) for x in q)


@dataclass
class PatternReport:
    metric: str
    sites: list[str]
    p_values: np.ndarray
    js: np.ndarray
    bins: int
    nearest_group: dict


def pattern_distance_report(
    site_metrics: Mapping[str, Sequence[float]],
    metric_name: str,
    groups: Mapping[str, str] | None = None,
    bins: int = 20,
) -> PatternReport:
    """Pairwise KS p-values and JS divergences between sites.

    With ``groups`` (site -> ``"decayed"`` / ``"alive"``), every site is
    assigned the group whose other members are closer on average in JS
    divergence.
    """
    sites = sorted(site_metrics)
    if len(sites) < 2:
        raise ValueError("need at least two sites to compare")
    n = len(sites)
    pv = np.ones((n, n))
    js = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = site_metrics[sites[i]], site_metrics[sites[j]]
            pv[i, j] = pv[j, i] = ks_two_sample(a, b).p_value
            js[i, j] = js[j, i] = js_between_samples(a, b, bins)
    nearest = {}
    if groups:
        labels = sorted(set(groups.values()))
        for i, s in enumerate(sites):
            dist = {}
            for label in labels:
                peers = [j for j, t in enumerate(sites) if t != s and groups.get(t) == label]
                if peers:
                    dist[label] = float(np.mean(js[i, peers]))
            if dist:
                nearest[s] = min(sorted(dist), key=dist.get)
    return PatternReport(metric_name, sites, pv, js, bins, nearest)


def write_distribution_csv(path: Path, sample, label: str = "") -> None:
    """Plot points ``(x, CDF, CCDF)`` at each distinct sample value."""
    arr = _values(sample)
    xs = np.unique(arr)
    F = ecdf(arr)(xs)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("label", "x", "cdf", "ccdf"))
        for x, f in zip(xs, F):
            w.writerow((label, repr(float(x)), repr(float(f)), repr(float(1.0 - f))))


def write_matrix_csv(path: Path, labels: Sequence[str], mat: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["site", *labels])
        for s, row in zip(labels, mat):
            w.writerow([s, *(repr(float(x)) for x in row)])
