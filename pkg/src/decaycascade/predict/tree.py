"""Least-squares regression trees with exact greedy splits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RegressionTree:
    """Flat array encoding; ``feature[i] == -1`` marks a leaf.

    Samples with ``x[feature] <= threshold`` go left.
    """

    max_depth: int
    feature: list = field(default_factory=list)
    threshold: list = field(default_factory=list)
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    value: list = field(default_factory=list)
    gain: list = field(default_factory=list)
    n_samples: list = field(default_factory=list)

    def _add(self, value: float, n: int) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(float(value))
        self.gain.append(0.0)
        self.n_samples.append(int(n))
        return len(self.feature) - 1

    @property
    def n_splits(self) -> int:
        return sum(1 for f in self.feature if f >= 0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left, right = np.asarray(self.left), np.asarray(self.right)
        node = np.zeros(X.shape[0], dtype=int)
        rows = np.arange(X.shape[0])
        for _ in range(self.max_depth + 1):
            f = feature[node]
            internal = f >= 0
            if not internal.any():
                break
            go_left = X[rows, np.where(internal, f, 0)] <= threshold[node]
            node = np.where(internal, np.where(go_left, left[node], right[node]), node)
        return np.asarray(self.value)[node]

    def to_dict(self, i: int = 0) -> dict:
        if self.feature[i] < 0:
            return {"leaf": self.value[i]}
        return {
            "feature": self.feature[i],
            "threshold": self.threshold[i],
            "left": self.to_dict(self.left[i]),
            "right": self.to_dict(self.right[i]),
        }

    @classmethod
    def from_dict(cls, data: dict, max_depth: int) -> "RegressionTree":
        tree = cls(max_depth)

        def build(d) -> int:
            if "leaf" in d:
                return tree._add(d["leaf"], 0)
            i = tree._add(0.0, 0)
            tree.feature[i] = int(d["feature"])
            tree.threshold[i] = float(d["threshold"])
            tree.left[i] = build(d["left"])
            tree.right[i] = build(d["right"])
            return i

        build(data)
        return tree


class PresortedMatrix:
    """Training matrix with every column's sort order computed once."""

    def __init__(self, X: np.ndarray):
        self.X = np.asarray(X, dtype=float)
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D")
        self.order = np.argsort(self.X, axis=0, kind="stable").T  # (m, n)
        self.sorted_values = np.take_along_axis(self.X.T, self.order, axis=1)


def fit_tree(
    data: PresortedMatrix,
    residuals: np.ndarray,
    max_depth: int,
    sample_mask: np.ndarray | None = None,
    min_samples_leaf: int = 1,
) -> RegressionTree:
    """Greedy depth-limited tree minimising squared error on ``residuals``.

    Candidate thresholds are midpoints between consecutive distinct values of
    a feature within the node. The best variance reduction wins; ties go to
    the lowest feature index, then the smallest threshold. Leaves predict the
    mean residual of their samples.
    """
    n, m = data.X.shape
    r = np.asarray(residuals, dtype=float)
    tree = RegressionTree(max_depth)
    root_mask = np.ones(n, dtype=bool) if sample_mask is None else np.asarray(sample_mask, dtype=bool)
    sorted_res = r[data.order]  # (m, n)

    stack = [(root_mask, 0, None)]
    while stack:
        mask, depth, slot = stack.pop()
        count = int(mask.sum())
        total = float(r[mask].sum())
        idx = tree._add(total / count if count else 0.0, count)
        if slot is not None:
            parent, side = slot
            (tree.left if side == "L" else tree.right)[parent] = idx
        if depth >= max_depth or count < 2 * min_samples_leaf:
            continue
        sse = float((r[mask] ** 2).sum()) - total * total / count
        if sse <= 1e-12 * max(1.0, float((r[mask] ** 2).sum())):
            continue

        member = mask[data.order]
        vals = data.sorted_values[member].reshape(m, count)
        res = sorted_res[member].reshape(m, count)
        left_sum = np.cumsum(res, axis=1)[:, :-1]
        n_left = np.arange(1, count, dtype=float)
        n_right = count - n_left
        gain = left_sum**2 / n_left + (total - left_sum) ** 2 / n_right - total * total / count
        valid = vals[:, :-1] < vals[:, 1:]
        if min_samples_leaf > 1:
            valid &= (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
        gain = np.where(valid, gain, -np.inf)
        # gains equal up to rounding count as ties: lowest feature, then smallest threshold
        flat = gain.ravel()
        best = int(np.flatnonzero(flat >= flat.max() - 1e-10 * sse)[0])
        f, pos = divmod(best, count - 1)
        g = float(gain[f, pos])
        if not np.isfinite(g) or g <= 1e-12 * sse:
            continue
        lo, hi = vals[f, pos], vals[f, pos + 1]
        thr = 0.5 * (lo + hi)
        if not lo <= thr < hi:
            thr = lo
        tree.feature[idx] = f
        tree.threshold[idx] = float(thr)
        tree.gain[idx] = g
        go_left = data.X[:, f] <= thr
        # right child is pushed first so the left subtree gets the lower ids
        stack.append((mask & ~go_left, depth + 1, (idx, "R")))
        stack.append((mask & go_left, depth + 1, (idx, "L")))
    return tree
