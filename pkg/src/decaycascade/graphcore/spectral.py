"""Eigenvector centrality by power iteration."""

from __future__ import annotations

import numpy as np

from .graph import StaticGraph


class ConvergenceError(ArithmeticError):
    """Power iteration did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def eigenvector_centrality(g: StaticGraph, tol: float = 1e-10, max_iter: int = 10000) -> dict:
    """Leading eigenvector of the adjacency matrix, scaled to max-norm 1.

    Computed on the largest connected component; every other node scores 0.
    When several components share the largest size each is scored on its
    own, so the result never depends on node labels. Iterates
    ``x <- (A + I) x``, which shares eigenvectors with ``A`` but cannot
    oscillate on bipartite graphs. Stops once successive iterates and the
    residual ``|A x - lambda x|`` are both below ``tol`` in max-norm.
    """
    if g.number_of_edges() == 0:
        raise ValueError("eigenvector centrality needs at least one edge")
    comps = g.connected_components()
    size = max(len(c) for c in comps)
    scores = dict.fromkeys(g.nodes, 0.0)
    for comp in comps:
        if len(comp) == size:
            scores.update(_power_iteration(g, comp, tol, max_iter))
    return scores


def _power_iteration(g: StaticGraph, comp, tol: float, max_iter: int) -> dict:
    index = {v: i for i, v in enumerate(comp)}
    n = len(comp)
    adj = np.zeros((n, n))
    for v in comp:
        for w in g.neighbors(v):
            adj[index[v], index[w]] = 1.0

    x = np.ones(n)
    residual = np.inf
    for _ in range(max_iter):
        y = adj @ x + x
        y /= np.abs(y).max()
        step = np.abs(y - x).max()
        x = y
        ax = adj @ x
        lam = float(x @ ax) / float(x @ x)
        residual = float(np.abs(ax - lam * x).max())
        if step < tol and residual < tol:
            break
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
            residual,
        )
    return {v: float(x[i]) for v, i in index.items()}
