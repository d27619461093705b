"""Centrality scores, CCDFs and percentile placement."""

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import SOCIAL

PAGERANK, HUB, AUTHORITY = "pagerank", "hub", "authority"


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass
class ScoreVector:
    kind: str
    scores: dict
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    degenerate: bool = False

    def __getitem__(self, u):
        return self.scores[u]

    def __len__(self):
        return len(self.scores)

    def ranked(self):
        """``(user, score)`` pairs by descending score, ties by user id."""
        return sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0]))


def _report(kind, it, residual, tol):
    if residual >= tol:
        warnings.warn(f"{kind} did not converge after {it} iterations (L1 residual {residual:.3e})",
                      ConvergenceWarning, stacklevel=3)
        return False
    return True


def pagerank(g, layer=SOCIAL, damping=0.85, tol=1e-10, max_iters=200):
    """Power-iteration Pagerank with dangling mass spread uniformly."""
    if not 0 < damping < 1:
        raise ValueError("damping must lie strictly between 0 and 1")
    nodes, adj = g.adjacency(layer)
    n = len(nodes)
    if n == 0:
        raise ValueError("pagerank of an empty graph")
    outdeg = np.asarray(adj.sum(axis=1)).ravel()
    dangling = outdeg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / outdeg[~dangling]
    # column-stochastic transition applied as adj^T @ (x / outdeg)
    trans = adj.T.tocsr()
    x = np.full(n, 1.0 / n)
    residual = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        nxt = damping * (trans @ (x * inv))
        nxt += (damping * x[dangling].sum() + (1.0 - damping)) / n
        residual = np.abs(nxt - x).sum()
        x = nxt
        if residual < tol:
            break
    x /= x.sum()
    ok = _report(PAGERANK, it, residual, tol)
    return ScoreVector(PAGERANK, dict(zip(nodes, x.tolist())), it, float(residual), ok)


def hits(g, layer=SOCIAL, tol=1e-10, max_iters=200):
    """Hub and authority scores, each L1-normalized after every half-step.

    Returns ``(hub, authority)``. A layer without arcs yields all-zero vectors
    flagged ``degenerate``.
    """
    nodes, adj = g.adjacency(layer)
    n = len(nodes)
    if n == 0:
        raise ValueError("hits of an empty graph")
    if adj.nnz == 0:
        zero = dict.fromkeys(nodes, 0.0)
        return (ScoreVector(HUB, dict(zero), degenerate=True),
                ScoreVector(AUTHORITY, dict(zero), degenerate=True))
    adj_t = adj.T.tocsr()
    hub = np.full(n, 1.0 / n)
    auth = np.zeros(n)
    residual = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        new_auth = adj_t @ hub
        new_auth /= new_auth.sum()
        new_hub = adj @ new_auth
        new_hub /= new_hub.sum()
        residual = np.abs(new_hub - hub).sum() + np.abs(new_auth - auth).sum()
        hub, auth = new_hub, new_auth
        if residual < tol:
            break
    ok = _report("hits", it, residual, tol)
    return (ScoreVector(HUB, dict(zip(nodes, hub.tolist())), it, float(residual), ok),
            ScoreVector(AUTHORITY, dict(zip(nodes, auth.tolist())), it, float(residual), ok))


def ccdf(values):
    """``[(x, P(X >= x)), ...]`` for each distinct value, ascending."""
    arr = np.sort(np.asarray(list(values), dtype=float))
    if arr.size == 0:
        raise ValueError("ccdf of an empty sample")
    distinct, first = np.unique(arr, return_index=True)
    frac = (arr.size - first) / arr.size
    return [(_num(x), float(f)) for x, f in zip(distinct, frac)]


def _num(x):
    return int(x) if float(x).is_integer() else float(x)


def percentile_of(scores, node):
    """Percent of users whose score is strictly lower than ``node``'s."""
    values = scores.scores if isinstance(scores, ScoreVector) else scores
    if node not in values:
        raise KeyError(f"node {node} has no score")
    mine = values[node]
    lower = sum(1 for s in values.values() if s < mine)
    return 100.0 * lower / len(values)


def degree_values(g, which, layer=SOCIAL, nodes=None):
    """Per-node values for ``in-degree``, ``out-degree``, ``msg-in`` or ``msg-out``."""
    nodes = g.layer_nodes(layer) if nodes is None else nodes
    fn = {
        "in-degree": lambda u: g.in_degree(u, layer),
        "out-degree": lambda u: g.out_degree(u, layer),
        "msg-in": g.msg_in,
        "msg-out": g.msg_out,
    }[which]
    return {u: fn(u) for u in nodes}


def write_scores(scores, path, header=""):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        for u, s in scores.ranked():
            fh.write(f"{u}\t{s!r}\n")


def write_ccdf(points, path, header=""):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        for x, f in points:
            fh.write(f"{x}\t{f!r}\n")
