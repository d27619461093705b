"""Temporal training sets, cross-validated AUC, feature ranking and top-1 recommendation."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .features import FEATURE_NAMES, FeatureExtractor, FeatureVector
from .forest import ClassifierModel

log = logging.getLogger(__name__)

POSITIVE_THRESHOLD = 0.5


@dataclass(frozen=True)
class LabeledPair:
    u: int
    v: int
    features: FeatureVector
    label: int


def pairs_to_arrays(pairs):
    X = np.array([p.features for p in pairs], dtype=float).reshape(-1, len(FEATURE_NAMES))
    y = np.array([p.label for p in pairs], dtype=np.int64)
    return X, y


def _is_distance2(g, u, v):
    if v == u or g.has_arc(u, v):
        return False
    return not g.out_neighbors(u).isdisjoint(g.in_neighbors(v))


def build_training_set(g_t0, g_t1, profiles, n_pairs, seed):
    """Balanced set of distance-2 pairs at ``g_t0``, labeled by linkage in ``g_t1``.

    Positives are pairs that gained a social arc by ``g_t1``; negatives are
    drawn uniformly from the distance-2 pairs still unlinked in ``g_t1``.
    Features are always computed on ``g_t0``.
    """
    if n_pairs % 2:
        raise ValueError("n_pairs must be even")
    missing = [u for u in g_t0.nodes if u not in g_t1]
    if missing:
        raise ValueError(f"later snapshot lacks {len(missing)} nodes of the earlier one")
    rng = np.random.default_rng(seed)
    half = n_pairs // 2

    positives = [(u, v) for u, v, _ in g_t1.social_arcs()
                 if u in g_t0 and v in g_t0 and _is_distance2(g_t0, u, v)]
    if len(positives) < half:
        log.warning("only %d positive pairs available, %d requested; shrinking negatives to match",
                    len(positives), half)
        if not positives:
            log.warning("degenerate training set: no distance-2 pair became linked")
        half = len(positives)
    if len(positives) > half:
        keep = np.sort(rng.choice(len(positives), half, replace=False))
        positives = [positives[i] for i in keep]

    negatives = _sample_negatives(g_t0, g_t1, half, rng) if half else []

    fx = FeatureExtractor(g_t0, profiles)
    out = [LabeledPair(u, v, fx.features(u, v), 1) for u, v in positives]
    out += [LabeledPair(u, v, fx.features(u, v), 0) for u, v in negatives]
    return out


def _unlinked_candidates(g_t0, g_t1, u):
    return sorted(w for w in g_t0.distance2_out_candidates(u) if not g_t1.has_arc(u, w))


def _sample_negatives(g_t0, g_t1, count, rng):
    """Sample ``count`` distinct pairs uniformly from distance-2 pairs unlinked in ``g_t1``.

    Every pair gets a flat index (source-major, candidates sorted), so a uniform
    draw of indices is a uniform draw of pairs. Candidate lists are rebuilt only
    for the sources actually hit.
    """
    nodes = g_t0.nodes
    sizes = np.array([len(_unlinked_candidates(g_t0, g_t1, u)) for u in nodes], dtype=np.int64)
    total = int(sizes.sum())
    if total < count:
        raise ValueError(f"only {total} unlinked distance-2 pairs exist, {count} negatives requested")
    chosen = []
    seen = set()
    while len(chosen) < count:
        for f in rng.integers(0, total, size=2 * (count - len(chosen))).tolist():
            if f not in seen:
                seen.add(f)
                chosen.append(f)
                if len(chosen) == count:
                    break
    cum = np.cumsum(sizes)
    src = np.searchsorted(cum, chosen, side="right")
    pools = {}
    out = []
    for f, k in zip(chosen, src.tolist()):
        u = nodes[k]
        if u not in pools:
            pools[u] = _unlinked_candidates(g_t0, g_t1, u)
        out.append((u, pools[u][f - (int(cum[k - 1]) if k else 0)]))
    return out


def train(pairs, tree_count=50, seed=0, max_depth=8, min_leaf=5, max_features=None):
    if not pairs:
        raise ValueError("cannot train on an empty pair set")
    X, y = pairs_to_arrays(pairs)
    return ClassifierModel(tree_count, max_depth, min_leaf, max_features, seed).fit(X, y)


def auc(scores, labels):
    """Area under the ROC curve via the Mann-Whitney rank statistic (ties averaged)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes")
    ranks = rankdata(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def stratified_folds(labels, folds, seed):
    """Assign each sample a fold id so both classes are spread evenly."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    assign = np.empty(len(labels), dtype=np.int64)
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = np.arange(len(idx)) % folds
    return assign


def evaluate_auc(model_builder, pairs, folds=10, seed=0):
    """Mean AUC over stratified folds.

    ``model_builder(X_train, y_train)`` must return an object with
    ``predict_proba(X)``.
    """
    if folds < 2:
        raise ValueError("need at least two folds")
    X, y = pairs_to_arrays(pairs) if not isinstance(pairs, tuple) else pairs
    assign = stratified_folds(y, folds, seed)
    scores = []
    for k in range(folds):
        test = assign == k
        if len(np.unique(y[test])) < 2 or len(np.unique(y[~test])) < 2:
            raise ValueError(f"fold {k} lacks one of the classes")
        model = model_builder(X[~test], y[~test])
        scores.append(auc(model.predict_proba(X[test]), y[test]))
    return float(np.mean(scores))


def forest_builder(tree_count=50, seed=0, **params):
    def build(X, y):
        return ClassifierModel(tree_count, seed=seed, **params).fit(X, y)
    return build


def chi_squared_rank(pairs, bins=10, names=FEATURE_NAMES):
    """Chi-squared statistic of each feature against the label, descending.

    Each feature is discretized into ``bins`` equal-width bins over its range;
    a constant feature scores 0.
    """
    if isinstance(pairs, tuple):
        X, y = pairs
    else:
        if not pairs:
            raise ValueError("no pairs to rank")
        X, y = pairs_to_arrays(pairs)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    stats = []
    for j, name in enumerate(names):
        stats.append((name, _chi2(X[:, j], y, bins)))
    order = sorted(range(len(stats)), key=lambda k: (-stats[k][1], k))
    return [stats[k] for k in order]


def _chi2(x, y, bins):
    lo, hi = x.min(), x.max()
    if hi == lo or len(np.unique(y)) < 2:
        return 0.0
    b = np.minimum(((x - lo) / (hi - lo) * bins).astype(np.int64), bins - 1)
    table = np.zeros((bins, 2))
    np.add.at(table, (b, y), 1)
    table = table[table.sum(axis=1) > 0]
    expected = table.sum(axis=1, keepdims=True) * table.sum(axis=0, keepdims=True) / table.sum()
    return float(((table - expected) ** 2 / expected).sum())


def score_candidates(model, g, profiles, u, extractor=None):
    """``[(candidate, confidence), ...]`` over ``u``'s distance-2 candidates, sorted by id."""
    cands = sorted(g.distance2_out_candidates(u))
    if not cands:
        return []
    fx = extractor or FeatureExtractor(g, profiles)
    conf = model.predict_proba(fx.matrix([(u, w) for w in cands]))
    return list(zip(cands, conf.tolist()))


def recommend(model, g, profiles, u, k=1, extractor=None, exclude=()):
    """Best distance-2 suggestion(s) for ``u`` among positively classified candidates.

    Returns ``(v, confidence)`` for ``k == 1`` (or ``None``), else a list of up to ``k``.
    Ties in confidence go to the smaller user id.
    """
    if u not in g:
        raise KeyError(f"unknown node {u}")
    scored = [(w, c) for w, c in score_candidates(model, g, profiles, u, extractor)
              if c > POSITIVE_THRESHOLD and w not in exclude]
    scored.sort(key=lambda wc: (-wc[1], wc[0]))
    if k == 1:
        return scored[0] if scored else None
    return scored[:k]
