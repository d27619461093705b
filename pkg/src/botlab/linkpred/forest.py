"""Bootstrap-aggregated binary decision trees with vote-share confidence."""

import json
from pathlib import Path

import numpy as np

from .features import FEATURE_NAMES

LEAF = -1


def _entropy(pos, n):
    p = np.divide(pos, n, out=np.zeros_like(pos, dtype=float), where=n > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
    return h


class DecisionTree:
    """Binary classification tree grown by information gain.

    Nodes are stored in flat arrays; ``feature[i] == -1`` marks a leaf whose
    prediction is ``value[i]`` (0 or 1).
    """

    def __init__(self, max_depth=8, min_leaf=5, max_features=None):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []

    def _new_node(self):
        for arr, init in ((self.feature, LEAF), (self.threshold, 0.0), (self.left, LEAF),
                          (self.right, LEAF), (self.value, 0)):
            arr.append(init)
        return len(self.feature) - 1

    def fit(self, X, y, rng=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        rng = rng if rng is not None else np.random.default_rng(0)
        self.feature, self.threshold, self.left, self.right, self.value = [], [], [], [], []
        stack = [(self._new_node(), np.arange(len(y)), 0)]
        while stack:
            node, idx, depth = stack.pop()
            ys = y[idx]
            pos = int(ys.sum())
            self.value[node] = 1 if 2 * pos > len(ys) else 0
            if depth >= self.max_depth or len(idx) < 2 * self.min_leaf or pos in (0, len(ys)):
                continue
            split = self._best_split(X[idx], ys, rng)
            if split is None:
                continue
            j, thr = split
            mask = X[idx, j] <= thr
            left, right = self._new_node(), self._new_node()
            self.feature[node], self.threshold[node] = j, thr
            self.left[node], self.right[node] = left, right
            stack.append((right, idx[~mask], depth + 1))
            stack.append((left, idx[mask], depth + 1))
        self._freeze()
        return self

    def _best_split(self, Xn, y, rng):
        n, m = Xn.shape
        feats = np.arange(m)
        if self.max_features is not None and self.max_features < m:
            feats = np.sort(rng.choice(m, self.max_features, replace=False))
        total_pos = y.sum()
        parent = _entropy(np.array([total_pos]), np.array([n]))[0]
        lo, hi = self.min_leaf - 1, n - self.min_leaf  # valid left sizes are lo+1 .. hi
        best_gain, best = 1e-12, None
        for j in feats:
            order = np.argsort(Xn[:, j], kind="stable")
            xs = Xn[order, j]
            cum = np.cumsum(y[order])[:-1]
            nl = np.arange(1, n)
            valid = xs[:-1] != xs[1:]
            valid[:lo] = False
            valid[hi:] = False
            if not valid.any():
                continue
            nr = n - nl
            child = (nl * _entropy(cum, nl) + nr * _entropy(total_pos - cum, nr)) / n
            gain = np.where(valid, parent - child, -np.inf)
            i = int(np.argmax(gain))
            if gain[i] > best_gain:
                best_gain = gain[i]
                best = (int(j), float((xs[i] + xs[i + 1]) / 2.0))
        return best

    def _freeze(self):
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold, dtype=float)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value, dtype=np.int64)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = np.flatnonzero(feat != LEAF)
            if active.size == 0:
                return self.value[node]
            a_node = node[active]
            go_left = X[active, feat[active]] <= self.threshold[a_node]
            node[active] = np.where(go_left, self.left[a_node], self.right[a_node])

    def to_dict(self, i=0, names=FEATURE_NAMES):
        if self.feature[i] == LEAF:
            return {"leaf": int(self.value[i])}
        return {
            "feature": names[self.feature[i]],
            "threshold": float(self.threshold[i]),
            "left": self.to_dict(int(self.left[i]), names),
            "right": self.to_dict(int(self.right[i]), names),
        }

    @classmethod
    def from_dict(cls, record, names=FEATURE_NAMES, **params):
        tree = cls(**params)
        index = {name: k for k, name in enumerate(names)}
        stack = [(tree._new_node(), record)]
        while stack:
            node, rec = stack.pop()
            if "leaf" in rec:
                tree.value[node] = int(rec["leaf"])
                continue
            left, right = tree._new_node(), tree._new_node()
            tree.feature[node] = index[rec["feature"]]
            tree.threshold[node] = float(rec["threshold"])
            tree.left[node], tree.right[node] = left, right
            stack.append((right, rec["right"]))
            stack.append((left, rec["left"]))
        tree._freeze()
        return tree


class ClassifierModel:
    """Bagged decision trees; confidence is the share of trees voting positive."""

    def __init__(self, tree_count=50, max_depth=8, min_leaf=5, max_features=None, seed=0,
                 feature_names=FEATURE_NAMES):
        self.tree_count = tree_count
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.seed = seed
        self.feature_names = tuple(feature_names)
        self.trees = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        if len(np.unique(y)) < 2:
            raise ValueError("training data must contain both classes")
        self.trees = []
        for child in np.random.SeedSequence(self.seed).spawn(self.tree_count):
            rng = np.random.default_rng(child)
            idx = rng.integers(0, len(y), size=len(y))
            tree = DecisionTree(self.max_depth, self.min_leaf, self.max_features)
            self.trees.append(tree.fit(X[idx], y[idx], rng))
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=float)
        if not self.trees:
            raise RuntimeError("model is not trained")
        votes = np.zeros(len(X), dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict(X)
        return votes / len(self.trees)

    def predict(self, X):
        return (self.predict_proba(X) > 0.5).astype(np.int64)

    # -- persistence ------------------------------------------------------

    def to_dict(self):
        return {
            "format": "botlab-forest/1",
            "feature_order": list(self.feature_names),
            "tree_count": self.tree_count,
            "params": {"max_depth": self.max_depth, "min_leaf": self.min_leaf,
                       "max_features": self.max_features},
            "seed": self.seed,
            "trees": [t.to_dict(names=self.feature_names) for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != "botlab-forest/1":
            raise ValueError(f"unsupported model format {d.get('format')!r}")
        p = d["params"]
        names = tuple(d["feature_order"])
        model = cls(d["tree_count"], p["max_depth"], p["min_leaf"], p["max_features"], d["seed"], names)
        model.trees = [DecisionTree.from_dict(t, names, max_depth=p["max_depth"], min_leaf=p["min_leaf"])
                       for t in d["trees"]]
        return model

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
