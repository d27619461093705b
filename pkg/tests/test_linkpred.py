import logging

import numpy as np
import pytest

from botlab.graph import SocialGraph
from botlab.linkpred import (
    ClassifierModel,
    FeatureExtractor,
    auc,
    build_training_set,
    chi_squared_rank,
    evaluate_auc,
    extract_features,
    recommend,
    stratified_folds,
)
from botlab.corpus import Profiles
from conftest import graph_from, profiles_from


class FixedModel:
    def __init__(self, table):
        self.table = table

    def predict_proba(self, X):
        # confidence keyed on common_neighbors
        return np.array([self.table.get(int(x[0]), 0.0) for x in X])


def test_common_neighbors_and_overlap():
    u, v, a, b, c, d = range(6)
    g = graph_from([(u, a), (u, b), (u, c), (b, v), (c, v), (d, v)])
    f = extract_features(g, Profiles(), u, v)
    assert f.common_neighbors == 2
    assert f.triangle_overlap == pytest.approx(2 / 3)


def test_resource_allocation_two_intermediaries():
    g = graph_from([(0, 1), (0, 2), (1, 3), (2, 3)])
    assert extract_features(g, Profiles(), 0, 3).resource_allocation == 1.0


def test_zero_outdegree_and_no_groups():
    g = SocialGraph([0, 1])
    f = extract_features(g, Profiles(), 0, 1)
    assert f.triangle_overlap == 0 and f.resource_allocation == 0 and f.common_group_size == 0


def test_library_cosine_extremes():
    g = SocialGraph([0, 1, 2])
    profiles = profiles_from({0: ({1, 2, 3}, ()), 1: ({1, 2, 3}, ()), 2: ({7}, ())})
    fx = FeatureExtractor(g, profiles)
    assert fx.features(0, 1).sim_library == 1.0
    assert fx.features(0, 2).sim_library == 0.0


def test_smallest_common_group():
    g = SocialGraph([0, 1, 2, 3])
    profiles = profiles_from({0: ((), {1, 2}), 1: ((), {1, 2}), 2: ((), {1}), 3: ((), {1})})
    assert FeatureExtractor(g, profiles).features(0, 1).common_group_size == 2


def test_reciprocation_feature():
    g = graph_from([(1, 0)])
    assert extract_features(g, Profiles(), 0, 1).reciprocation == 1
    assert extract_features(g, Profiles(), 1, 0).reciprocation == 0


def test_training_positive_from_path():
    g0 = graph_from([(1, 2), (2, 3), (2, 4)])
    g1 = g0.copy()
    g1.add_social_arc(1, 3)
    pairs = build_training_set(g0, g1, Profiles(), 2, seed=0)
    assert [(p.u, p.v) for p in pairs if not p.label] == [(1, 4)]
    assert [(p.u, p.v, p.label) for p in pairs if p.label] == [(1, 3, 1)]


def test_training_set_is_balanced():
    rng = np.random.default_rng(0)
    n = 60
    g0 = SocialGraph(range(n))
    for u in range(n):
        for v in rng.choice(n, 4, replace=False).tolist():
            if v != u:
                g0.add_social_arc(u, v)
    g1 = g0.copy()
    added = 0
    for u in range(n):
        for w in sorted(g0.distance2_out_candidates(u))[:3]:
            g1.add_social_arc(u, w)
            added += 1
    pairs = build_training_set(g0, g1, Profiles(), 40, seed=1)
    labels = [p.label for p in pairs]
    assert labels.count(1) == 20 and labels.count(0) == 20
    for p in pairs:
        assert not g0.has_arc(p.u, p.v)
        assert p.v in g0.distance2_out_candidates(p.u)
        assert g1.has_arc(p.u, p.v) == bool(p.label)


def test_identical_snapshots_warn(caplog):
    g = graph_from([(1, 2), (2, 3)])
    with caplog.at_level(logging.WARNING):
        pairs = build_training_set(g, g.copy(), Profiles(), 10, seed=0)
    assert pairs == []
    assert "degenerate" in caplog.text


def test_separable_training_accuracy():
    rng = np.random.default_rng(3)
    X = rng.random((200, 8))
    y = np.array([1] * 100 + [0] * 100)
    X[:100, 0] = rng.integers(2, 6, 100)
    X[100:, 0] = 0
    model = ClassifierModel(10, seed=1).fit(X, y)
    assert (model.predict(X) == y).all()


def test_single_class_rejected():
    with pytest.raises(ValueError):
        ClassifierModel(5).fit(np.zeros((4, 8)), np.ones(4, dtype=int))


def test_model_deterministic_and_roundtrip(tmp_path):
    rng = np.random.default_rng(4)
    X = rng.random((300, 8))
    y = (X[:, 1] + 0.3 * rng.random(300) > 0.6).astype(int)
    a = ClassifierModel(15, seed=9).fit(X, y)
    b = ClassifierModel(15, seed=9).fit(X, y)
    assert a.to_dict() == b.to_dict()
    assert np.array_equal(a.predict_proba(X), b.predict_proba(X))
    a.save(tmp_path / "m.json")
    c = ClassifierModel.load(tmp_path / "m.json")
    assert np.array_equal(c.predict_proba(X), a.predict_proba(X))


def test_auc_extremes():
    y = np.array([0, 0, 1, 1])
    assert auc(np.array([0.1, 0.2, 0.8, 0.9]), y) == 1.0
    assert auc(np.array([0.9, 0.8, 0.2, 0.1]), y) == 0.0
    rng = np.random.default_rng(0)
    labels = rng.integers(0, 2, 20000)
    assert abs(auc(rng.random(20000), labels) - 0.5) < 0.05


def test_fold_without_both_classes():
    X = np.zeros((4, 8))
    y = np.array([1, 0, 0, 0])
    with pytest.raises(ValueError):
        evaluate_auc(lambda X, y: None, (X, y), folds=3)


def test_stratified_folds_balance():
    y = np.array([1] * 30 + [0] * 70)
    folds = stratified_folds(y, 10, seed=0)
    for k in range(10):
        assert (y[folds == k] == 1).sum() == 3


def test_chi_squared_ranking():
    rng = np.random.default_rng(1)
    y = rng.integers(0, 2, 1000)
    X = np.zeros((1000, 8))
    X[:, 0] = rng.random(1000)  # noise
    X[:, 1] = y  # label copy
    X[:, 2] = y + rng.normal(0, 0.5, 1000)  # correlated
    ranked = chi_squared_rank((X, y))
    names = [name for name, _ in ranked]
    assert names[0] == "triangle_overlap"
    assert names.index("resource_allocation") < names.index("common_neighbors")
    assert dict(ranked)["reciprocation"] == 0.0
    assert ranked[-1][1] == 0.0


def test_recommend_rules():
    lone = SocialGraph([0, 1])
    assert recommend(FixedModel({}), lone, Profiles(), 0) is None
    g = graph_from([(0, 1), (1, 2)])
    assert recommend(FixedModel({1: 0.9}), g, Profiles(), 0) == (2, 0.9)
    g = graph_from([(0, 1), (1, 2), (1, 3)])
    assert recommend(FixedModel({1: 0.7}), g, Profiles(), 0) == (2, 0.7)


def test_recommend_threshold():
    g = graph_from([(0, 1), (1, 2)])
    assert recommend(FixedModel({1: 0.5}), g, Profiles(), 0) is None
