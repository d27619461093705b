"""Link recommendation: pair features, bagged trees, evaluation and top-1 suggestions."""

from .features import FEATURE_NAMES, FeatureExtractor, FeatureVector, cosine, extract_features
from .forest import ClassifierModel, DecisionTree
from .training import (
    LabeledPair,
    auc,
    build_training_set,
    chi_squared_rank,
    evaluate_auc,
    forest_builder,
    pairs_to_arrays,
    recommend,
    score_candidates,
    stratified_folds,
    train,
)

__all__ = [
    "FEATURE_NAMES", "FeatureExtractor", "FeatureVector", "cosine", "extract_features",
    "ClassifierModel", "DecisionTree", "LabeledPair", "auc", "build_training_set",
    "chi_squared_rank", "evaluate_auc", "forest_builder", "pairs_to_arrays", "recommend",
    "score_candidates", "stratified_folds", "train",
]
