"""Random-forest label ranker with a compiled split kernel and numpy fallback."""

from ._kernel import BACKEND
from .core import (
    ForestConfig,
    ForestModel,
    RankedPrediction,
    Tree,
    load_feature_csv,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_proba,
    rank_labels,
    save_model,
    train,
)

__all__ = [
    "BACKEND",
    "ForestConfig",
    "ForestModel",
    "RankedPrediction",
    "Tree",
    "load_feature_csv",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "predict_proba",
    "rank_labels",
    "save_model",
    "train",
]
