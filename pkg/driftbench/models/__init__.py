from .base import (FAMILIES, MODEL_HEADER, Classifier, Hyperparams,
                   check_threshold, uncertainty)
from .forest import RandomForest
from .gbdt import GBDT
from .get_model import MODELS, fit, get_model, load_model, predict, score
from .knn import KNN
from .mlp import MLP, BinaryMLPModule
from .naive_bayes import NaiveBayes
from .svm import SVM
from .tree import TreeArrays, apply_tree, grow_tree

classes = __all__ = [
    "Classifier",
    "Hyperparams",
    "NaiveBayes",
    "KNN",
    "SVM",
    "RandomForest",
    "GBDT",
    "MLP",
    "BinaryMLPModule",
    "TreeArrays",
    "grow_tree",
    "apply_tree",
    "get_model",
    "fit",
    "score",
    "predict",
    "uncertainty",
    "check_threshold",
    "load_model",
    "MODELS",
    "FAMILIES",
    "MODEL_HEADER",
]
