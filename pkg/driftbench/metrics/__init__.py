from .classification import (METRICS, aggregate, compute_metrics, evaluate,
                             f1_score)
from .confusion import ConfusionMatrix, confusion

classes = __all__ = [
    "ConfusionMatrix",
    "confusion",
    "compute_metrics",
    "evaluate",
    "f1_score",
    "aggregate",
    "METRICS",
]
