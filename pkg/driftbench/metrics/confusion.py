from typing import NamedTuple

import numpy as np
from sklearn.metrics import confusion_matrix

from driftbench.errors import MetricError
from driftbench.utils import BunchDict


class ConfusionMatrix(NamedTuple):
    """Binary confusion matrix with malware (label 1) as the
    positive class."""
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def total(self) -> int:
        return self.positives + self.negatives

    def scale(self, factor: int) -> "ConfusionMatrix":
        return ConfusionMatrix(*(int(v) * factor for v in self))

    def to_dict(self) -> BunchDict:
        return BunchDict(tp=self.tp, fn=self.fn, fp=self.fp, tn=self.tn,
                         positives=self.positives, negatives=self.negatives)


def check_labels(labels: np.ndarray, name: str) -> np.ndarray:
    labels = np.asarray(labels).ravel()
    if labels.size and not np.isin(labels, (0, 1)).all():
        raise MetricError(f"{name} labels must be 0 or 1.")
    return labels.astype(np.int64)


def confusion(actual: np.ndarray, predicted: np.ndarray) -> ConfusionMatrix:
    """Tally predictions against ground truth.

    Parameters
    ----------
    actual : np.ndarray
        true labels in {0, 1}
    predicted : np.ndarray
        predicted labels in {0, 1}

    Returns
    -------
    ConfusionMatrix
        the ``(tp, fn, fp, tn)`` counts

    Example
    -------
    >>> confusion([1, 1, 0, 0], [1, 0, 1, 0])
    ConfusionMatrix(tp=1, fn=1, fp=1, tn=1)
    """
    actual = check_labels(actual, "actual")
    predicted = check_labels(predicted, "predicted")
    if actual.shape != predicted.shape:
        raise MetricError(f"length mismatch: {actual.size} actual vs "
                          f"{predicted.size} predicted labels.")
    if actual.size == 0:
        return ConfusionMatrix(0, 0, 0, 0)
    (tn, fp), (fn, tp) = confusion_matrix(actual, predicted, labels=[0, 1])
    return ConfusionMatrix(int(tp), int(fn), int(fp), int(tn))
