from typing import Optional, Sequence

import numpy as np

from driftbench.errors import MetricError
from driftbench.metrics.confusion import ConfusionMatrix, confusion
from driftbench.utils import BunchDict

METRICS = ("precision", "recall", "f1", "accuracy", "fnr", "fpr")


def ratio(num: int, den: int):
    """``num / den``, or ``(0.0, True)`` flagged undefined when
    ``den == 0``."""
    if den == 0:
        return 0.0, True
    return num / den, False


def percent(value: float) -> str:
    return f"{100.0 * value:.2f}"


def compute_metrics(cm: ConfusionMatrix) -> BunchDict:
    """Derive the malware-class metrics from a confusion matrix.

    Any ratio with a zero denominator is reported as 0 and its
    name is listed in ``undefined``.

    Parameters
    ----------
    cm : ConfusionMatrix
        the confusion matrix

    Returns
    -------
    BunchDict
        ``precision, recall, f1, accuracy, fnr, fpr`` as fractions,
        the same keys suffixed ``_pct`` as percent strings, the
        confusion counts and the ``undefined`` list

    Example
    -------
    >>> m = compute_metrics(ConfusionMatrix(tp=95, fn=5, fp=3, tn=97))
    >>> round(m.precision, 4), m.recall, round(m.f1, 4)
    (0.9694, 0.95, 0.9596)
    >>> m.f1_pct
    '95.96'
    """
    tp, fn, fp, tn = cm
    if min(cm) < 0:
        raise MetricError(f"negative count in {cm}.")
    if cm.total == 0:
        raise MetricError("empty confusion matrix.")

    values = {}
    values['precision'], bad_p = ratio(tp, tp + fp)
    values['recall'], bad_r = ratio(tp, tp + fn)
    p, r = values['precision'], values['recall']
    values['f1'], bad_f1 = ratio(2 * p * r, p + r)
    values['accuracy'], _ = ratio(tp + tn, cm.total)
    values['fnr'], bad_fnr = ratio(fn, tp + fn)
    values['fpr'], bad_fpr = ratio(fp, fp + tn)
    flags = dict(precision=bad_p, recall=bad_r, f1=bad_f1 or bad_p or bad_r,
                 fnr=bad_fnr, fpr=bad_fpr)
    undefined = [name for name in METRICS if flags.get(name, False)]

    record = BunchDict(values)
    record.update({f"{name}_pct": percent(values[name]) for name in METRICS})
    record.update(cm.to_dict())
    record.undefined = undefined
    return record


def evaluate(actual: np.ndarray, predicted: np.ndarray) -> BunchDict:
    """:func:`compute_metrics` of :func:`confusion`."""
    return compute_metrics(confusion(actual, predicted))


def f1_score(actual: np.ndarray, predicted: np.ndarray) -> float:
    return evaluate(actual, predicted).f1


def aggregate(records: Sequence[dict],
              weights: Optional[Sequence[float]] = None) -> BunchDict:
    """Average per-period metric records, in percent with 2 decimals.

    Parameters
    ----------
    records : Sequence[dict]
        per-period records from :func:`compute_metrics`
    weights : Optional[Sequence[float]], optional
        per-period weights (e.g., period sizes); uniform when
        :obj:`None`, by default None

    Example
    -------
    >>> aggregate([dict(f1=0.8), dict(f1=0.9)]).f1
    85.0
    """
    if len(records) == 0:
        raise MetricError("cannot aggregate zero periods.")
    if weights is None:
        weights = np.ones(len(records))
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(records), ) or weights.sum() <= 0 \
            or (weights < 0).any():
        raise MetricError("weights must be non-negative, one per period, "
                          "with a positive sum.")

    out = BunchDict()
    for name in METRICS:
        if not all(name in r for r in records):
            continue
        values = np.array([r[name] for r in records], dtype=np.float64)
        mean = float(np.dot(weights, values) / weights.sum())
        out[name] = round(100.0 * mean, 2)
    out.n_periods = len(records)
    return out
