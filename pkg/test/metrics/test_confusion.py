import pytest

from driftbench.errors import MetricError
from driftbench.metrics import ConfusionMatrix, confusion


def test_confusion_counts():
    cm = confusion([1, 1, 1, 0, 0, 0, 0], [1, 1, 0, 1, 0, 0, 0])
    assert cm == ConfusionMatrix(tp=2, fn=1, fp=1, tn=3)
    assert (cm.positives, cm.negatives, cm.total) == (3, 4, 7)


def test_single_class_and_empty_inputs():
    assert confusion([0, 0], [0, 0]) == ConfusionMatrix(0, 0, 0, 2)
    assert confusion([], []) == ConfusionMatrix(0, 0, 0, 0)


def test_scale():
    assert ConfusionMatrix(1, 2, 3, 4).scale(3) == (3, 6, 9, 12)


@pytest.mark.parametrize('actual, predicted', [
    ([0, 1], [0]),
    ([0, 2], [0, 1]),
    ([0, 1], [0.5, 1]),
])
def test_bad_inputs(actual, predicted):
    with pytest.raises(MetricError):
        confusion(actual, predicted)
