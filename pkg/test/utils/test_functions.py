import numpy as np

from driftbench.utils import repeat, topk


def test_topk_breaks_ties_by_position():
    values, indices = topk([0.5, 0.9, 0.5, 0.9, 0.1], 3)
    np.testing.assert_array_equal(indices, [1, 3, 0])
    np.testing.assert_array_equal(values, [0.9, 0.9, 0.5])


def test_topk_smallest_and_clipping():
    assert topk([3, 1, 2], 2, largest=False).indices.tolist() == [1, 2]
    assert topk([3, 1, 2], 10).indices.tolist() == [0, 2, 1]
    assert topk([3, 1, 2], 0).indices.size == 0


def test_repeat():
    assert repeat('relu', 2) == ['relu', 'relu']
    assert repeat([256, 64], 3) == [256, 64, 64]
    assert repeat([], 2) == []
