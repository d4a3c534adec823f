import itertools
from collections import namedtuple
from numbers import Number
from typing import Any, Optional

import numpy as np

topk_values_indices = namedtuple('topk_values_indices', ['values', 'indices'])


def topk(array: np.ndarray, k: int,
         largest: bool = True) -> topk_values_indices:
    """Returns the k largest/smallest elements and corresponding indices
    from a 1-D array-like input. Equal values are ordered by their
    position, so the selection is deterministic.

    Parameters
    ----------
    array : np.ndarray or list
        the array-like input
    k : int
        the k in "top-k", clipped to the array length
    largest : bool, optional
        controls whether to return largest or smallest elements

    Returns
    -------
    namedtuple[values, indices]
        Returns the :attr:`k` largest/smallest elements and corresponding
        indices of the given :attr:`array`

    Example
    -------
    >>> array = [5, 3, 7, 3, 1]
    >>> topk(array, 2)
    topk_values_indices(values=array([7, 5]), indices=array([2, 0]))

    >>> topk(array, 2, largest=False)
    topk_values_indices(values=array([1, 3]), indices=array([4, 1]))
    """
    array = np.asarray(array).ravel()
    k = max(0, min(int(k), array.size))
    position = np.arange(array.size)
    keys = -array if largest else array
    # lexsort: last key is primary
    order = np.lexsort((position, keys))[:k]
    return topk_values_indices(values=array[order], indices=order)


def repeat(src: Any, length: Optional[int] = None) -> list:
    """Broadcast a scalar or a per-layer list to :obj:`length` entries.

    Lists longer than :obj:`length` are cut, shorter ones are padded
    with their last entry. Without :obj:`length` a list keeps its own
    length and a scalar becomes a one-element list.

    Example
    -------
    >>> repeat('relu', 2)
    ['relu', 'relu']
    >>> repeat([256, 64], 3)
    [256, 64, 64]
    >>> repeat(128)
    [128]
    """
    if isinstance(src, (Number, str)) or src is None:
        return list(itertools.repeat(src, 1 if length is None else length))
    src = list(src)
    if length is None or not src:
        return src
    return src[:length] + [src[-1]] * max(0, length - len(src))
