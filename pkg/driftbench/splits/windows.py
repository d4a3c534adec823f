from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from driftbench.errors import WindowError
from driftbench.splits.batches import Batch


class Window(NamedTuple):
    index: int
    train: Tuple[int, ...]
    val: int
    test: int

    @property
    def batches(self) -> Tuple[int, ...]:
        return self.train + (self.val, self.test)


class WindowPlan(NamedTuple):
    """Sliding windows of ``k`` training, one validation and one
    test batch, advanced by one batch per window."""
    n_train: int
    windows: Tuple[Window, ...]

    @property
    def size(self) -> int:
        return self.n_train + 2

    def __len__(self) -> int:
        return len(self.windows)


def plan_windows(batches: Union[int, Sequence[Batch]],
                 n_train: int = 4) -> WindowPlan:
    """Plan the sliding windows over :obj:`batches`.

    Parameters
    ----------
    batches : Union[int, Sequence[Batch]]
        the batches, or just their number
    n_train : int, optional
        training batches per window, by default 4

    Returns
    -------
    WindowPlan
        ``#batches - (n_train + 2) + 1`` windows ordered by
        their leading batch

    Example
    -------
    >>> plan = plan_windows(27, n_train=4)
    >>> len(plan)
    22
    >>> plan.windows[0]
    Window(index=0, train=(0, 1, 2, 3), val=4, test=5)
    """
    num_batches = batches if isinstance(batches, int) else len(batches)
    if n_train < 1:
        raise WindowError(f"n_train must be >= 1, got {n_train}.")
    size = n_train + 2
    if num_batches < size:
        raise WindowError(f"{size}-batch windows need at least {size} "
                          f"batches, got {num_batches}.")
    windows = tuple(
        Window(index=i, train=tuple(range(i, i + n_train)), val=i + n_train,
               test=i + n_train + 1) for i in range(num_batches - size + 1))
    return WindowPlan(n_train=n_train, windows=windows)


def window_rows(batches: Sequence[Batch], window: Window
                ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row ids of the training, validation and test part of a window."""
    train = np.concatenate([batches[b].row_ids for b in window.train])
    return train, batches[window.val].row_ids, batches[window.test].row_ids
