from typing import NamedTuple, Tuple

import numpy as np

from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import WindowError


class Month(NamedTuple):
    tag: str
    row_ids: np.ndarray


class MonthlySplit(NamedTuple):
    """An initial training period followed by calendar test months."""
    initial_train: np.ndarray
    months: Tuple[Month, ...]


def month_index(timestamps: np.ndarray) -> np.ndarray:
    """Months since 1970-01 of day numbers (proleptic Gregorian)."""
    days = np.asarray(timestamps, dtype=np.int64).astype('datetime64[D]')
    return days.astype('datetime64[M]').astype(np.int64)


def month_tag(month: int) -> str:
    return str(np.datetime64(int(month), 'M'))


def plan_monthly(dataset: SparseDataset,
                 initial_span: int = 12) -> MonthlySplit:
    """Split a dataset into the first :obj:`initial_span` calendar
    months (training) and every later month holding at least one
    app (testing), in time order.

    Example
    -------
    >>> split = plan_monthly(dataset, initial_span=12)
    >>> [m.tag for m in split.months][:2]
    ['2013-01', '2013-02']
    """
    if len(dataset) == 0:
        raise WindowError("cannot plan months on an empty dataset.")
    if initial_span < 1:
        raise WindowError(f"initial_span must be >= 1, got {initial_span}.")

    months = month_index(dataset.timestamps)
    cutoff = months.min() + initial_span
    initial = np.flatnonzero(months < cutoff)
    tests = tuple(
        Month(month_tag(m), np.flatnonzero(months == m))
        for m in np.unique(months[months >= cutoff]))
    if not tests:
        raise WindowError(f"all rows fall inside the first {initial_span} "
                          "month(s); nothing to test.")
    return MonthlySplit(initial_train=initial, months=tests)
