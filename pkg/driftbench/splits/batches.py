from typing import List, NamedTuple

import numpy as np

from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import WindowError
from driftbench.utils import get_logger

logger = get_logger(__name__)


class Batch(NamedTuple):
    """A fixed-composition block of consecutive apps.

    ``short`` flags a trailing batch that missed its quota in
    either class; ``n_skipped`` counts rows of a class whose quota
    was already full while the batch was open.
    """
    ordinal: int
    row_ids: np.ndarray
    n_mal: int
    n_ben: int
    n_skipped: int = 0
    short: bool = False

    def __len__(self) -> int:
        return int(self.row_ids.size)


def check_sorted(dataset: SparseDataset):
    ts = dataset.timestamps
    if ts.size > 1 and np.any(np.diff(ts) < 0):
        raise WindowError("dataset rows are not in temporal order.")
    for i in np.flatnonzero(np.diff(ts) == 0):
        if dataset.sha256[i] > dataset.sha256[i + 1]:
            raise WindowError(f"rows {i} and {i + 1} break the sha256 "
                              "tie order.")


def make_batches(dataset: SparseDataset, batch_size: int = 5000,
                 mal_per_batch: int = 300) -> List[Batch]:
    """Partition a temporally sorted dataset into batches of
    :obj:`batch_size` apps holding :obj:`mal_per_batch` malware.

    A single scan in time order fills the open batch: a row joins
    it while its class quota has room and is skipped otherwise; the
    batch closes when both quotas are met. Every batch is thus a
    contiguous time interval. Rows left when the scan ends form a
    trailing batch flagged ``short``.

    A skipped row is dropped, not deferred to the next batch, so a run
    of same-class rows longer than the quota loses data: 10 apps with
    2 malware, ``B=5`` and ``m=1`` give two full batches when the
    malware apps are apart, but one full and one short batch (and
    one dropped malware app) when they are adjacent. The total number
    of dropped rows is logged as a warning.

    Parameters
    ----------
    dataset : SparseDataset
        rows sorted by ``(timestamp, sha256)``
    batch_size : int, optional
        apps per batch, by default 5000
    mal_per_batch : int, optional
        malware apps per batch, by default 300

    Returns
    -------
    List[Batch]
        batches ordered by time

    Example
    -------
    >>> batches = make_batches(dataset, 5000, 300)
    >>> batches[0].n_mal, batches[0].n_ben
    (300, 4700)
    """
    if batch_size <= 0:
        raise WindowError(f"batch_size must be positive, got {batch_size}.")
    if not 0 <= mal_per_batch <= batch_size:
        raise WindowError(f"mal_per_batch must lie in [0, {batch_size}], "
                          f"got {mal_per_batch}.")
    check_sorted(dataset)

    quota = (batch_size - mal_per_batch, mal_per_batch)
    batches: List[Batch] = []
    current: List[int] = []
    counts = [0, 0]
    skipped = 0

    def emit(short: bool):
        batches.append(
            Batch(ordinal=len(batches),
                  row_ids=np.asarray(current, dtype=np.int64),
                  n_mal=counts[1], n_ben=counts[0], n_skipped=skipped,
                  short=short))

    for i, label in enumerate(dataset.labels.tolist()):
        if counts[label] < quota[label]:
            current.append(i)
            counts[label] += 1
        else:
            skipped += 1
        if counts[0] == quota[0] and counts[1] == quota[1]:
            emit(short=False)
            current, counts, skipped = [], [0, 0], 0

    if current:
        emit(short=True)
        logger.warning(f"Trailing batch {len(batches) - 1} is short: "
                       f"{counts[1]}/{quota[1]} malware, "
                       f"{counts[0]}/{quota[0]} benign.")
    dropped = sum(b.n_skipped for b in batches) + (0 if current else skipped)
    if dropped:
        logger.warning(f"{dropped} row(s) skipped because their class "
                       "quota was full; they belong to no batch.")
    logger.info(f"Built {len(batches)} batches of {batch_size} apps "
                f"({mal_per_batch} malware).")
    return batches
