from typing import List, Sequence

import numpy as np

from driftbench.datasets.corpus import day_to_date
from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import WindowError
from driftbench.splits.batches import Batch
from driftbench.splits.monthly import MonthlySplit
from driftbench.splits.windows import WindowPlan, window_rows
from driftbench.utils import BunchDict


def row_key(dataset: SparseDataset, i: int):
    return int(dataset.timestamps[i]), dataset.sha256[i]


def check_no_leakage(dataset: SparseDataset, train_ids: np.ndarray,
                     test_ids: np.ndarray):
    """Raise if any training row does not precede every test row
    in ``(timestamp, sha256)`` order."""
    if len(train_ids) == 0 or len(test_ids) == 0:
        return
    last_train = max(row_key(dataset, i) for i in train_ids)
    first_test = min(row_key(dataset, i) for i in test_ids)
    if not last_train < first_test:
        raise WindowError(f"temporal leakage: training row {last_train} "
                          f"does not precede test row {first_test}.")


def batches_to_dict(dataset: SparseDataset,
                    batches: Sequence[Batch]) -> List[BunchDict]:
    out = []
    for b in batches:
        entry = BunchDict(ordinal=b.ordinal, n_mal=b.n_mal, n_ben=b.n_ben,
                          n_skipped=b.n_skipped, short=b.short)
        if len(b):
            first, last = int(b.row_ids[0]), int(b.row_ids[-1])
            entry.update(first_sha256=dataset.sha256[first],
                         first_seen=day_to_date(dataset.timestamps[first]),
                         last_sha256=dataset.sha256[last],
                         last_seen=day_to_date(dataset.timestamps[last]))
        out.append(entry)
    return out


def plan_to_dict(dataset: SparseDataset, batches: Sequence[Batch],
                 plan: WindowPlan) -> BunchDict:
    """Auditable description of a window plan without row data."""
    windows = []
    for w in plan.windows:
        train, val, test = window_rows(batches, w)
        windows.append(
            BunchDict(index=w.index, train_batches=list(w.train),
                      val_batch=w.val, test_batch=w.test,
                      n_train=int(train.size), n_val=int(val.size),
                      n_test=int(test.size)))
    return BunchDict(n_train_batches=plan.n_train,
                     batches=batches_to_dict(dataset, batches),
                     windows=windows)


def monthly_to_dict(split: MonthlySplit) -> BunchDict:
    return BunchDict(initial_train=int(split.initial_train.size),
                     months=[
                         BunchDict(month=m.tag, n_apps=int(m.row_ids.size))
                         for m in split.months
                     ])
