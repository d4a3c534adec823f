from typing import Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import TuningError
from driftbench.metrics import f1_score
from driftbench.models import Classifier, Hyperparams, fit, get_model
from driftbench.utils import BunchDict, get_logger

logger = get_logger(__name__)

DEFAULT_GRIDS = {
    'nb': [dict(alpha=1.0)],
    'knn': [dict(k=k) for k in range(3, 16, 2)],
    'svm': [dict(C=C) for C in (0.001, 0.1, 1.0, 10.0)],
    'rf': [dict(n_trees=n) for n in (100, 200, 300)],
    'gbdt': [dict(iterations=1000, learning_rate=0.1, depth=10,
                  l2_leaf_reg=5.0)],
    'mlp': [dict(lr=lr) for lr in (1e-3, 1e-2)],
}


class Grid(NamedTuple):
    """Candidate hyperparameters of one family, in search order."""
    family: str
    candidates: Tuple[Hyperparams, ...]

    def __len__(self) -> int:
        return len(self.candidates)


def make_grid(family: str, candidates: Iterable[dict]) -> Grid:
    """Build a :class:`Grid`, filling every candidate with the
    family defaults.

    Example
    -------
    >>> grid = make_grid('svm', [dict(C=0.1), dict(C=1.0)])
    >>> [hp.C for hp in grid.candidates]
    [0.1, 1.0]
    """
    cls = get_model(family)
    filled = []
    for values in candidates:
        values = dict(values)
        if values.pop('family', family) != family:
            raise TuningError(f"a {family} grid holds a candidate of "
                              "another family.")
        filled.append(cls(values).hparams)
    if not filled:
        raise TuningError(f"the {family} grid is empty.")
    return Grid(family, tuple(filled))


def default_grid(family: str) -> Grid:
    """The default grid of a family: C in {0.001, 0.1, 1, 10} for
    ``svm``, odd k in [3, 15] for ``knn``, 100/200/300 trees for
    ``rf``, the single 1000-iteration configuration for ``gbdt``,
    ``alpha=1`` for ``nb`` and learning rates {1e-3, 1e-2} for ``mlp``.
    """
    if family not in DEFAULT_GRIDS:
        raise TuningError(f"no default grid for family '{family}'.")
    return make_grid(family, DEFAULT_GRIDS[family])


class SearchResult(NamedTuple):
    best: Classifier
    best_index: int
    table: List[BunchDict]

    @property
    def best_f1(self) -> float:
        return self.table[self.best_index].val_f1


def grid_search(grid: Grid, train: SparseDataset, val: SparseDataset,
                seed: int = 0, threshold: float = 0.5, n_jobs: int = 1,
                verbose: int = 0) -> SearchResult:
    """Fit every candidate on :obj:`train` and keep the one with the
    best malware-class F1 on :obj:`val`.

    Parameters
    ----------
    grid : Grid
        candidates in search order
    train : SparseDataset
        training rows
    val : SparseDataset
        validation rows, with at least one malware app
    seed : int, optional
        master seed of every candidate, by default 0
    threshold : float, optional
        decision threshold of the F1, by default 0.5
    n_jobs : int, optional
        candidates fitted concurrently, by default 1

    Returns
    -------
    SearchResult
        the best model, its grid position (ties go to the earliest
        candidate) and the score table in grid order

    Example
    -------
    >>> result = grid_search(default_grid('svm'), train, val, seed=42)
    >>> result.best.hparams.C, result.best_f1
    """
    if len(train) == 0 or len(val) == 0:
        raise TuningError("training and validation sets must be non-empty.")
    if val.num_malware == 0:
        raise TuningError("validation set holds no malware; F1 is "
                          "undefined.")

    model_jobs = n_jobs if len(grid) == 1 else 1

    def run(hp: Hyperparams) -> Tuple[Classifier, float]:
        model = fit(hp, train, seed=seed, n_jobs=model_jobs, verbose=verbose)
        return model, f1_score(val.labels, model.predict(val, threshold))

    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(run)(hp) for hp in grid.candidates)

    table = [
        BunchDict(index=i, family=grid.family, hparams=hp.tag(), val_f1=f1)
        for i, (hp, (_, f1)) in enumerate(zip(grid.candidates, results))
    ]
    scores = np.array([f1 for _, f1 in results])
    best = int(np.argmax(scores))
    logger.info(f"Grid search over {len(grid)} {grid.family} candidate(s): "
                f"best {grid.candidates[best].tag()} with validation "
                f"F1={scores[best]:.4f}.")
    return SearchResult(results[best][0], best, table)


def split_validation(dataset: SparseDataset, ids: np.ndarray,
                     fraction: float = 0.2
                     ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Hold out the latest :obj:`fraction` of the time-ordered
    :obj:`ids` for validation; ``None`` when the held-out part has no
    malware or the rest lacks a class."""
    ids = np.sort(np.asarray(ids))
    n_val = int(np.ceil(fraction * ids.size))
    if n_val < 1 or n_val >= ids.size:
        return None
    fit_ids, val_ids = ids[:-n_val], ids[-n_val:]
    if dataset.labels[val_ids].sum() == 0 or \
            np.unique(dataset.labels[fit_ids]).size < 2:
        return None
    return fit_ids, val_ids
