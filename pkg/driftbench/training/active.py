from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import ActiveError, DriftBenchError
from driftbench.metrics import aggregate, evaluate
from driftbench.models import Classifier, Hyperparams, fit, uncertainty
from driftbench.splits import MonthlySplit
from driftbench.training.callbacks import Callback, CallbackList
from driftbench.training.tuning import (Grid, default_grid, grid_search,
                                        make_grid, split_validation)
from driftbench.utils import BunchDict, derive_seed, get_logger, topk

logger = get_logger(__name__)

WEIGHTINGS = ("uniform", "size")


@dataclass
class ActiveConfig:
    """Configuration of the monthly active-learning loop.

    Attributes
    ----------
    family : str
        the model family
    hparams : Optional[dict]
        fixed hyperparameters; when ``None`` they are chosen by grid
        search on the initial period (latest ``val_fraction`` of it
        held out for validation)
    grid : Optional[list]
        candidates of that search, the family default grid when ``None``
    budget : int
        labels revealed per month
    threshold : float
        decision threshold
    seed : int
        master seed; month ``m`` retrains with ``derive_seed(seed, m + 1)``
    weighting : str
        ``'uniform'`` averages months equally, ``'size'`` weights them
        by their number of apps
    retune : bool
        re-run the grid search at every retraining, validating on the
        latest revealed month when it holds malware
    """
    family: str = "svm"
    hparams: Optional[dict] = None
    grid: Optional[list] = None
    budget: int = 50
    threshold: float = 0.5
    seed: int = 0
    weighting: str = "uniform"
    retune: bool = False
    val_fraction: float = 0.2
    n_jobs: int = 1

    def __post_init__(self):
        if self.budget < 0:
            raise ActiveError(f"budget must be >= 0, got {self.budget}.")
        if self.weighting not in WEIGHTINGS:
            raise ActiveError(f"weighting must be one of {WEIGHTINGS}, "
                              f"got '{self.weighting}'.")
        if not 0.0 <= self.threshold <= 1.0:
            raise ActiveError(f"threshold must lie in [0, 1], "
                              f"got {self.threshold}.")

    def make_grid(self) -> Grid:
        if self.grid is None:
            return default_grid(self.family)
        return make_grid(self.family, self.grid)


@dataclass
class ActiveTrace:
    """Per-month records and averages of one loop run."""
    config: ActiveConfig
    hparams: Hyperparams
    months: List[BunchDict] = field(default_factory=list)
    averages: BunchDict = field(default_factory=BunchDict)
    static: bool = False

    @property
    def total_selected(self) -> int:
        return sum(len(m.selected) for m in self.months)

    def to_dict(self) -> BunchDict:
        config = asdict(self.config)
        config.pop('n_jobs')
        return BunchDict(config=config, hparams=self.hparams.to_dict(),
                         static=self.static, months=self.months,
                         averages=self.averages)


def select_uncertain(scores: np.ndarray, budget: int) -> np.ndarray:
    """Positions of the ``min(budget, n)`` most uncertain scores,
    equal uncertainties going to the lower position, sorted.

    Example
    -------
    >>> select_uncertain([0.9, 0.6, 0.45, 0.98], 2)
    array([1, 2])
    """
    if budget < 0:
        raise ActiveError(f"budget must be >= 0, got {budget}.")
    return np.sort(topk(uncertainty(scores), budget).indices)


def month_record(tag: str, month_ids: np.ndarray, metrics: BunchDict,
                 train_size: int, selected: np.ndarray,
                 retrained: bool) -> BunchDict:
    record = BunchDict(month=tag, n_apps=int(month_ids.size),
                       train_size=train_size, retrained=retrained,
                       selected=selected.tolist())
    record.update(metrics)
    return record


def summarize(months: List[BunchDict], weighting: str) -> BunchDict:
    weights = None
    if weighting == "size":
        weights = [m.n_apps for m in months]
    averages = aggregate(months, weights)
    out = BunchDict()
    for name in ("fnr", "fpr", "f1"):
        out[name] = averages[name]
        out[f"{name}_pct"] = f"{averages[name]:.2f}"
    return out


def initial_model(config: ActiveConfig, dataset: SparseDataset,
                  train_ids: np.ndarray) -> Classifier:
    seed = derive_seed(config.seed, 0)
    if np.unique(dataset.labels[train_ids]).size < 2:
        raise ActiveError("the initial training period must hold both "
                          "classes.")
    if config.hparams is not None:
        hp = dict(config.hparams, family=config.family)
        return fit(hp, dataset.subset(train_ids), seed=seed,
                   n_jobs=config.n_jobs)

    grid = config.make_grid()
    if len(grid) > 1:
        parts = split_validation(dataset, train_ids, config.val_fraction)
        if parts is None:
            raise ActiveError("cannot hold out a validation part with "
                              "malware from the initial period.")
        result = grid_search(grid, dataset.subset(parts[0]),
                             dataset.subset(parts[1]), seed=seed,
                             threshold=config.threshold,
                             n_jobs=config.n_jobs)
        hp = grid.candidates[result.best_index]
    else:
        hp = grid.candidates[0]
    return fit(hp, dataset.subset(train_ids), seed=seed, n_jobs=config.n_jobs)


def retune(config: ActiveConfig, dataset: SparseDataset,
           train_ids: np.ndarray, revealed: np.ndarray,
           current: Hyperparams, seed: int) -> Hyperparams:
    grid = config.make_grid()
    fit_ids = np.setdiff1d(train_ids, revealed)
    if len(grid) < 2 or dataset.labels[revealed].sum() == 0 or \
            np.unique(dataset.labels[fit_ids]).size < 2:
        return current
    result = grid_search(grid, dataset.subset(fit_ids),
                         dataset.subset(revealed), seed=seed,
                         threshold=config.threshold, n_jobs=config.n_jobs)
    return grid.candidates[result.best_index]


def run_active_loop(config: ActiveConfig, split: MonthlySplit,
                    dataset: SparseDataset,
                    callbacks: Optional[List[Callback]] = None,
                    verbose: int = 0) -> ActiveTrace:
    """Run the monthly uncertainty-sampling loop.

    Month ``m`` is scored and evaluated by the model trained on the
    initial period plus the rows revealed in earlier months. Then the
    ``budget`` most uncertain rows of the month have their labels
    revealed, and when the training set grew the model is retrained
    from scratch with the seed ``derive_seed(config.seed, m + 1)``.

    Parameters
    ----------
    config : ActiveConfig
        the loop configuration
    split : MonthlySplit
        initial period and test months
    dataset : SparseDataset
        the rows referenced by :obj:`split`
    callbacks : Optional[List[Callback]], optional
        loop callbacks; a :class:`LabelAudit` and a :class:`History`
        are always added, by default None
    verbose : int, optional
        show a progress bar over the months, by default 0

    Returns
    -------
    ActiveTrace
        the month records and their averages

    Example
    -------
    >>> split = plan_monthly(dataset, initial_span=12)
    >>> config = ActiveConfig('svm', hparams=dict(C=1.0), budget=50)
    >>> trace = run_active_loop(config, split, dataset)
    >>> trace.averages
    """
    callbacks = CallbackList(callbacks, add_history=True, add_progbar=True,
                             add_audit=True, budget=config.budget,
                             months=len(split.months), verbose=verbose)
    train_ids = np.sort(np.asarray(split.initial_train, dtype=np.int64))
    model = initial_model(config, dataset, train_ids)
    hparams = model.hparams
    trace = ActiveTrace(config, hparams)

    callbacks.on_loop_begin()
    for m, month in enumerate(split.months):
        logs = dict(train_ids=train_ids, month_ids=month.row_ids)
        callbacks.on_month_begin(m, logs)

        scores = model.score(dataset.X[month.row_ids])
        predicted = (scores >= config.threshold).astype(np.int8)
        metrics = evaluate(dataset.labels[month.row_ids], predicted)
        callbacks.on_month_scored(m, dict(logs, scores=scores,
                                          metrics=metrics))

        selected = month.row_ids[select_uncertain(scores, config.budget)]
        scored_size = int(train_ids.size)
        retrained = False
        if selected.size:
            train_ids = np.union1d(train_ids, selected)
            callbacks.on_reveal(m, dict(selected=selected))
            seed = derive_seed(config.seed, m + 1)
            if config.retune:
                hparams = retune(config, dataset, train_ids, selected,
                                 hparams, seed)
            try:
                model = fit(hparams, dataset.subset(train_ids), seed=seed,
                            n_jobs=config.n_jobs)
            except DriftBenchError as e:
                raise ActiveError(f"retraining after month {month.tag} "
                                  f"failed: {e}") from e
            retrained = True

        record = month_record(month.tag, month.row_ids, metrics, scored_size,
                              selected, retrained)
        trace.months.append(record)
        callbacks.on_month_end(m, record)
        logger.debug(f"{month.tag}: F1={metrics.f1:.4f}, "
                     f"{selected.size} label(s) revealed.")

    trace.hparams = hparams
    trace.averages = summarize(trace.months, config.weighting)
    callbacks.on_loop_end(dict(trace=trace))
    logger.info(f"Active loop ({config.family}, budget {config.budget}) "
                f"over {len(split.months)} month(s): F1={trace.averages.f1}%, "
                f"FNR={trace.averages.fnr}%, FPR={trace.averages.fpr}%.")
    return trace


def evaluate_static(config: ActiveConfig, split: MonthlySplit,
                    dataset: SparseDataset) -> ActiveTrace:
    """Train once on the initial period and evaluate every month
    forward, never revealing labels."""
    train_ids = np.sort(np.asarray(split.initial_train, dtype=np.int64))
    model = initial_model(config, dataset, train_ids)
    trace = ActiveTrace(config, model.hparams, static=True)
    empty = np.zeros(0, dtype=np.int64)
    for month in split.months:
        scores = model.score(dataset.X[month.row_ids])
        predicted = (scores >= config.threshold).astype(np.int8)
        metrics = evaluate(dataset.labels[month.row_ids], predicted)
        trace.months.append(
            month_record(month.tag, month.row_ids, metrics,
                         int(train_ids.size), empty, False))
    trace.averages = summarize(trace.months, config.weighting)
    return trace
