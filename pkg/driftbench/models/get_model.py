from typing import Optional, Type, Union

import numpy as np

from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import ModelError
from driftbench.models.base import (FAMILIES, Classifier, Hyperparams,
                                    read_model_file)
from driftbench.models.forest import RandomForest
from driftbench.models.gbdt import GBDT
from driftbench.models.knn import KNN
from driftbench.models.mlp import MLP
from driftbench.models.naive_bayes import NaiveBayes
from driftbench.models.svm import SVM

MODELS = {
    cls.family: cls
    for cls in (NaiveBayes, KNN, SVM, RandomForest, GBDT, MLP)
}
assert tuple(MODELS) == FAMILIES


def get_model(family: Union[str, Classifier]) -> Type[Classifier]:
    r"""Get the classifier class of a model family.

    Parameters
    ----------
    family : Union[str, Classifier]
        a family tag (``nb``, ``knn``, ``svm``, ``rf``, ``gbdt``,
        ``mlp``) or a model

    Returns
    -------
    Type[Classifier]

    Examples
    --------
    >>> from driftbench.models import get_model
    >>> get_model('svm')
    driftbench.models.svm.SVM

    >>> # it is case-sensitive
    >>> get_model('SVM')
    Traceback (most recent call last):
    ...
    ModelError: [models] unknown model family 'SVM' ...
    """
    if isinstance(family, Classifier):
        return family.__class__
    try:
        return MODELS[family]
    except KeyError:
        raise ModelError(f"unknown model family '{family}', expected one "
                         f"of {FAMILIES}.") from None


def fit(hparams: dict, train: SparseDataset, seed: int = 0,
        n_jobs: int = 1, verbose: int = 0) -> Classifier:
    """Fit a model of the family named in :obj:`hparams`.

    Example
    -------
    >>> model = fit(Hyperparams('knn', k=3), train, seed=42)
    """
    family = hparams.get('family') if hparams else None
    if family is None:
        raise ModelError("hyperparameters must name their family.")
    model = get_model(family)(hparams, seed=seed, n_jobs=n_jobs,
                              verbose=verbose)
    return model.fit(train)


def score(model: Classifier, rows) -> np.ndarray:
    return model.score(rows)


def predict(model: Classifier, rows, threshold: float = 0.5) -> np.ndarray:
    return model.predict(rows, threshold=threshold)


def load_model(path: str, n_jobs: int = 1,
               family: Optional[str] = None) -> Classifier:
    """Load a model written by :meth:`Classifier.save`."""
    found, meta, state = read_model_file(path)
    if family is not None and found != family:
        raise ModelError(f"{path}: expected a {family} model, got {found}.")
    model = get_model(found)(Hyperparams(**meta['hparams']),
                             seed=meta['seed'], n_jobs=n_jobs)
    model.vocab_size = int(meta['vocab_size'])
    model.meta.train_size = meta.get('train_size')
    model.load_state_dict(state)
    return model
