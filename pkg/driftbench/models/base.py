import abc
import io
import json
import time
import zipfile
from typing import Dict, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from driftbench.datasets.sparse_dataset import (SparseDataset, as_matrix,
                                                check_vocab_size)
from driftbench.errors import ModelError
from driftbench.utils import BunchDict, atomic_write, get_logger

MODEL_HEADER = "driftbench-model v1"
FAMILIES = ("nb", "knn", "svm", "rf", "gbdt", "mlp")

logger = get_logger(__name__)


class Hyperparams(BunchDict):
    """Hyperparameters of one model family.

    Example
    -------
    >>> hp = Hyperparams('svm', C=0.1)
    >>> hp.family, hp.C
    ('svm', 0.1)
    """
    def __init__(self, family: Optional[str] = None, **values):
        if family is None:
            super().__init__(**values)
        else:
            super().__init__(family=family, **values)

    def without_family(self) -> dict:
        return {k: v for k, v in self.items() if k != 'family'}

    def tag(self) -> str:
        """Compact ``key=value`` rendering used in tables and logs."""
        return ",".join(f"{k}={v}" for k, v in self.without_family().items())


class Classifier(abc.ABC):
    """Binary malware classifier producing malware probabilities.
    Note that this is an abstract class.

    Parameters
    ----------
    hparams : Optional[dict], optional
        family-specific hyperparameters, missing values take the
        family defaults, by default None
    seed : int, optional
        the master seed of the model, by default 0
    n_jobs : int, optional
        threads used by :meth:`fit`; never changes the result,
        by default 1
    verbose : int, optional
        show progress bars while fitting, by default 0
    kwargs : additional hyperparameters, merged into :obj:`hparams`

    Raises
    ------
    ModelError
        unknown or invalid hyperparameters

    Examples
    --------
    Every family follows the same contract:

    .. code-block:: python

        from driftbench.models import get_model
        model = get_model('svm')(C=1.0, seed=42)
        model.fit(train)                 # SparseDataset
        scores = model.score(test)       # malware probabilities
        labels = model.predict(test, threshold=0.5)
        model.save('svm.model')
    """
    family: str = None
    defaults: Dict = {}
    # nb and knn score single-class training sets
    tolerate_single_class: bool = False

    def __init__(self, hparams: Optional[dict] = None, seed: int = 0,
                 n_jobs: int = 1, verbose: int = 0, **kwargs):
        values = dict(hparams or {})
        values.update(kwargs)
        family = values.pop('family', self.family)
        if family != self.family:
            raise ModelError(f"{self.__class__.__name__} got hyperparameters "
                             f"of family '{family}'.")
        unknown = set(values) - set(self.defaults)
        if unknown:
            raise ModelError(f"unknown {self.family} hyperparameter(s) "
                             f"{sorted(unknown)}.")

        hp = Hyperparams(self.family)
        for key, default in self.defaults.items():
            hp[key] = values.get(key, default)
        self.check_hparams(hp)

        self.hparams = hp
        self.seed = int(seed)
        self.n_jobs = n_jobs
        self.verbose = verbose
        self.vocab_size: Optional[int] = None
        self.meta = BunchDict()

    def check_hparams(self, hp: Hyperparams):
        """Validate :obj:`hp`, raising :class:`ModelError`.
        Override this method in subclass."""

    @property
    def fitted(self) -> bool:
        return self.vocab_size is not None

    def fit(self, train: Union[SparseDataset, sp.spmatrix, np.ndarray],
            labels: Optional[np.ndarray] = None) -> "Classifier":
        """Train the model from scratch.

        Parameters
        ----------
        train : Union[SparseDataset, sp.spmatrix, np.ndarray]
            training rows, a dataset or a 0/1 matrix
        labels : Optional[np.ndarray], optional
            labels of a matrix :obj:`train`, ignored for a dataset,
            by default None

        Returns
        -------
        Classifier
            the fitted model itself
        """
        if isinstance(train, SparseDataset):
            labels = train.labels
        elif labels is None:
            raise ModelError("labels are required to fit on a matrix.")
        X = as_matrix(train)
        y = np.asarray(labels, dtype=np.int64).ravel()
        if X.shape[0] == 0:
            raise ModelError("cannot fit on an empty training set.")
        if X.shape[0] != y.size:
            raise ModelError(f"{X.shape[0]} rows but {y.size} labels.")
        if not np.isin(y, (0, 1)).all():
            raise ModelError("labels must be 0 or 1.")
        if not self.tolerate_single_class and np.unique(y).size < 2:
            raise ModelError(f"{self.family} needs both classes in the "
                             "training set.")

        start = time.perf_counter()
        self.vocab_size = X.shape[1]
        self._fit(X, y)
        self.meta = BunchDict(train_size=int(y.size),
                              fit_seconds=time.perf_counter() - start)
        logger.debug(f"Fitted {self!r} on {y.size} rows in "
                     f"{self.meta.fit_seconds:.2f}s.")
        return self

    def score(self, rows) -> np.ndarray:
        """Malware probability of every row, in ``[0, 1]``."""
        if not self.fitted:
            raise ModelError(f"{self.family} model is not fitted.")
        X = as_matrix(rows)
        check_vocab_size(X, self.vocab_size, error=ModelError)
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.float64)
        return np.clip(self._score(X), 0.0, 1.0)

    def predict(self, rows, threshold: float = 0.5) -> np.ndarray:
        """Label 1 iff the score reaches :obj:`threshold`.

        Example
        -------
        >>> model.predict(rows, threshold=0.5)
        array([1, 0, 0], dtype=int8)
        """
        check_threshold(threshold)
        return (self.score(rows) >= threshold).astype(np.int8)

    @abc.abstractmethod
    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        raise NotImplementedError

    @abc.abstractmethod
    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        raise NotImplementedError

    @abc.abstractmethod
    def state_dict(self) -> Dict[str, np.ndarray]:
        """Learned state as named numpy arrays.

        Raises
        ------
        NotImplementedError
            The subclass does not implement this interface.
        """
        raise NotImplementedError

    @abc.abstractmethod
    def load_state_dict(self, state: Dict[str, np.ndarray]):
        raise NotImplementedError

    def save(self, path: str) -> str:
        """Persist the model as a ``driftbench-model v1 <family>``
        header line followed by an ``npz`` payload."""
        if not self.fitted:
            raise ModelError(f"{self.family} model is not fitted.")
        meta = dict(hparams=self.hparams.to_dict(), seed=self.seed,
                    vocab_size=self.vocab_size,
                    train_size=self.meta.get('train_size'))
        buf = io.BytesIO()
        np.savez(buf, __meta__=np.array(json.dumps(meta, sort_keys=True)),
                 **self.state_dict())
        with atomic_write(path, 'wb') as f:
            f.write(f"{MODEL_HEADER} {self.family}\n".encode('utf-8'))
            f.write(buf.getvalue())
        return path

    def extra_repr(self) -> str:
        return self.hparams.tag()

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.extra_repr()})"

    __str__ = __repr__


def check_threshold(threshold: float):
    if not 0.0 <= threshold <= 1.0:
        raise ModelError(f"threshold must lie in [0, 1], got {threshold}.")


def uncertainty(scores: np.ndarray) -> np.ndarray:
    """``1 - max(p, 1 - p)`` per score.

    Example
    -------
    >>> uncertainty([0.9, 0.5, 0.0])
    array([0.1, 0.5, 0. ])
    """
    p = np.asarray(scores, dtype=np.float64)
    return 1.0 - np.maximum(p, 1.0 - p)


def sigmoid(z: np.ndarray) -> np.ndarray:
    return expit(z)


def read_model_file(path: str):
    """Split a model file into ``(family, meta, state)``."""
    with open(path, 'rb') as f:
        header = f.readline().decode('utf-8', errors='replace').rstrip('\n')
        payload = f.read()
    prefix, _, family = header.rpartition(' ')
    if prefix != MODEL_HEADER or family not in FAMILIES:
        raise ModelError(f"{path}: expected '{MODEL_HEADER} <family>', "
                         f"got '{header[:40]}'.")
    try:
        with np.load(io.BytesIO(payload), allow_pickle=False) as npz:
            arrays = {k: npz[k] for k in npz.files}
    except (ValueError, OSError, zipfile.BadZipFile) as e:
        raise ModelError(f"{path}: corrupted model payload ({e}).") from None
    meta = json.loads(str(arrays.pop('__meta__')))
    return family, meta, arrays
