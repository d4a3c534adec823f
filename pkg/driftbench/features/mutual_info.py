from typing import List, NamedTuple, Tuple

import numpy as np
import scipy.sparse as sp
from sklearn.preprocessing import MultiLabelBinarizer

from driftbench.datasets.corpus import RawCorpus
from driftbench.errors import FeatureError

__all__ = ["Contingency", "count_contingency", "contingency_table",
           "mutual_information"]


class Contingency(NamedTuple):
    """2x2 counts of (feature present/absent) x (malware/benign)."""
    n11: int
    n10: int
    n01: int
    n00: int


def count_contingency(corpus: RawCorpus, feature: str) -> Contingency:
    """Count the apps of :obj:`corpus` by presence of :obj:`feature`
    and by label.

    Returns
    -------
    Contingency
        ``n11`` present & malware, ``n10`` present & benign,
        ``n01`` absent & malware, ``n00`` absent & benign.
        A feature that never occurs yields ``n11 = n10 = 0``.

    Example
    -------
    >>> count_contingency(corpus, 'permission::SEND_SMS')
    Contingency(n11=3, n10=1, n01=0, n00=0)
    """
    if len(corpus) == 0:
        raise FeatureError("cannot count contingencies on an empty slice.")
    labels = corpus.labels
    present = np.fromiter((feature in feats for feats in corpus.features),
                          dtype=bool, count=len(corpus))
    n_mal = int(labels.sum())
    n11 = int(labels[present].sum())
    n10 = int(present.sum()) - n11
    n01 = n_mal - n11
    n00 = len(corpus) - n_mal - n10
    return Contingency(n11, n10, n01, n00)


def binarize(corpus: RawCorpus) -> Tuple[List[str], sp.csr_matrix]:
    """Presence matrix of all distinct raw features of :obj:`corpus`,
    columns in ascending string order."""
    mlb = MultiLabelBinarizer(sparse_output=True)
    X = mlb.fit_transform([sorted(f) for f in corpus.features])
    return [str(c) for c in mlb.classes_], sp.csr_matrix(X, dtype=np.int64)


def contingency_table(corpus: RawCorpus) -> Tuple[List[str], np.ndarray]:
    """Contingency counts of every distinct feature at once.

    Returns
    -------
    Tuple[List[str], np.ndarray]
        the features in ascending string order and an integer
        array of shape ``[num_features, 4]`` holding
        ``n11, n10, n01, n00`` per feature
    """
    if len(corpus) == 0:
        raise FeatureError("cannot count contingencies on an empty slice.")
    features, X = binarize(corpus)
    labels = corpus.labels.astype(np.int64)
    n11 = np.asarray(X.T @ labels).ravel()
    present = np.asarray(X.sum(axis=0)).ravel()
    n10 = present - n11
    n_mal = int(labels.sum())
    n01 = n_mal - n11
    n00 = len(corpus) - n_mal - n10
    return features, np.stack([n11, n10, n01, n00], axis=1)


def mutual_information(n11, n10, n01, n00):
    r"""Mutual information (in nats) between a binary feature and
    the label, from the 2x2 contingency counts.

    .. math::
        I = \sum_{x, y} \frac{n_{xy}}{T}
            \ln \frac{n_{xy} T}{n_{x\cdot} n_{\cdot y}}

    Cells with zero count contribute 0; the result is clamped
    to be non-negative. Scalars give a float, arrays are
    evaluated element-wise.

    Parameters
    ----------
    n11, n10, n01, n00 : int or array-like
        present & malware, present & benign,
        absent & malware, absent & benign counts

    Returns
    -------
    float or np.ndarray
        the mutual information in nats

    Raises
    ------
    FeatureError
        if a total count is zero or a count is negative

    Example
    -------
    >>> mutual_information(2, 0, 0, 2)  # perfect predictor
    0.6931471805599453
    >>> mutual_information(1, 1, 1, 1)  # independent
    0.0
    """
    scalar = np.ndim(n11) == 0
    cells = [np.asarray(n, dtype=np.float64) for n in (n11, n10, n01, n00)]
    cells = np.broadcast_arrays(*cells)
    if any((c < 0).any() for c in cells):
        raise FeatureError("contingency counts must be non-negative.")
    c11, c10, c01, c00 = cells
    total = c11 + c10 + c01 + c00
    if (total == 0).any():
        raise FeatureError("mutual information of an empty table.")

    row1, row0 = c11 + c10, c01 + c00
    col1, col0 = c11 + c01, c10 + c00
    mi = np.zeros_like(total)
    with np.errstate(divide='ignore', invalid='ignore'):
        for n, row, col in ((c11, row1, col1), (c10, row1, col0),
                            (c01, row0, col1), (c00, row0, col0)):
            term = (n / total) * np.log((n * total) / (row * col))
            mi += np.where(n > 0, term, 0.)
    mi = np.maximum(mi, 0.)
    return float(mi) if scalar else mi
