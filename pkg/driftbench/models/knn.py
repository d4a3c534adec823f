from typing import Dict

import numpy as np
import scipy.sparse as sp

from driftbench.errors import ModelError
from driftbench.models.base import Classifier


def hamming_distances(Q: sp.csr_matrix, T: sp.csr_matrix,
                      t_norm: np.ndarray) -> np.ndarray:
    """Hamming distances between binary rows: ``|q| + |t| - 2 q·t``."""
    q_norm = np.asarray(Q.sum(1), dtype=np.int64)
    shared = (Q @ T.T).toarray().astype(np.int64)
    return q_norm + t_norm[None, :] - 2 * shared


class KNN(Classifier):
    """k-nearest neighbors under the Hamming distance.

    The score is the fraction of malware among the :obj:`k` closest
    training rows. Neighbors tied at the k-th distance are taken in
    training row order, so the result is deterministic; an even vote
    split scores 0.5.

    Parameters
    ----------
    k : int, optional
        an odd number of neighbors, by default 5

    Attributes
    ----------
    chunk_size : int
        query rows per distance block, 512
    """
    family = "knn"
    defaults = dict(k=5)
    tolerate_single_class = True
    chunk_size = 512

    def check_hparams(self, hp):
        if not (isinstance(hp.k, (int, np.integer)) and hp.k >= 1
                and hp.k % 2 == 1):
            raise ModelError(f"k must be a positive odd integer, got {hp.k}.")

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        self.train_X = X.copy()
        self.train_y = y.astype(np.int8)

    def neighbors(self, X: sp.csr_matrix) -> np.ndarray:
        """Row ids of the k nearest training rows of every query."""
        T = self.train_X
        t_norm = np.asarray(T.sum(1), dtype=np.int64).ravel()
        k = min(int(self.hparams.k), T.shape[0])
        out = np.empty((X.shape[0], k), dtype=np.int64)
        for start in range(0, X.shape[0], self.chunk_size):
            stop = min(start + self.chunk_size, X.shape[0])
            dist = hamming_distances(X[start:stop], T, t_norm)
            out[start:stop] = np.argsort(dist, axis=1, kind='stable')[:, :k]
        return out

    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        return self.train_y[self.neighbors(X)].mean(axis=1)

    def state_dict(self) -> Dict[str, np.ndarray]:
        T = self.train_X
        return dict(indptr=T.indptr, indices=T.indices, labels=self.train_y)

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        indptr, indices = state['indptr'], state['indices']
        data = np.ones(indices.size, dtype=np.float64)
        self.train_X = sp.csr_matrix((data, indices, indptr),
                                     shape=(indptr.size - 1, self.vocab_size))
        self.train_y = state['labels']
