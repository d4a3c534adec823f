from typing import Dict, List

import numpy as np
import scipy.sparse as sp
from tqdm.auto import tqdm

from driftbench.errors import ModelError
from driftbench.models.base import Classifier, sigmoid
from driftbench.utils import get_logger

logger = get_logger(__name__)


def logloss(raw: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy of raw scores (log-odds)."""
    return float(np.mean(np.logaddexp(0.0, raw) - y * raw))


def presence(Xc: sp.csc_matrix, feature: int) -> np.ndarray:
    col = np.zeros(Xc.shape[0], dtype=np.int64)
    col[Xc.indices[Xc.indptr[feature]:Xc.indptr[feature + 1]]] = 1
    return col


class GBDT(Classifier):
    r"""Gradient-boosted oblivious trees on the logistic loss.

    Every tree applies one ``feature present?`` test per level, so a
    depth-``d`` tree has :math:`2^d` leaves addressed by the bits of
    the ``d`` tests. Each level takes the unused feature maximizing
    :math:`\sum_\ell G_\ell^2 / (H_\ell + \lambda)` over the leaves it
    would create, and leaves take the Newton value
    :math:`-\eta\, G_\ell / (H_\ell + \lambda)`, with :math:`G, H` the
    sums of the loss gradients and hessians and :math:`\lambda` the
    ``l2_leaf_reg``. The score is the logistic of the summed leaf
    values. Training is deterministic.

    Parameters
    ----------
    iterations : int, optional
        number of trees, by default 1000
    learning_rate : float, optional
        shrinkage :math:`\eta`, by default 0.1
    depth : int, optional
        levels per tree (capped at the vocabulary size), by default 10
    l2_leaf_reg : float, optional
        leaf regularizer :math:`\lambda`, by default 5.0

    Example
    -------
    >>> model = GBDT().fit(train)
    >>> model.history[:3]   # training logloss after each tree
    """
    family = "gbdt"
    defaults = dict(iterations=1000, learning_rate=0.1, depth=10,
                    l2_leaf_reg=5.0)

    def check_hparams(self, hp):
        if int(hp.iterations) < 1:
            raise ModelError(f"iterations must be >= 1, got {hp.iterations}.")
        if not hp.learning_rate > 0:
            raise ModelError("learning_rate must be > 0, "
                             f"got {hp.learning_rate}.")
        if int(hp.depth) < 1:
            raise ModelError(f"depth must be >= 1, got {hp.depth}.")
        if hp.l2_leaf_reg < 0:
            raise ModelError(
                f"l2_leaf_reg must be >= 0, got {hp.l2_leaf_reg}.")

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        n = X.shape[0]
        depth = min(int(self.hparams.depth), X.shape[1])
        lr = float(self.hparams.learning_rate)
        lam = float(self.hparams.l2_leaf_reg)
        Xc = X.tocsc()
        y = y.astype(np.float64)
        raw = np.zeros(n)
        rows = np.arange(n)
        features: List[np.ndarray] = []
        values: List[np.ndarray] = []
        self.history: List[float] = []

        for _ in tqdm(range(int(self.hparams.iterations)), desc="Boosting",
                      disable=not self.verbose):
            p = sigmoid(raw)
            g, h = p - y, p * (1.0 - p)
            leaf = np.zeros(n, dtype=np.int64)
            used: List[int] = []
            for level in range(depth):
                num_leaves = 1 << level
                # per-leaf gradient and hessian sums, rows with a feature
                stats = sp.csr_matrix(
                    (np.concatenate([g, h]),
                     (np.concatenate([leaf, leaf + num_leaves]),
                      np.concatenate([rows, rows]))),
                    shape=(2 * num_leaves, n))
                S = (stats @ X).toarray()
                G1, H1 = S[:num_leaves], S[num_leaves:]
                G = np.bincount(leaf, g, minlength=num_leaves)[:, None]
                H = np.bincount(leaf, h, minlength=num_leaves)[:, None]
                G0, H0 = G - G1, H - H1
                gain = (G1**2 / (H1 + lam) + G0**2 / (H0 + lam)).sum(0)
                gain[used] = -np.inf
                best = int(np.argmax(gain))
                used.append(best)
                leaf += presence(Xc, best) << level

            num_leaves = 1 << depth
            G = np.bincount(leaf, g, minlength=num_leaves)
            H = np.bincount(leaf, h, minlength=num_leaves)
            leaf_values = -lr * G / (H + lam)
            raw += leaf_values[leaf]
            features.append(np.asarray(used, dtype=np.int64))
            values.append(leaf_values)
            self.history.append(logloss(raw, y))

        self.features = np.vstack(features)
        self.values = np.vstack(values)
        logger.debug(f"GBDT training logloss {self.history[0]:.6f} -> "
                     f"{self.history[-1]:.6f}.")

    def raw_score(self, X: sp.csr_matrix) -> np.ndarray:
        """Summed leaf values (log-odds) of every row."""
        used, inverse = np.unique(self.features, return_inverse=True)
        inverse = inverse.reshape(self.features.shape)
        bits = X.tocsc()[:, used].toarray() > 0
        powers = 1 << np.arange(self.features.shape[1], dtype=np.int64)
        raw = np.zeros(X.shape[0])
        for cols, leaf_values in zip(inverse, self.values):
            raw += leaf_values[bits[:, cols] @ powers]
        return raw

    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        return sigmoid(self.raw_score(X))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return dict(features=self.features, values=self.values,
                    history=np.asarray(self.history))

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        self.features = state['features']
        self.values = state['values']
        self.history = state['history'].tolist()
