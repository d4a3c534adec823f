from functools import lru_cache
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp

from driftbench.errors import ModelError
from driftbench.models.base import Classifier, sigmoid
from driftbench.utils import get_logger

logger = get_logger(__name__)

SOLVERS = ("dual", "subgradient")


class SVM(Classifier):
    r"""Linear SVM minimizing

    .. math::
        \frac{1}{2}\left(\lVert w \rVert^2 + b^2\right) +
        C \sum_i \max\left(0, 1 - y_i (w^\top x_i + b)\right)

    with labels :math:`y_i \in \{-1, +1\}`; the bias is learned as the
    weight of a constant feature. The score is the logistic of the
    signed margin.

    The default ``'dual'`` solver replaces the averaged subgradient
    trainer as the model fitted unless asked otherwise. Both minimize
    the objective above but stop at different weights, so their
    scores are not interchangeable. The subgradient trainer
    stays available as ``solver='subgradient'``.

    Parameters
    ----------
    C : float, optional
        hinge-loss weight, by default 1.0
    tol : float, optional
        stopping tolerance, by default 1e-3
    max_epochs : int, optional
        maximum passes over the training set, by default 1000
    solver : str, optional
        ``'dual'`` for dual coordinate descent over the rows in their
        training order, ``'subgradient'`` for full-batch subgradient
        descent with averaged weights, by default 'dual'

    Example
    -------
    >>> model = SVM(C=10.0).fit(X, y)
    >>> model.margin(X)
    """
    family = "svm"
    defaults = dict(C=1.0, tol=1e-3, max_epochs=1000, solver="dual")

    def check_hparams(self, hp):
        if not hp.C > 0:
            raise ModelError(f"C must be > 0, got {hp.C}.")
        if hp.tol < 0:
            raise ModelError(f"tol must be >= 0, got {hp.tol}.")
        if int(hp.max_epochs) < 1:
            raise ModelError(f"max_epochs must be >= 1, got {hp.max_epochs}.")
        if hp.solver not in SOLVERS:
            raise ModelError(f"unknown solver '{hp.solver}', expected one "
                             f"of {SOLVERS}.")

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        sign = 2.0 * y - 1.0
        C, tol = float(self.hparams.C), float(self.hparams.tol)
        epochs = int(self.hparams.max_epochs)
        if self.hparams.solver == "dual":
            fn = get_numbafn()
            wb, n_epochs = fn(X.indptr.astype(np.int64),
                              X.indices.astype(np.int64), sign, C, tol,
                              epochs, X.shape[1])
            self.weight, self.bias = wb[:-1].copy(), float(wb[-1])
        else:
            self.weight, self.bias, n_epochs = subgradient_descent(
                X, sign, C, tol, epochs)
        self.n_epochs = int(n_epochs)
        if self.n_epochs >= epochs:
            logger.warning(f"SVM(C={C}) stopped at max_epochs={epochs} "
                           "before reaching the tolerance.")

    def margin(self, X) -> np.ndarray:
        return np.asarray(X @ self.weight).ravel() + self.bias

    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        return sigmoid(self.margin(X))

    def objective(self, X: sp.csr_matrix, y: np.ndarray) -> float:
        return svm_objective(self.weight, self.bias, X, 2.0 * y - 1.0,
                             float(self.hparams.C))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return dict(weight=self.weight, bias=np.array(self.bias))

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        self.weight = state['weight']
        self.bias = float(state['bias'])


def svm_objective(w: np.ndarray, b: float, X, sign: np.ndarray,
                  C: float) -> float:
    hinge = np.maximum(0.0, 1.0 - sign * (np.asarray(X @ w).ravel() + b))
    return 0.5 * (w @ w + b * b) + C * hinge.sum()


def subgradient_descent(X: sp.csr_matrix, sign: np.ndarray, C: float,
                        tol: float, max_epochs: int
                        ) -> Tuple[np.ndarray, float, int]:
    """Full-batch subgradient descent with step ``1 / t``.

    Returns the running average of the iterates, or the best single
    iterate when its objective is lower.
    """
    w = np.zeros(X.shape[1])
    b = 0.0
    avg_w, avg_b = w.copy(), b
    best = (svm_objective(w, b, X, sign, C), w.copy(), b)
    prev = np.inf
    XT = X.T.tocsr()
    for t in range(1, max_epochs + 1):
        viol = sign * (np.asarray(X @ w).ravel() + b) < 1.0
        coef = np.where(viol, sign, 0.0)
        w = (1.0 - 1.0 / t) * w + (C / t) * (XT @ coef)
        b = (1.0 - 1.0 / t) * b + (C / t) * coef.sum()
        avg_w += (w - avg_w) / t
        avg_b += (b - avg_b) / t

        obj = svm_objective(w, b, X, sign, C)
        if obj < best[0]:
            best = (obj, w.copy(), b)
        avg_obj = svm_objective(avg_w, avg_b, X, sign, C)
        if abs(prev - avg_obj) <= tol * max(1.0, abs(avg_obj)):
            break
        prev = avg_obj

    if best[0] < avg_obj:
        return best[1], best[2], t
    return avg_w, avg_b, t


@lru_cache(maxsize=None)
def get_numbafn():
    from numba import njit

    @njit
    def dual_coordinate_descent(indptr, indices, sign, C, tol, max_epochs,
                                num_feats):
        # last weight is the bias, fed by a constant 1 feature
        num_rows = sign.shape[0]
        w = np.zeros(num_feats + 1)
        alpha = np.zeros(num_rows)
        epoch = 0
        while epoch < max_epochs:
            epoch += 1
            violation = 0.0
            for i in range(num_rows):
                start, end = indptr[i], indptr[i + 1]
                wx = w[num_feats]
                for p in range(start, end):
                    wx += w[indices[p]]
                grad = sign[i] * wx - 1.0
                a = alpha[i]
                if a == 0.0:
                    pg = min(grad, 0.0)
                elif a == C:
                    pg = max(grad, 0.0)
                else:
                    pg = grad
                violation = max(violation, abs(pg))
                if pg != 0.0:
                    q = end - start + 1.0
                    new = min(max(a - grad / q, 0.0), C)
                    d = (new - a) * sign[i]
                    alpha[i] = new
                    for p in range(start, end):
                        w[indices[p]] += d
                    w[num_feats] += d
            if violation <= tol:
                break
        return w, epoch

    return dual_coordinate_descent
