from typing import Dict

import numpy as np
import scipy.sparse as sp

from driftbench.errors import ModelError
from driftbench.models.base import Classifier, sigmoid


class NaiveBayes(Classifier):
    r"""Bernoulli Naive Bayes over binary presence features with
    Laplace smoothing

    .. math::
        \theta_{cj} = \frac{n_{cj} + \alpha}{n_c + 2\alpha}

    and empirical class priors. The score is the normalized
    posterior of the malware class.

    Parameters
    ----------
    alpha : float, optional
        smoothing strength, by default 1.0

    Example
    -------
    >>> model = NaiveBayes(alpha=1.0).fit(X, y)
    >>> model.score(X)
    """
    family = "nb"
    defaults = dict(alpha=1.0)
    tolerate_single_class = True

    def check_hparams(self, hp):
        if not hp.alpha > 0:
            raise ModelError(f"alpha must be > 0, got {hp.alpha}.")

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        alpha = float(self.hparams.alpha)
        class_count = np.bincount(y, minlength=2).astype(np.float64)
        feature_count = np.vstack([
            np.asarray(X[y == c].sum(0)).ravel() for c in (0, 1)
        ])
        theta = (feature_count + alpha) / (class_count[:, None] + 2 * alpha)
        with np.errstate(divide='ignore'):
            self.class_log_prior = np.log(class_count / class_count.sum())
        self.log_theta = np.log(theta)
        self.log_neg_theta = np.log1p(-theta)

    def log_odds(self, X: sp.csr_matrix) -> np.ndarray:
        """Malware-vs-benign posterior log-odds of every row."""
        delta = ((self.log_theta[1] - self.log_neg_theta[1]) -
                 (self.log_theta[0] - self.log_neg_theta[0]))
        bias = (self.log_neg_theta[1].sum() - self.log_neg_theta[0].sum())
        prior = self.class_log_prior[1] - self.class_log_prior[0]
        with np.errstate(invalid='ignore'):
            return prior + bias + X @ delta

    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        return sigmoid(self.log_odds(X))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return dict(class_log_prior=self.class_log_prior,
                    log_theta=self.log_theta,
                    log_neg_theta=self.log_neg_theta)

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        self.class_log_prior = state['class_log_prior']
        self.log_theta = state['log_theta']
        self.log_neg_theta = state['log_neg_theta']
