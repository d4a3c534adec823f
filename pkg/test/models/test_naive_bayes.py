import numpy as np
import pytest

from driftbench.errors import ModelError
from driftbench.models import NaiveBayes

X = np.array([[1, 0], [1, 1], [0, 1], [0, 0]])
y = np.array([1, 1, 1, 0])


def test_closed_form_posteriors():
    # theta_mal = (3/5, 3/5), theta_ben = (1/3, 1/3), priors 3/4 and 1/4
    model = NaiveBayes(alpha=1.0).fit(X, y)
    expected = [81 / 106, 243 / 268, 81 / 106, 27 / 52]
    np.testing.assert_allclose(model.score(X), expected, rtol=0, atol=1e-12)


def test_unseen_rows_and_smoothing():
    model = NaiveBayes(alpha=2.0).fit(X, y)
    # theta_mal = (4/7, 4/7), theta_ben = (2/5, 2/5)
    mal = 0.75 * (3 / 7) * (3 / 7)
    ben = 0.25 * (3 / 5) * (3 / 5)
    np.testing.assert_allclose(model.score([[0, 0]]), [mal / (mal + ben)],
                               atol=1e-12)


def test_single_class_training_set():
    model = NaiveBayes().fit(X, np.zeros(4, dtype=int))
    np.testing.assert_array_equal(model.score(X), 0.0)


def test_invalid_alpha():
    with pytest.raises(ModelError):
        NaiveBayes(alpha=0.0)
