import numpy as np
import pytest

from driftbench.errors import ModelError
from driftbench.models import GBDT
from driftbench.models.gbdt import logloss


@pytest.fixture(scope='module')
def noisy():
    rng = np.random.default_rng(3)
    X = (rng.random((1000, 15)) < 0.3).astype(np.int64)
    logits = 2.0 * X[:, 0] + 1.5 * X[:, 1] - 2.0 * X[:, 2] - 0.5
    y = (rng.random(1000) < 1 / (1 + np.exp(-logits))).astype(np.int64)
    return X, y


@pytest.fixture(scope='module')
def boosted(noisy):
    X, y = noisy
    return GBDT(iterations=1000, depth=6).fit(X, y)


def test_training_logloss_never_increases(boosted):
    history = np.asarray(boosted.history)
    assert history.size == 1000
    assert np.all(np.diff(history) <= 1e-9)
    assert history[-1] < history[0]


def test_oblivious_evaluation_matches_training(boosted, noisy):
    X, y = noisy
    assert logloss(boosted.raw_score(X), y) == pytest.approx(
        boosted.history[-1], abs=1e-9)


def test_depth_is_capped_by_vocabulary():
    X = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])
    model = GBDT(iterations=5, depth=10).fit(X, [1, 0, 0, 1])
    assert model.features.shape == (5, 3)
    assert model.values.shape == (5, 8)
    # a level never reuses a feature
    assert all(len(set(row)) == 3 for row in model.features.tolist())


def test_deterministic(noisy):
    X, y = noisy
    a = GBDT(iterations=20, depth=3, seed=1).fit(X, y)
    b = GBDT(iterations=20, depth=3, seed=2).fit(X, y)
    np.testing.assert_array_equal(a.score(X), b.score(X))


@pytest.mark.parametrize('hparams', [
    dict(iterations=0), dict(learning_rate=0.0), dict(depth=0),
    dict(l2_leaf_reg=-1.0)
])
def test_invalid_hyperparameters(hparams):
    with pytest.raises(ModelError):
        GBDT(**hparams)
