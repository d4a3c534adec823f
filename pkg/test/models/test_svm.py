import numpy as np
import pytest

from driftbench.errors import ModelError
from driftbench.models import SVM
from driftbench.models.svm import svm_objective

PROBLEMS = [
    (np.array([[1, 0], [1, 0], [0, 1], [0, 0]]), np.array([1, 1, 0, 0])),
    (np.array([[1, 1], [1, 0], [0, 1], [0, 0]]), np.array([1, 1, 0, 0])),
    (np.array([[1, 1], [0, 1], [1, 0], [0, 0]]), np.array([1, 0, 0, 0])),
]


def grid_optimum(X, y, C, lo=-4.0, hi=4.0, num=161):
    grid = np.linspace(lo, hi, num)
    w1, w2, b = np.meshgrid(grid, grid, grid, indexing='ij')
    sign = 2.0 * y - 1.0
    obj = 0.5 * (w1**2 + w2**2 + b**2)
    for x, s in zip(X, sign):
        margin = w1 * x[0] + w2 * x[1] + b
        obj += C * np.maximum(0.0, 1.0 - s * margin)
    return obj.min()


@pytest.mark.parametrize('X, y', PROBLEMS)
@pytest.mark.parametrize('C', [0.1, 10.0])
def test_within_one_percent_of_grid_optimum(X, y, C):
    model = SVM(C=C, tol=1e-6).fit(X, y)
    assert model.objective(X, y) <= 1.01 * grid_optimum(X, y, C)


@pytest.mark.parametrize('X, y', PROBLEMS)
def test_separable_problems_are_separated(X, y):
    model = SVM(C=10.0).fit(X, y)
    np.testing.assert_array_equal(np.sign(model.margin(X)), 2 * y - 1)


def test_two_point_max_margin():
    X, y = np.array([[1], [0]]), np.array([1, 0])
    model = SVM(C=10.0).fit(X, y)
    # maximum margin: w = 2, b = -1
    assert model.weight[0] == pytest.approx(2.0, abs=1e-2)
    assert model.bias == pytest.approx(-1.0, abs=1e-2)
    assert model.predict(X).tolist() == [1, 0]
    assert model.score([[1]])[0] > 0.5 > model.score([[0]])[0]


def test_subgradient_solver_approaches_the_optimum():
    X, y = PROBLEMS[0]
    exact = SVM(C=0.1, tol=1e-8).fit(X, y).objective(X, y)
    model = SVM(C=0.1, tol=0.0, max_epochs=2000,
                solver='subgradient').fit(X, y)
    assert model.objective(X, y) <= 1.05 * exact


def test_objective_helper():
    X, y = PROBLEMS[0]
    w, b = np.array([2.0, 0.0]), -1.0
    assert svm_objective(w, b, X, 2.0 * y - 1.0, 10.0) == pytest.approx(2.5)


@pytest.mark.parametrize('hparams', [dict(C=0), dict(solver='smo'),
                                     dict(max_epochs=0), dict(gamma=1)])
def test_invalid_hyperparameters(hparams):
    with pytest.raises(ModelError):
        SVM(**hparams)


def test_single_class_is_rejected():
    with pytest.raises(ModelError, match='both classes'):
        SVM().fit(np.eye(3), [1, 1, 1])
