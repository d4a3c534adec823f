import numpy as np
import pytest

from driftbench.errors import TuningError
from driftbench.metrics import f1_score
from driftbench.training import (default_grid, grid_search, make_grid,
                                 split_validation)


@pytest.mark.parametrize('family, size', [('svm', 4), ('knn', 7), ('rf', 3),
                                          ('gbdt', 1), ('nb', 1),
                                          ('mlp', 2)])
def test_default_grid_sizes(family, size):
    grid = default_grid(family)
    assert len(grid) == size
    assert all(hp.family == family for hp in grid.candidates)


def test_default_grid_values():
    assert [hp.C for hp in default_grid('svm').candidates] == [
        0.001, 0.1, 1.0, 10.0
    ]
    assert [hp.k for hp in default_grid('knn').candidates] == list(
        range(3, 16, 2))
    gbdt = default_grid('gbdt').candidates[0]
    assert (gbdt.iterations, gbdt.learning_rate, gbdt.depth,
            gbdt.l2_leaf_reg) == (1000, 0.1, 10, 5.0)


def test_make_grid_fills_defaults():
    grid = make_grid('svm', [dict(C=0.5)])
    assert grid.candidates[0].tol == 1e-3
    with pytest.raises(TuningError):
        make_grid('svm', [])
    with pytest.raises(TuningError):
        make_grid('svm', [dict(family='knn', k=3)])


def test_grid_search_keeps_the_best_candidate(separable):
    train, val = separable.subset(range(80)), separable.subset(range(80, 120))
    # heavy smoothing flattens the likelihoods: every app looks benign
    grid = make_grid('nb', [dict(alpha=1e6), dict(alpha=1.0)])
    result = grid_search(grid, train, val, seed=0)
    assert [row.index for row in result.table] == [0, 1]
    assert result.table[0].val_f1 == 0.0
    assert result.best_index == 1
    assert result.best.hparams.alpha == 1.0
    assert result.best_f1 == max(row.val_f1 for row in result.table)


def test_ties_go_to_the_earliest_candidate(separable):
    train, val = separable.subset(range(80)), separable.subset(range(80, 120))
    grid = make_grid('nb', [dict(alpha=1.0), dict(alpha=1.0)])
    assert grid_search(grid, train, val).best_index == 0


def test_thread_count_does_not_change_the_search(separable):
    train, val = separable.subset(range(80)), separable.subset(range(80, 120))
    grid = default_grid('knn')
    a = grid_search(grid, train, val, seed=1, n_jobs=1)
    b = grid_search(grid, train, val, seed=1, n_jobs=3)
    assert a.table == b.table and a.best_index == b.best_index


def test_validation_without_malware(separable):
    benign = np.flatnonzero(separable.labels == 0)
    with pytest.raises(TuningError, match='no malware'):
        grid_search(default_grid('nb'), separable,
                    separable.subset(benign[:10]))


def test_split_validation(make_dataset):
    data = make_dataset([1, 0, 0, 1, 0, 0, 0, 1, 0, 1])
    fit_ids, val_ids = split_validation(data, np.arange(10), 0.2)
    assert val_ids.tolist() == [8, 9]
    assert fit_ids.tolist() == list(range(8))
    # held-out part without malware
    assert split_validation(data, np.arange(7), 0.2) is None


@pytest.mark.parametrize('family', ['knn', 'svm'])
def test_reported_f1_is_the_best_model_on_validation(separable, family):
    train, val = separable.subset(range(80)), separable.subset(range(80, 120))
    result = grid_search(default_grid(family), train, val, seed=5)
    recomputed = f1_score(val.labels, result.best.predict(val))
    assert recomputed == result.best_f1
