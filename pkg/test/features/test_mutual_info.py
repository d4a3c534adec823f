import math
from decimal import Decimal, getcontext

import numpy as np
import pytest

from driftbench.errors import FeatureError
from driftbench.features import (contingency_table, count_contingency,
                                 mutual_information)


def reference_mi(n11, n10, n01, n00):
    """Mutual information evaluated with 50-digit decimals."""
    getcontext().prec = 50
    cells = [Decimal(int(n)) for n in (n11, n10, n01, n00)]
    c11, c10, c01, c00 = cells
    total = sum(cells)
    rows = {(1, 1): c11 + c10, (1, 0): c11 + c10,
            (0, 1): c01 + c00, (0, 0): c01 + c00}
    cols = {(1, 1): c11 + c01, (0, 1): c11 + c01,
            (1, 0): c10 + c00, (0, 0): c10 + c00}
    mi = Decimal(0)
    for key, n in zip([(1, 1), (1, 0), (0, 1), (0, 0)], cells):
        if n:
            mi += n / total * (n * total / (rows[key] * cols[key])).ln()
    return float(mi)


def test_matches_high_precision_reference():
    rng = np.random.default_rng(2024)
    tables = rng.integers(0, 1000, size=(500, 4))
    tables[rng.random(500) < 0.2, rng.integers(0, 4)] = 0
    tables[tables.sum(axis=1) == 0, 0] = 1
    got = mutual_information(*tables.T)
    for table, value in zip(tables, got):
        expected = reference_mi(*table)
        assert abs(value - expected) <= 1e-10 * expected + 1e-14


@pytest.mark.parametrize('table', [(2, 0, 0, 2), (0, 7, 7, 0)])
def test_perfect_predictor_is_ln2(table):
    assert mutual_information(*table) == math.log(2)


@pytest.mark.parametrize('table', [(1, 1, 1, 1), (2, 4, 3, 6), (0, 5, 0, 3)])
def test_independent_feature_is_zero(table):
    assert mutual_information(*table) == 0.0


def test_symmetric_in_labels():
    assert mutual_information(3, 1, 2, 9) == pytest.approx(
        mutual_information(1, 3, 9, 2), abs=1e-15)


def test_rejects_empty_and_negative_tables():
    with pytest.raises(FeatureError):
        mutual_information(0, 0, 0, 0)
    with pytest.raises(FeatureError):
        mutual_information(-1, 2, 2, 2)


def test_contingency_counts(make_corpus):
    corpus = make_corpus([
        (0, 1, ['permission::SEND_SMS', 'url::a']),
        (1, 1, ['permission::SEND_SMS']),
        (2, 0, ['permission::SEND_SMS']),
        (3, 0, ['url::a']),
        (4, 1, []),
    ])
    assert count_contingency(corpus, 'permission::SEND_SMS') == (2, 1, 1, 1)
    assert count_contingency(corpus, 'intent::never') == (0, 0, 3, 2)

    features, counts = contingency_table(corpus)
    assert features == ['permission::SEND_SMS', 'url::a']
    np.testing.assert_array_equal(counts, [[2, 1, 1, 1], [1, 1, 2, 1]])


def test_empty_slice(make_corpus):
    with pytest.raises(FeatureError, match='empty'):
        contingency_table(make_corpus([]))


def test_doubling_every_count_keeps_the_value():
    rng = np.random.default_rng(7)
    tables = rng.integers(1, 500, size=(200, 4))
    np.testing.assert_allclose(mutual_information(*(2 * tables).T),
                               mutual_information(*tables.T),
                               rtol=1e-12, atol=1e-15)
