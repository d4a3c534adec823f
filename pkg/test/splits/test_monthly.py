import numpy as np
import pytest

from driftbench.datasets import date_to_day
from driftbench.errors import WindowError
from driftbench.splits import month_index, plan_monthly


def days(*dates):
    return [date_to_day(d) for d in dates]


def test_month_index():
    index = month_index(days('1970-01-31', '1970-02-01', '2013-12-31',
                             '2014-01-01'))
    assert index.tolist() == [0, 1, 527, 528]


def test_initial_period_and_months(make_dataset):
    stamps = days('2012-01-05', '2012-06-30', '2012-12-31', '2013-01-01',
                  '2013-01-20', '2013-03-02', '2013-03-31')
    data = make_dataset([0, 1, 0, 1, 0, 0, 1], timestamps=stamps)
    split = plan_monthly(data, initial_span=12)
    assert split.initial_train.tolist() == [0, 1, 2]
    # empty months are skipped
    assert [m.tag for m in split.months] == ['2013-01', '2013-03']
    assert split.months[0].row_ids.tolist() == [3, 4]
    assert split.months[1].row_ids.tolist() == [5, 6]


def test_span_counts_calendar_months(make_dataset):
    stamps = days('2012-01-31', '2012-02-01', '2012-03-15')
    data = make_dataset([0, 1, 0], timestamps=stamps)
    split = plan_monthly(data, initial_span=1)
    assert split.initial_train.tolist() == [0]
    assert [m.tag for m in split.months] == ['2012-02', '2012-03']


def test_every_row_is_used_once(drifting):
    split = plan_monthly(drifting, initial_span=12)
    ids = np.concatenate([split.initial_train] +
                         [m.row_ids for m in split.months])
    np.testing.assert_array_equal(np.sort(ids), np.arange(len(drifting)))
    assert len(split.months) == 12


def test_nothing_to_test(make_dataset):
    data = make_dataset([0, 1], timestamps=days('2012-01-01', '2012-05-01'))
    with pytest.raises(WindowError, match='nothing to test'):
        plan_monthly(data, initial_span=12)
    with pytest.raises(WindowError):
        plan_monthly(data, initial_span=0)
