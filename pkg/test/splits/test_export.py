from driftbench.splits import make_batches, plan_to_dict, plan_windows
from driftbench.utils import read_json, write_json


def test_plan_is_auditable(tmp_path, make_dataset):
    labels = [int(i % 4 == 0) for i in range(48)]
    data = make_dataset(labels, rows=[[] for _ in labels])
    batches = make_batches(data, batch_size=8, mal_per_batch=2)
    plan = plan_windows(batches, n_train=2)
    doc = plan_to_dict(data, batches, plan)

    assert len(doc.windows) == 3
    assert doc.windows[0] == dict(index=0, train_batches=[0, 1], val_batch=2,
                                  test_batch=3, n_train=16, n_val=8,
                                  n_test=8)
    assert doc.batches[0].first_seen == '1970-01-01'
    assert doc.batches[0].first_sha256 == data.sha256[0]

    path = write_json(doc, str(tmp_path / 'plan.json'))
    assert read_json(path)['n_train_batches'] == 2
