import numpy as np
import pytest

from driftbench.datasets import AppRecord, RawCorpus, SparseDataset


def sha(i: int) -> str:
    return f"{i:064x}"


@pytest.fixture
def make_corpus():
    """``make_corpus([(day, label, ['cat::a', ...]), ...])``"""
    def factory(rows):
        records = [
            AppRecord(sha256=sha(i), timestamp=day, label=label)
            for i, (day, label, _) in enumerate(rows)
        ]
        return RawCorpus(records, [feats for _, _, feats in rows])

    return factory


@pytest.fixture
def make_dataset():
    """``make_dataset(labels, timestamps=None, rows=None, vocab_size=4)``;
    timestamps default to ``0..n-1`` and rows to random subsets."""
    def factory(labels, timestamps=None, rows=None, vocab_size=4, seed=0):
        labels = list(labels)
        n = len(labels)
        if timestamps is None:
            timestamps = list(range(n))
        if rows is None:
            rng = np.random.default_rng(seed)
            rows = [np.flatnonzero(rng.random(vocab_size) < 0.3)
                    for _ in range(n)]
        return SparseDataset.from_rows(rows, labels, timestamps,
                                       [sha(i) for i in range(n)],
                                       vocab_size=vocab_size)

    return factory


@pytest.fixture
def separable():
    """120 rows over 10 features: features 0-2 mark malware,
    features 3-5 benign apps, 6-9 are noise."""
    rng = np.random.default_rng(7)
    labels = (np.arange(120) % 4 == 0).astype(np.int8)
    rows = []
    for y in labels:
        informative = [0, 1, 2] if y else [3, 4, 5]
        keep = [j for j in informative if rng.random() < 0.8] or informative
        noise = [j for j in range(6, 10) if rng.random() < 0.3]
        rows.append(sorted(keep + noise))
    return SparseDataset.from_rows(rows, labels, np.arange(120),
                                   [sha(i) for i in range(120)],
                                   vocab_size=10)


@pytest.fixture(scope='session')
def drifting():
    """Two years of synthetic apps whose class profiles rotate on
    2013-01-01, vectorized over all 40 features."""
    from driftbench.datasets import SynthSpec, date_to_day, generate
    from driftbench.features import rank_and_select, vectorize

    spec = SynthSpec.build(seed=0, n_apps=2400, malware_ratio=0.1,
                           vocab_size=40, n_informative=5,
                           drift=[(date_to_day('2013-01-01'), 10)])
    corpus = generate(spec).to_corpus()
    return vectorize(corpus, rank_and_select(corpus, top_n=40))
