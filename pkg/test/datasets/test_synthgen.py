import numpy as np
import pytest

from driftbench.datasets import (SynthSpec, bayes_optimal_scores,
                                 date_to_day, feature_names, generate)
from driftbench.errors import SynthError
from driftbench.metrics import f1_score


def small_spec(**kwargs):
    values = dict(seed=3, n_apps=2000, malware_ratio=0.1, vocab_size=40,
                  n_informative=5)
    values.update(kwargs)
    return SynthSpec.build(**values)


def test_generation_is_deterministic_and_thread_independent():
    spec = small_spec(n_apps=9000)
    a = generate(spec, n_jobs=1)
    b = generate(spec, n_jobs=3)
    assert a.records == b.records
    assert a.features == b.features


def test_exact_malware_count_and_time_span():
    spec = small_spec(n_apps=1234, malware_ratio=0.1)
    synth = generate(spec)
    assert sum(r.label for r in synth.records) == 123
    days = np.array([r.timestamp for r in synth.records])
    assert days.min() >= spec.start_day
    assert days.max() < spec.start_day + spec.span_days


def test_drift_rotates_the_profiles():
    day = date_to_day('2013-01-01')
    spec = small_spec(n_apps=6000, drift=[(day, 20)])
    corpus = generate(spec).to_corpus()
    informative = set(feature_names(spec.vocab_size)[:5])
    before, after = [], []
    for r, feats in zip(corpus.records, corpus.features):
        if r.label == 1:
            hits = len(informative & feats)
            (after if r.timestamp >= day else before).append(hits)
    # malware features 0-4 are frequent only before the drift
    assert np.mean(before) > 2.0
    assert np.mean(after) < 1.0


def test_bayes_optimal_scores_separate_the_classes():
    day = date_to_day('2013-01-01')
    spec = small_spec(vocab_size=200, n_informative=20, drift=[(day, 40)])
    corpus = generate(spec).to_corpus()
    scores = bayes_optimal_scores(spec, corpus)
    assert np.all((scores >= 0) & (scores <= 1))
    predicted = (scores >= 0.5).astype(int)
    assert f1_score(corpus.labels, predicted) >= 0.98


@pytest.mark.parametrize('kwargs', [
    dict(malware_ratio=0.0),
    dict(malware_ratio=1.0),
    dict(drift=[(0, 40)]),
])
def test_invalid_specs(kwargs):
    with pytest.raises(SynthError):
        generate(small_spec(**kwargs))


def test_too_many_informative_features():
    with pytest.raises(SynthError):
        SynthSpec.build(vocab_size=10, n_informative=6)
