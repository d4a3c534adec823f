import math

import numpy as np
import pytest

from driftbench.errors import FeatureError
from driftbench.features import (FeatureVocabulary, load_vocabulary,
                                 rank_and_select, save_vocabulary,
                                 vectorize)


@pytest.fixture
def corpus(make_corpus):
    return make_corpus([
        (0, 1, ['permission::SEND_SMS', 'api_call::b', 'url::x']),
        (1, 1, ['permission::SEND_SMS', 'api_call::a', 'url::x']),
        (2, 0, ['intent::MAIN', 'api_call::b']),
        (3, 0, ['intent::MAIN', 'api_call::a']),
    ])


def test_rank_by_mi_then_feature_string(corpus):
    vocab = rank_and_select(corpus, top_n=10)
    # three perfect predictors tie at ln 2, two useless features at 0
    assert vocab.features == [
        'intent::MAIN', 'permission::SEND_SMS', 'url::x', 'api_call::a',
        'api_call::b'
    ]
    assert vocab.entries[0].mi == math.log(2)
    assert vocab['url::x'] == 2


def test_top_n_truncates(corpus):
    vocab = rank_and_select(corpus, top_n=2)
    assert vocab.features == ['intent::MAIN', 'permission::SEND_SMS']
    with pytest.raises(FeatureError):
        rank_and_select(corpus, top_n=0)


def test_vectorize_drops_unknown_features(corpus, make_corpus):
    vocab = rank_and_select(corpus, top_n=3)
    later = make_corpus([(9, 1, ['url::x', 'api_call::zzz']), (10, 0, [])])
    data = vectorize(later, vocab)
    assert data.vocab_size == 3
    assert [r.tolist() for r in data.rows] == [[2], []]
    np.testing.assert_array_equal(data.labels, [1, 0])


def test_vocabulary_file_round_trip(tmp_path, corpus):
    vocab = rank_and_select(corpus, top_n=5)
    path = save_vocabulary(vocab, str(tmp_path / 'vocab.tsv'))
    assert open(path).readline() == '0\tintent::MAIN\t0.69314718056\n'
    loaded = load_vocabulary(path)
    assert loaded.features == vocab.features
    np.testing.assert_allclose([e.mi for e in loaded.entries],
                               [e.mi for e in vocab.entries], rtol=1e-11)


def test_vocabulary_order_is_validated():
    with pytest.raises(FeatureError, match='out of order'):
        FeatureVocabulary([('b', 0.5), ('a', 0.6)])
    with pytest.raises(FeatureError, match='out of order'):
        FeatureVocabulary([('b', 0.5), ('a', 0.5)])
    with pytest.raises(FeatureError, match='duplicate'):
        FeatureVocabulary([('a', 0.5), ('a', 0.4)])


def test_full_vocabulary_encodes_without_loss(corpus):
    vocab = rank_and_select(corpus, top_n=len(corpus.features) * 10)
    data = vectorize(corpus, vocab)
    decoded = [{vocab.features[j] for j in row} for row in data.rows]
    assert decoded == [set(feats) for feats in corpus.features]
    np.testing.assert_array_equal(data.labels, corpus.labels)
    np.testing.assert_array_equal(data.timestamps, corpus.timestamps)
    assert data.sha256 == list(corpus.sha256)
