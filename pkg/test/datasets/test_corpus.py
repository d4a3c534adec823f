import numpy as np
import pytest

from driftbench.datasets import (AppRecord, RawCorpus, corpus_summary,
                                 date_to_day, day_to_date, load_corpus,
                                 load_feature_files, load_manifest,
                                 save_corpus)
from driftbench.datasets import write_manifest as write_manifest_file
from driftbench.errors import CorpusError

from conftest import sha

HEADER = "sha256,label,first_seen,source\n"


def write_manifest(tmp_path, lines):
    path = tmp_path / 'manifest.csv'
    path.write_text(HEADER + ''.join(f"{line}\n" for line in lines))
    return str(path)


def test_dates_round_trip():
    assert date_to_day('1970-01-01') == 0
    assert date_to_day('2018-03-05') == 17595
    assert day_to_date(17595) == '2018-03-05'
    with pytest.raises(ValueError):
        date_to_day('2018/03/05')


def test_corpus_is_sorted_by_time_then_hash():
    records = [
        AppRecord(sha(3), 5, 1),
        AppRecord(sha(2), 5, 0),
        AppRecord(sha(1), 9, 0),
        AppRecord(sha(4), 1, 1),
    ]
    corpus = RawCorpus(records, [['a::1'], ['a::2'], ['a::3'], ['a::4']])
    assert corpus.sha256 == [sha(4), sha(2), sha(3), sha(1)]
    assert corpus.features[0] == frozenset({'a::4'})
    np.testing.assert_array_equal(corpus.timestamps, [1, 5, 5, 9])
    assert len(corpus.before(5)) == 1


def test_duplicate_hash_is_rejected():
    with pytest.raises(CorpusError, match='duplicate'):
        RawCorpus([AppRecord(sha(1), 0, 0), AppRecord(sha(1), 2, 1)],
                  [[], []])


def test_load_manifest(tmp_path):
    path = write_manifest(tmp_path, [
        f"{sha(1)},1,2012-01-05,vt",
        f"{sha(2)},0,2012-02-01,",
    ])
    records = load_manifest(path)
    assert [r.label for r in records] == [1, 0]
    assert records[0].timestamp == date_to_day('2012-01-05')
    assert records[0].source == 'vt' and records[1].source is None


@pytest.mark.parametrize('line, message', [
    ("xyz,1,2012-01-05,", "malformed sha256"),
    (f"{sha(9)},2,2012-01-05,", "unknown label"),
    (f"{sha(9)},1,05/01/2012,", "unparseable date"),
    (f"{sha(1)},1,2012-01-05,", "duplicate sha256"),
])
def test_manifest_errors_cite_the_line(tmp_path, line, message):
    path = write_manifest(tmp_path, [f"{sha(1)},0,2012-01-01,", line])
    with pytest.raises(CorpusError, match=message) as info:
        load_manifest(path)
    assert f"{path}:3" in str(info.value)
    assert str(info.value).startswith('[corpus]')


def test_manifest_header_is_checked(tmp_path):
    path = tmp_path / 'm.csv'
    path.write_text("hash,label\n")
    with pytest.raises(CorpusError, match='header'):
        load_manifest(str(path))


def test_feature_files(tmp_path):
    path = write_manifest(tmp_path, [
        f"{sha(1)},1,2012-01-05,",
        f"{sha(2)},0,2012-01-01,",
    ])
    feats = tmp_path / 'features'
    feats.mkdir()
    (feats / f"{sha(1)}.txt").write_text(
        "permission::SEND_SMS\n\nurl::x.com\npermission::SEND_SMS\n")
    (feats / f"{sha(2)}.txt").write_text("")
    corpus = load_feature_files(load_manifest(path), str(feats), n_jobs=2)
    assert corpus.sha256 == [sha(2), sha(1)]
    assert corpus.features[1] == {'permission::SEND_SMS', 'url::x.com'}
    assert corpus.features[0] == frozenset()


def test_missing_feature_files_are_all_listed(tmp_path):
    path = write_manifest(tmp_path, [
        f"{sha(1)},1,2012-01-05,",
        f"{sha(2)},0,2012-01-01,",
    ])
    with pytest.raises(CorpusError) as info:
        load_feature_files(load_manifest(path), str(tmp_path))
    assert sha(1) in str(info.value) and sha(2) in str(info.value)


def test_feature_line_without_separator(tmp_path):
    path = write_manifest(tmp_path, [f"{sha(1)},1,2012-01-05,"])
    (tmp_path / f"{sha(1)}.txt").write_text("SEND_SMS\n")
    with pytest.raises(CorpusError, match=':1:'):
        load_feature_files(load_manifest(path), str(tmp_path))


def test_save_and_load_corpus(tmp_path, make_corpus):
    corpus = make_corpus([
        (10, 1, ['permission::A', 'api_call::b']),
        (3, 0, []),
        (10, 0, ['url::c']),
    ])
    path = save_corpus(corpus, str(tmp_path / 'corpus.txt'))
    assert load_corpus(path) == corpus
    assert open(path).readline() == 'driftbench-corpus v1\n'


def test_corrupted_corpus_is_rejected(tmp_path, make_corpus):
    corpus = make_corpus([(10, 1, ['permission::A']), (11, 0, ['url::c'])])
    path = tmp_path / 'corpus.txt'
    save_corpus(corpus, str(path))
    text = path.read_text()

    path.write_text(text.replace('corpus v1', 'corpus v2'))
    with pytest.raises(CorpusError, match='expected'):
        load_corpus(str(path))

    path.write_text(text[:-len('url::c\n')])
    with pytest.raises(CorpusError):
        load_corpus(str(path))


def test_corpus_summary(make_corpus):
    corpus = make_corpus([
        (date_to_day('2012-03-01'), 1, []),
        (date_to_day('2012-07-01'), 0, []),
        (date_to_day('2013-01-01'), 0, []),
    ])
    table = corpus_summary(corpus)
    assert table.to_dict(orient='records') == [
        dict(year=2012, malicious=1, benign=1, total=2),
        dict(year=2013, malicious=0, benign=1, total=1),
    ]


def test_quoted_source_survives_persistence(tmp_path):
    path = write_manifest(tmp_path, [
        f'{sha(1)},1,2012-01-05,"play,cn"',
        f'{sha(2)},0,2012-01-06,"say ""hi"""',
    ])
    records = load_manifest(path)
    assert records[0].source == 'play,cn'
    assert records[1].source == 'say "hi"'
    corpus = RawCorpus(records, [['url::a'], []])
    saved = save_corpus(corpus, str(tmp_path / 'corpus.txt'))
    assert load_corpus(saved) == corpus

    copy = write_manifest_file(records, str(tmp_path / 'copy.csv'))
    assert load_manifest(copy) == records


def test_malformed_manifest_line_is_a_corpus_error(tmp_path):
    path = write_manifest(tmp_path, [
        f"{sha(1)},1,2012-01-05,play",
        f"{sha(2)},0,2012-01-06,play,extra",
    ])
    with pytest.raises(CorpusError, match='malformed manifest') as info:
        load_manifest(path)
    assert f"{path}:3" in str(info.value)


def test_multiline_source_is_rejected(tmp_path):
    path = write_manifest(tmp_path, [f'{sha(1)},1,2012-01-05,"a\nb"'])
    with pytest.raises(CorpusError, match='one line'):
        load_manifest(path)


def ingest(tmp_path, name, feature_lines):
    root = tmp_path / name
    feats = root / 'features'
    feats.mkdir(parents=True)
    path = write_manifest(root, [
        f"{sha(1)},1,2012-01-05,vt",
        f"{sha(2)},0,2012-01-01,",
    ])
    for i, lines in feature_lines.items():
        (feats / f"{sha(i)}.txt").write_text(''.join(f"{x}\n" for x in lines))
    corpus = load_feature_files(load_manifest(path), str(feats))
    saved = save_corpus(corpus, str(root / 'corpus.txt'))
    with open(saved, 'rb') as f:
        return corpus, f.read()


def test_feature_line_order_does_not_matter(tmp_path):
    a, a_bytes = ingest(tmp_path, 'a', {1: ['url::x', 'intent::y'],
                                        2: ['permission::P', 'url::x']})
    b, b_bytes = ingest(tmp_path, 'b', {1: ['intent::y', 'url::x'],
                                        2: ['url::x', 'permission::P']})
    c, c_bytes = ingest(tmp_path, 'c', {1: ['url::x', 'intent::y'],
                                        2: ['permission::P', 'url::x']})
    assert a == b
    assert a_bytes == b_bytes == c_bytes
