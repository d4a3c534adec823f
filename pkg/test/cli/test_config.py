import pytest

from driftbench.cli import RunConfig, resolve_threads
from driftbench.cli.commands import parse_drift
from driftbench.cli.config import THREADS_ENV
from driftbench.datasets import date_to_day
from driftbench.errors import ConfigError


def write_ini(tmp_path, text):
    path = tmp_path / 'bench.ini'
    path.write_text(text)
    return str(path)


def test_defaults():
    config = RunConfig.from_file(None)
    assert config.windows.batch_size == 5000
    assert config.windows.mal_per_batch == 300
    assert config.features.top_n == 2919
    assert config.run.seed == 0
    assert config.active.retune is False


def test_file_overrides_defaults(tmp_path):
    path = write_ini(tmp_path, """
[windows]
batch_size = 200
models = nb,svm

[active]
retune = yes

[run]
threshold = 0.4
""")
    config = RunConfig.from_file(path)
    assert config.windows.batch_size == 200
    assert config.windows.models == 'nb,svm'
    assert config.active.retune is True
    assert config.run.threshold == 0.4
    assert config.windows.mal_per_batch == 300


def test_flags_override_file(tmp_path):
    path = write_ini(tmp_path, "[run]\nseed = 3\n")
    config = RunConfig.from_file(path).override('run', seed=9, out=None)
    assert config.run.seed == 9
    assert config.run.out == 'run'


@pytest.mark.parametrize('text, match', [
    ("[plots]\nwidth = 3\n", 'unknown section'),
    ("[windows]\nbatchsize = 3\n", 'unknown key'),
    ("[windows]\nbatch_size = many\n", 'cannot parse'),
    ("[models]\nsvm = 1\n", "<family>.<name>"),
    ("[models]\nlasso.alpha = 1\n", "<family>.<name>"),
])
def test_invalid_files(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        RunConfig.from_file(write_ini(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        RunConfig.from_file(str(tmp_path / 'absent.ini'))


def test_model_grid_is_the_product_of_lists(tmp_path):
    path = write_ini(tmp_path, """
[models]
rf.n_trees = 10, 20
rf.max_depth = 3, 5, 8
""")
    grid = RunConfig.from_file(path).grid('rf')
    pairs = [(hp.n_trees, hp.max_depth) for hp in grid.candidates]
    assert len(pairs) == 6
    assert (20, 5) in pairs
    assert all(hp.max_features == "sqrt" for hp in grid.candidates)
    # families without entries keep their default grid
    svm = RunConfig.from_file(path).grid('svm')
    assert [hp.C for hp in svm.candidates] == [0.001, 0.1, 1.0, 10.0]


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(None) == 1
    monkeypatch.setenv(THREADS_ENV, '3')
    assert resolve_threads(None) == 3
    assert resolve_threads(None, configured=2) == 2
    assert resolve_threads(5, configured=2) == 5
    with pytest.raises(ConfigError):
        resolve_threads(0)
    monkeypatch.setenv(THREADS_ENV, 'four')
    with pytest.raises(ConfigError, match=THREADS_ENV):
        resolve_threads(None)


def test_parse_drift():
    assert parse_drift('') == []
    assert parse_drift('2013-01-01:40, 2013-07-01:20') == [
        (date_to_day('2013-01-01'), 40), (date_to_day('2013-07-01'), 20)]
    with pytest.raises(ConfigError):
        parse_drift('2013-01-01')
    with pytest.raises(ConfigError):
        parse_drift('2013-13-01:4')
