import configparser
import os
from typing import Any, Dict, Optional

from driftbench.errors import ConfigError
from driftbench.models import FAMILIES
from driftbench.training import Grid, default_grid, make_grid
from driftbench.utils import BunchDict

THREADS_ENV = "DRIFTBENCH_THREADS"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'corpus': dict(manifest='', features='', path='corpus.txt'),
    'features': dict(top_n=2919, scope='train', initial_span=12,
                     train_end=''),
    'windows': dict(batch_size=5000, mal_per_batch=300, train_batches='6',
                    models='nb,knn,svm,rf,gbdt,mlp'),
    'models': dict(),
    'active': dict(initial_span=12, budget='50', model='svm',
                   weighting='uniform', retune=False),
    'synth': dict(n_apps=10000, malware_ratio=0.10, vocab_size=200,
                  n_informative=20, p_informative=0.6, p_background=0.05,
                  start='2012-01-01', span_days=730, drift=''),
    'run': dict(seed=0, out='run', threads=0, threshold=0.5),
}


class RunConfig(BunchDict):
    """Run configuration: one :class:`BunchDict` per section.

    Values come from the built-in :data:`DEFAULTS`, overridden by the
    configuration file, overridden by command-line flags.

    Example
    -------
    >>> config = RunConfig.from_file('bench.ini')
    >>> config.windows.batch_size
    5000
    """
    @classmethod
    def defaults(cls) -> "RunConfig":
        return cls({name: BunchDict(values)
                    for name, values in DEFAULTS.items()})

    @classmethod
    def from_file(cls, path: Optional[str] = None) -> "RunConfig":
        """Read an INI file on top of the defaults.

        Keys of the ``[models]`` section have the form
        ``<family>.<hyperparameter>`` and take a comma-separated list
        of values; the grid of a family is the product of its lists.
        """
        config = cls.defaults()
        if not path:
            return config
        if not os.path.isfile(path):
            raise ConfigError(f"configuration file '{path}' not found.")
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read(path, encoding='utf-8')
        except configparser.Error as e:
            raise ConfigError(f"{path}: {e}") from None

        for section in parser.sections():
            if section not in DEFAULTS:
                raise ConfigError(f"{path}: unknown section [{section}].")
            for key, raw in parser.items(section):
                if section == 'models':
                    family, _, param = key.partition('.')
                    if family not in FAMILIES or not param:
                        raise ConfigError(f"{path}: [models] keys must look "
                                          f"like '<family>.<name>', "
                                          f"got '{key}'.")
                    config.models[key] = raw
                    continue
                if key not in DEFAULTS[section]:
                    raise ConfigError(f"{path}: unknown key '{key}' in "
                                      f"[{section}].")
                config[section][key] = coerce(raw, DEFAULTS[section][key],
                                              f"{path}: [{section}] {key}")
        return config

    def override(self, section: str, **values) -> "RunConfig":
        """Set the values that are not ``None`` (command-line flags)."""
        for key, value in values.items():
            if value is not None:
                self[section][key] = value
        return self

    def grid(self, family: str) -> Grid:
        """The grid of :obj:`family`: the ``[models]`` entries of that
        family, or its default grid."""
        lists = {
            key.partition('.')[2]: [parse_value(v) for v in split_list(raw)]
            for key, raw in self.models.items()
            if key.partition('.')[0] == family
        }
        if not lists:
            return default_grid(family)
        candidates = [dict()]
        for name, values in lists.items():
            candidates = [dict(c, **{name: v}) for c in candidates
                          for v in values]
        return make_grid(family, candidates)


def split_list(raw: str):
    return [item.strip() for item in str(raw).split(',') if item.strip()]


def parse_value(raw: str):
    """Best-effort scalar parsing of a configuration value."""
    lowered = raw.lower()
    if lowered in ('true', 'false'):
        return lowered == 'true'
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def coerce(raw: str, default: Any, where: str):
    try:
        if isinstance(default, bool):
            if raw.lower() not in ('true', 'false', 'yes', 'no', '1', '0'):
                raise ValueError(raw)
            return raw.lower() in ('true', 'yes', '1')
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse '{raw}' as "
                          f"{type(default).__name__}.") from None
    return raw


def resolve_threads(flag: Optional[int], configured: int = 0) -> int:
    """``--threads``, else the configured value, else
    ``$DRIFTBENCH_THREADS``, else 1."""
    for value in (flag, configured or None):
        if value is not None:
            return check_threads(value, "--threads")
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return check_threads(int(env), THREADS_ENV)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, "
                              f"got '{env}'.") from None
    return 1


def check_threads(value: int, name: str) -> int:
    if int(value) < 1:
        raise ConfigError(f"{name} must be >= 1, got {value}.")
    return int(value)


def int_list(raw, name: str):
    try:
        values = [int(v) for v in split_list(raw)]
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated list of "
                          f"integers, got '{raw}'.") from None
    if not values:
        raise ConfigError(f"{name} is empty.")
    return values
