from . import datasets, features, metrics, models, splits, training, utils
from . import cli
from .errors import DriftBenchError
from .version import __version__

__all__ = ['__version__', 'DriftBenchError',
           'datasets', 'features', 'splits', 'models',
           'training', 'metrics', 'utils', 'cli']
