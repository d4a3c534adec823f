from .bunchdict import BunchDict
from .functions import repeat, topk
from .io import atomic_write, config_hash, read_json, write_csv, write_json
from .logger import get_logger, setup_logger
from .seed import derive_seed, make_rng

classes = __all__ = [
    'BunchDict',
    'topk',
    'repeat',
    'setup_logger',
    'get_logger',
    'derive_seed',
    'make_rng',
    'atomic_write',
    'write_json',
    'read_json',
    'write_csv',
    'config_hash',
]
