import contextlib
import hashlib
import json
import os
import tempfile
from typing import Any, Iterator, Optional, TextIO

import pandas as pd

from driftbench.utils.bunchdict import to_builtin

__all__ = ["atomic_write", "write_json", "read_json", "write_csv",
           "config_hash"]


@contextlib.contextmanager
def atomic_write(path: str, mode: str = 'w') -> Iterator[TextIO]:
    """Write to a temporary file next to :obj:`path` and
    atomically replace the destination on success.

    Example
    -------
    >>> with atomic_write('out/report.json') as f:
    ...     f.write('{}')
    """
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{os.path.basename(path)}.",
                               suffix=".tmp", dir=dirname)
    encoding = None if 'b' in mode else 'utf-8'
    newline = None if 'b' in mode else '\n'
    try:
        with os.fdopen(fd, mode, encoding=encoding, newline=newline) as f:
            yield f
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.remove(tmp)
        raise


def dumps(obj: Any) -> str:
    return json.dumps(to_builtin(obj), indent=2, sort_keys=True) + "\n"


def write_json(obj: Any, path: str) -> str:
    with atomic_write(path) as f:
        f.write(dumps(obj))
    return path


def read_json(path: str) -> Any:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_csv(frame: pd.DataFrame, path: str,
              comment: Optional[str] = None) -> str:
    """Write :obj:`frame` without index, optionally preceded by a
    single ``# <comment>`` line."""
    with atomic_write(path) as f:
        if comment:
            f.write(f"# {comment}\n")
        frame.to_csv(f, index=False, lineterminator='\n',
                     float_format='%.6f')
    return path


def config_hash(config: Any) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    canonical = json.dumps(to_builtin(config), sort_keys=True,
                           separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
