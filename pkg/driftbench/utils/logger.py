import functools
import logging
import os
import sys
from typing import Optional

try:
    from termcolor import colored
except ImportError:
    colored = None

__all__ = ["setup_logger", "get_logger"]

ROOT = "driftbench"
DATEFMT = "%m/%d %H:%M:%S"
PLAIN_FORMAT = "[%(asctime)s] %(name)s %(levelname)s: %(message)s"


def setup_logger(output: Optional[str] = None, name: str = ROOT, *,
                 mode: str = 'w', color: bool = True,
                 level: int = logging.INFO) -> logging.Logger:
    """Route the records of the :obj:`name` logger tree to stderr and,
    optionally, to a log file.

    Calling it again replaces the handlers installed by the previous
    call, so a process running several commands logs each of them
    once.

    Parameters
    ----------
    output : Optional[str], optional
        a run directory (logs go to ``<output>/log.txt``) or a file
        ending in ``.txt``/``.log``; no file when None, by default None
    name : str, optional
        the root logger name, by default "driftbench"
    mode : str, optional
        file mode of the log file, by default 'w'
    color : bool, optional
        colored stderr records, needs `termcolor`, by default True
    level : int, optional
        verbosity of the stderr handler, by default :obj:`logging.INFO`;
        the log file always records DEBUG

    Returns
    -------
    logging.Logger
        the configured root logger

    Example
    -------
    >>> logger = setup_logger(output='run')
    >>> logger.info('k=4: 22 window(s) x 6 model(s).')
    [10/18 09:12:03 driftbench]: k=4: 22 window(s) x 6 model(s).
    >>> get_logger('driftbench.splits.batches').warning('...')
    """
    if color and colored is None:
        raise RuntimeError("Please install 'termcolor' to use colored outputs"
                           " when printing.")

    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    logger.propagate = False
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    console = logging.StreamHandler(stream=sys.stderr)
    console.setLevel(level)
    if color:
        console.setFormatter(_LevelFormatter(
            colored("[%(asctime)s %(name)s]: ", "green") + "%(message)s",
            datefmt=DATEFMT, root_name=name))
    else:
        console.setFormatter(logging.Formatter(PLAIN_FORMAT, DATEFMT))
    logger.addHandler(console)

    if output is not None:
        if output.endswith((".txt", ".log")):
            filename = output
        else:
            filename = os.path.join(output, "log.txt")
        logger.addHandler(_file_handler(os.path.abspath(filename), mode))
    return logger


# one handler per file: repeated commands on a run directory share it
@functools.lru_cache(maxsize=None)
def _file_handler(filename: str, mode: str) -> logging.FileHandler:
    dirname = os.path.dirname(filename)
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    handler = logging.FileHandler(filename=filename, mode=mode,
                                  encoding='utf-8')
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(PLAIN_FORMAT, DATEFMT))
    return handler


def get_logger(name: str = ROOT) -> logging.Logger:
    """Module loggers: ``get_logger(__name__)`` is a child of the
    ``driftbench`` root and inherits its handlers."""
    return logging.getLogger(name)


class _LevelFormatter(logging.Formatter):
    """Shortens ``driftbench.models.svm`` to ``models.svm`` and
    prefixes warnings and errors."""
    def __init__(self, *args, root_name: str = ROOT, **kwargs):
        self._prefix = root_name + "."
        super().__init__(*args, **kwargs)

    def formatMessage(self, record) -> str:
        if record.name.startswith(self._prefix):
            record.name = record.name[len(self._prefix):]
        log = super().formatMessage(record)
        if record.levelno >= logging.ERROR:
            return colored("ERROR", "red", attrs=["underline"]) + " " + log
        if record.levelno == logging.WARNING:
            return colored("WARNING", "red") + " " + log
        return log
