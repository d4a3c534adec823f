from .commands import (cmd_active, cmd_features, cmd_ingest, cmd_report,
                       cmd_synth, cmd_windows)
from .config import RunConfig, resolve_threads
from .main import build_parser, main

classes = __all__ = [
    "RunConfig",
    "resolve_threads",
    "cmd_ingest",
    "cmd_features",
    "cmd_windows",
    "cmd_active",
    "cmd_synth",
    "cmd_report",
    "build_parser",
    "main",
]
