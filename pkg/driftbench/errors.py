classes = __all__ = [
    "DriftBenchError", "CorpusError", "FeatureError", "WindowError",
    "ModelError", "TuningError", "ActiveError", "MetricError", "SynthError",
    "ConfigError"
]


class DriftBenchError(ValueError):
    """Base class of all errors raised by driftbench.

    The :attr:`module` names the pipeline stage that failed,
    the command line prints it in front of the message.
    """
    module = "driftbench"

    def __str__(self) -> str:
        return f"[{self.module}] {super().__str__()}"


class CorpusError(DriftBenchError):
    module = "corpus"


class FeatureError(DriftBenchError):
    module = "features"


class WindowError(DriftBenchError):
    module = "windows"


class ModelError(DriftBenchError):
    module = "models"


class TuningError(DriftBenchError):
    module = "tuning"


class ActiveError(DriftBenchError):
    module = "active"


class MetricError(DriftBenchError):
    module = "metrics"


class SynthError(DriftBenchError):
    module = "synthgen"


class ConfigError(DriftBenchError):
    module = "cli"
