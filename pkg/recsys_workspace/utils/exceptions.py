"""Errors raised by the pipeline.

Each class carries the process exit code the management commands use
when the error escapes a command, so failures can be told apart from a
shell script.
"""


class PipelineError(Exception):
    """Base class for expected pipeline failures."""
    exit_code = 1
    category = 'pipeline'


class MissingInputError(PipelineError):
    """An input file or directory does not exist or cannot be read."""
    exit_code = 2
    category = 'missing-file'


class ConfigError(PipelineError):
    """Unknown configuration key or unparsable value."""
    exit_code = 3
    category = 'config'


class DataFormatError(PipelineError):
    """A data file does not follow its declared format."""
    exit_code = 4
    category = 'data-format'

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleInterventionError(PipelineError):
    """The requested popular-item proportion cannot be reached by
    downsampling."""
    exit_code = 5
    category = 'infeasible-intervention'


class TrainingError(PipelineError):
    """Training cannot proceed; e.g. a non-finite gradient."""
    exit_code = 6
    category = 'training'


class EmptyDatasetError(PipelineError):
    exit_code = 7
    category = 'empty-dataset'


class CheckpointError(PipelineError):
    exit_code = 8
    category = 'checkpoint'


class CalibrationError(PipelineError):
    """The synthetic generator cannot hit the requested density."""
    exit_code = 9
    category = 'calibration'
