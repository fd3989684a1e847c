"""Exception types shared across the toolkit."""


class QreformError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(QreformError):
    """An operation received no usable input (empty text, file, or series)."""


class EmptyCorpus(QreformError):
    """A corpus-level build was attempted on zero documents."""


class LengthMismatch(QreformError):
    """Paired series have different lengths."""


class ConstantSeries(QreformError):
    """Correlation is undefined when one series is constant."""


class InsufficientData(QreformError):
    """Not enough data, or missing class coverage, for the requested statistic."""


class DuplicateId(QreformError):
    """Two records share an id that must be unique."""


class BackendError(QreformError):
    """Base class for reformulation-backend failures."""


class BackendUnavailable(BackendError):
    """The backend endpoint could not be reached."""


class Timeout(BackendError):
    """The backend did not respond within the configured timeout."""


class ProtocolError(BackendError):
    """The backend responded with something other than the wire protocol."""


class EmptyReformulation(BackendError):
    """The backend returned an empty reformulation."""


class PipelineStepError(BackendError):
    """An operator pipeline failed at a specific step."""

    def __init__(self, step: int, cause: Exception):
        super().__init__(f"pipeline step {step} failed: {cause}")
        self.step = step
        self.cause = cause
