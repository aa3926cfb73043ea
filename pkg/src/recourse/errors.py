"""Exception types shared across the package."""


class RecourseError(Exception):
    """Base class for all package-specific errors."""


class ParseError(RecourseError):
    """Raised when a data file cannot be parsed; carries the offending row."""

    def __init__(self, message, row_index=None):
        super().__init__(message)
        self.row_index = row_index


class EncodingError(RecourseError):
    """Raised when a value cannot be encoded (e.g. unseen category)."""

    def __init__(self, message, feature=None, value=None):
        super().__init__(message)
        self.feature = feature
        self.value = value


class DegenerateRangeError(RecourseError):
    """Raised when targets are constant and no response ranges exist."""


class UndefinedCorrelationError(RecourseError):
    """Raised when a correlation statistic is undefined (zero variance etc.)."""


class FittingError(RecourseError):
    """Raised when a model cannot be fitted."""


class UnavailableGroupError(RecourseError):
    """Raised when a proximity/connectedness group has too few reference rows."""


class ConfigurationError(RecourseError):
    """Raised for invalid user configuration (preferences, module sets, ...).

    ``code`` distinguishes classes of problems the HTTP layer maps to
    different status codes: ``kind_mismatch`` for constraints that can never
    apply to a feature's type, anything else for plain schema violations.
    """

    def __init__(self, message, code="invalid", field=None):
        super().__init__(message)
        self.code = code
        self.field = field


class SchemaMismatchError(RecourseError):
    """Raised when an input row does not match the fitted feature schema."""


class RemotePredictorError(RecourseError):
    """Raised when a remote prediction endpoint violates the wire protocol."""


class RemoteTimeoutError(RemotePredictorError):
    """Raised when a remote prediction endpoint does not answer in time."""
