"""Exception hierarchy shared by every module.

Each class carries a short machine-readable ``code`` that the CLI emits in
JSON mode.
"""


class CCPError(Exception):
    code = "error"


class SizeTooSmall(CCPError, ValueError):
    code = "size_too_small"


class OutOfRange(CCPError, ValueError):
    code = "out_of_range"


class NotNormalized(CCPError, ValueError):
    code = "not_normalized"


class IndexOutOfRange(CCPError, IndexError):
    code = "index_out_of_range"


class RangeError(CCPError, ValueError):
    code = "range_error"


class EnumerationTooLarge(CCPError, RuntimeError):
    code = "enumeration_too_large"


class ParseError(CCPError, ValueError):
    code = "parse_error"


class BackendMismatch(CCPError, TypeError):
    code = "backend_mismatch"


class TrialCapExceeded(CCPError, RuntimeError):
    code = "trial_cap_exceeded"


class CancellationWarning(UserWarning):
    """Float result computed from an alternating sum with large cancellation."""
