"""Exception taxonomy shared across the package.

The CLI maps these onto its exit-code contract: parse/validation/parameter
errors exit 1, numerical failures exit 2.
"""


class NmfcommError(Exception):
    """Base class for all package errors."""


class ParseError(NmfcommError):
    """Malformed input text (wrong token count, non-numeric token)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(NmfcommError):
    """Structurally well-formed input that violates a domain invariant."""


class ParameterError(NmfcommError):
    """Inconsistent or out-of-range configuration values."""


class UndefinedMetricError(NmfcommError):
    """A metric has no defined value for this input (e.g. edgeless graph)."""


class NumericalError(NmfcommError):
    """Non-finite values encountered during optimization."""

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)
        self.iteration = iteration
