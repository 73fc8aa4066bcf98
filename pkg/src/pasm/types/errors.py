from abc import ABC

from pasm.util.logging import create_warning_box

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3


class PasmError(Exception, ABC):
    """Superclass for all simulator exceptions."""

    _DEFAULT_MESSAGE = "The simulator failed"
    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message: str | None = None):
        self.message = message or self.__class__._DEFAULT_MESSAGE
        super().__init__(self.message)


"""
Model and evaluation errors
"""


class ModelError(PasmError):
    """Values from different instances, or states that are illegal for their item."""

    _DEFAULT_MESSAGE = "Realization does not match the instance"


class ConditioningError(PasmError):
    """Conditioning on a partial realization that has zero prior probability."""

    _DEFAULT_MESSAGE = "Cannot condition on an impossible observation"


class EvaluationError(PasmError):
    _DEFAULT_MESSAGE = "Utility is undefined for the requested set and realization"


class ConfigurationError(PasmError):
    _DEFAULT_MESSAGE = "Invalid configuration"


class UnknownFamilyError(ConfigurationError):
    _DEFAULT_MESSAGE = "Unknown instance family"


class InstanceValidationError(PasmError):
    """Raised when an instance document violates the schema or its semantic checks."""

    _DEFAULT_MESSAGE = "Instance is invalid"

    def __init__(self, field_path: str, message: str | None = None):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message or self._DEFAULT_MESSAGE}")


"""
Caps
"""


class EnumerationCapExceeded(PasmError):
    """The exact computation would exceed a configured enumeration cap; use Monte Carlo instead."""

    _DEFAULT_MESSAGE = "Enumeration cap exceeded, fall back to Monte Carlo"
    exit_code = EXIT_CAP_EXCEEDED


class OracleCapExceeded(EnumerationCapExceeded):
    _DEFAULT_MESSAGE = "Instance is too large for the exact oracle"

    def warning(self) -> str:
        return create_warning_box([self.message, "Re-run with --no-oracle to skip ratio columns."])


"""
Experiment outcomes
"""


class BoundViolation(PasmError):
    _DEFAULT_MESSAGE = "An evaluated policy fell below its approximation bound"
    exit_code = EXIT_BOUND_VIOLATION
