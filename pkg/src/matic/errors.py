"""
Error hierarchy for MaTIC.

Every failure raised by the library carries a category and the process exit
code the CLI maps it to.
"""

from typing import Any, Dict, List, Optional


class MaticError(Exception):
    """Base class for all MaTIC errors."""

    category = "internal"
    exit_code = 4

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "category": self.category,
            "message": self.message,
            "details": {k: str(v) for k, v in sorted(self.details.items())},
        }


class ConfigError(MaticError):
    """Invalid configuration, scenario or manifest."""

    category = "config"
    exit_code = 2


class DataError(MaticError):
    """Input data violates a precondition of an operation."""

    category = "data"
    exit_code = 3


class InternalError(MaticError):
    """Unexpected failure inside MaTIC."""

    category = "internal"
    exit_code = 4


# Events

class EmptyChain(DataError):
    pass


class UnknownEvent(DataError):
    pass


class DuplicateEvent(DataError):
    pass


# GCM

class ArityMismatch(DataError):
    pass


class LengthMismatch(DataError):
    pass


# Networks

class CircularSystem(DataError):
    def __init__(self, message: str, cycle: Optional[List[str]] = None):
        super().__init__(message, cycle=cycle or [])
        self.cycle = cycle or []


class UnknownNode(DataError):
    pass


# Implicatures

class NoCandidates(DataError):
    pass


class UntrainedModel(DataError):
    pass


# Information metrics

class InvalidDistribution(DataError):
    pass


class EmptySupport(DataError):
    pass


class InsufficientData(DataError):
    pass


# Logic

class FormulaSyntaxError(DataError):
    """Formula text could not be parsed; `position` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}", position=position)
        self.position = position


class PatternMismatch(DataError):
    pass


class IllegalSetFormation(DataError):
    pass


class NotStratifiedError(DataError):
    def __init__(self, message: str, cycle: Optional[List[str]] = None):
        super().__init__(message, cycle=cycle or [])
        self.cycle = cycle or []


class IllegalTransfer(DataError):
    """Transference applied outside its legal domain."""

    EXTERNAL_FORMULA = "ExternalFormula"
    NON_STANDARD_PARAMETER = "NonStandardParameter"

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}", reason=reason)
        self.reason = reason


class UnboundVariable(DataError):
    pass


class AllStandard(DataError):
    pass
