from typing import Optional


class GranuloError(Exception):
    """
    Base error for the toolkit.

    Args:
        detail: Human readable description of what went wrong
        exit_code: Process exit code the CLI reports for this error
    """

    exit_code: int = 3

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return self.detail


class ValidationFailure(GranuloError):
    exit_code = 1


class ConfigError(GranuloError):
    exit_code = 2


class ModelFormatError(GranuloError):
    exit_code = 2


class NumericalError(GranuloError):
    exit_code = 3


class DegenerateShapeError(ConfigError):
    pass


class RejectionBudgetExceeded(ConfigError):
    pass


class TrainingDivergedError(NumericalError):
    pass


class OracleDomainError(GranuloError):
    """Raised when a pair outside the broad-phase radius reaches the oracle."""
    exit_code = 3
