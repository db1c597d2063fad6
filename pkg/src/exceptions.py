"""
Custom exceptions for the conformal Brownian motion verification package.
Provides specific error types with the process exit code the CLI should use.
"""

class ConformalBMException(Exception):
    """Base exception for all package errors."""
    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class ValidationError(ConformalBMException):
    """Raised when a run configuration or command-line input is invalid."""
    def __init__(self, message: str, field: str = None):
        self.field = field
        super().__init__(message, exit_code=2)


class DomainError(ConformalBMException):
    """Raised when an argument lies outside the domain of an operation."""
    def __init__(self, message: str):
        super().__init__(message)


class PoleError(ConformalBMException):
    """Raised when a map is evaluated within 1e-12 of one of its poles."""
    def __init__(self, message: str):
        super().__init__(message)


class SingularityError(ConformalBMException):
    """Raised when a Green's function is evaluated at its own pole."""
    def __init__(self, message: str):
        super().__init__(message)


class MaxStepsExceeded(ConformalBMException):
    """Raised when a discretized path does not exit within the step budget."""
    def __init__(self, message: str, steps: int = None):
        self.steps = steps
        super().__init__(message)


class InsufficientData(ConformalBMException):
    """Raised when an estimator receives too few samples."""
    def __init__(self, message: str):
        super().__init__(message)


class BinUnderflow(ConformalBMException):
    """Raised when a chi-square bin expects fewer than five counts."""
    def __init__(self, message: str):
        super().__init__(message)
