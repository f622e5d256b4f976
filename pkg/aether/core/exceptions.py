"""
Exceptions raised by the Aether library.
"""


class AetherException(Exception):
    """Base exception for Aether errors."""
    pass


class ConfigError(AetherException):
    """Exception raised when a scenario or sweep configuration is invalid."""
    pass


class DimensionMismatchError(AetherException, ValueError):
    """Exception raised when array shapes are inconsistent."""
    pass


class ContractError(AetherException, ValueError):
    """Exception raised when an operation's precondition is violated."""
    pass


class DomainError(AetherException, ValueError):
    """Exception raised for arguments outside a function's domain."""
    pass


class LinearizationError(AetherException):
    """Exception raised when an SCA expansion point is degenerate."""
    pass


class SolverFailureError(AetherException):
    """Exception raised when the conic backend fails after its retry."""
    pass


class ScenarioInfeasibleError(AetherException):
    """Exception raised when the scenario's thresholds cannot be met."""
    pass


class RankDeficientError(AetherException):
    """Exception raised when zero-forcing meets a rank-deficient channel."""
    pass


class OrderSearchLimitError(AetherException):
    """Exception raised when exhaustive order search is asked for too many users."""
    pass
