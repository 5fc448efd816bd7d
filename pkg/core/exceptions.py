"""
Custom exception hierarchy for the port arrival game toolkit.
Provides specific exceptions for better error handling and debugging.
"""


class PortGameException(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, details: dict = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} ({details_str})"
        return self.message


# =============================================================================
# Game Exceptions
# =============================================================================


class GameException(PortGameException):
    """Base exception for queue and equilibrium errors."""

    pass


class ProfileException(GameException):
    """Invalid type or strategy profile (unsorted, infeasible, wrong length, bad index)."""

    pass


class OrderConsistencyException(GameException):
    """Service order contradicts arrivals; details carry the violating positions."""

    pass


class EnumerationCapException(GameException):
    """Tie block too large to enumerate; analytic expectations must be used."""

    pass


# =============================================================================
# Simulation Exceptions
# =============================================================================


class SimulationException(PortGameException):
    """Invalid prior, strategy, window, grid, or sample count."""

    pass


# =============================================================================
# Pipeline Exceptions
# =============================================================================


class PipelineException(PortGameException):
    """Base exception for AIS pipeline errors."""

    pass


class InputFileException(PipelineException):
    """Unreadable or unparseable input file; details may include line number."""

    pass


class CoordinateException(PipelineException):
    """Latitude or longitude outside its valid range."""

    pass


class CalibrationException(PipelineException):
    """Too few events to calibrate the effective service time."""

    pass


class EmptyResultException(PipelineException):
    """A run produced nothing to report."""

    pass


# =============================================================================
# Report Exceptions
# =============================================================================


class ReportException(PortGameException):
    """Report files could not be written."""

    pass


# =============================================================================
# Configuration Exceptions
# =============================================================================


class ConfigurationException(PortGameException):
    """Exception for configuration errors."""

    pass


class InvariantViolationException(PortGameException):
    """An internal consistency check failed."""

    pass
