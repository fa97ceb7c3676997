"""
Exceptions
Error types raised by the simulation services.
"""

from typing import Optional


class TwistError(Exception):
    """Base class for every error raised by the application."""


class InvalidParameter(TwistError):
    """A precondition on an argument was violated."""


class ConfigError(TwistError):
    """A configuration document could not be turned into a SimulationConfig."""

    def __init__(self, field: str, message: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        self.message = message
        location = f"line {line}, " if line is not None else ""
        super().__init__(f"{location}field '{field}': {message}")


class CorruptStateError(TwistError):
    """A spinor field holds non-finite values or is not normalized."""


class IntegrationError(TwistError):
    """Time stepping produced a non-finite field."""

    def __init__(self, step_index: int, message: str = "non-finite field"):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}")


class UndefinedDirectionError(TwistError):
    """Spin direction requested where the spinor vanishes."""


class ZeroPassageError(TwistError):
    """An aperture window lets (almost) nothing through."""
