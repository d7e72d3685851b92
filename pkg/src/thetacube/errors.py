"""Exception taxonomy shared by the library and the CLI exit codes."""
from __future__ import annotations

__all__ = [
    "ThetaCubeError",
    "InvalidArgumentError",
    "UnsupportedError",
    "MathematicalError",
    "DegenerateFormError",
    "IncompatibleTrivializationError",
]


class ThetaCubeError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(ThetaCubeError, ValueError):
    """Malformed or out-of-contract input (CLI exit status 1)."""


class UnsupportedError(InvalidArgumentError):
    """Valid input outside the implemented scope, stated loudly."""


class MathematicalError(ThetaCubeError):
    """Input is well formed but the requested structure does not exist (CLI exit status 2)."""


class DegenerateFormError(MathematicalError):
    """A pairing required to be nondegenerate has a nonzero radical."""


class IncompatibleTrivializationError(MathematicalError):
    """A trivialization fails its compatibility equations; carries a witness."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness
