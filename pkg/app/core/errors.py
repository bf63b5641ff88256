"""Domain errors raised by the library services."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from app.schemas.circuit import Violation


class QftToolkitError(Exception):
    """Base class for expected, user-facing failures."""


class CircuitFormatError(QftToolkitError):
    """Raised when circuit text cannot be decoded into a valid circuit."""

    def __init__(self, position: str, reason: str) -> None:
        self.position = position
        self.reason = reason
        super().__init__(f"{position}: {reason}")


class CircuitValidationError(QftToolkitError):
    """Raised when an executor is handed a circuit that fails validation."""

    def __init__(self, violations: list["Violation"]) -> None:
        self.violations = violations
        first = violations[0]
        suffix = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        where = "circuit" if first.index is None else f"instruction {first.index}"
        super().__init__(f"{where}: {first.message}{suffix}")


class InputStateError(QftToolkitError):
    """Raised for malformed input states or out-of-range state parameters."""


class SimulationError(QftToolkitError):
    """Raised when the simulator detects a numerically impossible situation."""


class PatternMismatchError(QftToolkitError):
    """Raised when a rewrite is requested on a circuit without a terminal QFT."""

    def __init__(self, diagnostic: str) -> None:
        self.diagnostic = diagnostic
        super().__init__(f"no terminal QFT: {diagnostic}")


class RegisterMismatchError(QftToolkitError):
    """Raised when two circuits compared for equivalence have different registers."""
