"""Exception types shared across the package."""


class RegtailError(Exception):
    """Base class for all package-specific errors."""


class EdgeListParseError(RegtailError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class CapExceededError(RegtailError):
    """An enumeration or counting routine was asked to exceed its cap."""


class InfeasibleConstructionError(RegtailError):
    """A solved graphon entry landed outside [0, 1]; names the entry."""


class BudgetExhaustedError(RegtailError):
    """A rejection-sampling loop ran out of attempts."""


class PreconditionError(RegtailError):
    """A checked precondition (not a cap) was violated by the input."""
