"""Exception types shared across the package."""

from __future__ import annotations


class DiagramTypeError(ValueError):
    """Unknown series, rank outside the valid range, or an unparsable type string."""


class PreconditionError(ValueError):
    """An operation was called outside its domain; the message names the condition."""


class ResourceBudgetExceeded(RuntimeError):
    """A computation would exceed the configured cap or memory budget."""


class CapExceededError(ResourceBudgetExceeded):
    def __init__(self, what: str, cap: int) -> None:
        super().__init__(
            f"{what} exceeds the enumeration cap of {cap} elements; "
            "raise --cap or use orbit mode instead."
        )
        self.cap = cap


class MemoryBudgetExceededError(ResourceBudgetExceeded):
    def __init__(self, what: str, estimate: int, budget: int) -> None:
        super().__init__(
            f"{what} needs an estimated {estimate} bytes, over the memory budget of {budget} bytes."
        )
        self.estimate = estimate
        self.budget = budget


class ClassificationIncomplete(RuntimeError):
    """A class could not be located, or an exhaustive coverage check failed."""


__all__ = [
    "CapExceededError",
    "ClassificationIncomplete",
    "DiagramTypeError",
    "MemoryBudgetExceededError",
    "PreconditionError",
    "ResourceBudgetExceeded",
]
