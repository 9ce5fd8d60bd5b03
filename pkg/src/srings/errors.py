"""Shared exception types.

Exit-code mapping used by the CLI: InputError -> 2, PropertyFailure -> 1,
TimeoutExceeded / SizeLimitError -> 3.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad index, degree mismatch, ...)."""


class SizeLimitError(RuntimeError):
    """An enumeration or search exceeds its configured size budget.

    Raised instead of returning a partial answer; reports must never
    silently contain guesses.
    """


class TimeoutExceeded(RuntimeError):
    """A wall-clock deadline was hit mid-search; no partial result is kept."""


class PropertyFailure(AssertionError):
    """A verified-property suite found a counterexample."""
