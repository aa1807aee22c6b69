"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so new error kinds should subclass one
of the three families below rather than ``Exception`` directly.
"""


class UtilityError(Exception):
    """Base class for all errors raised by :mod:`utildist`."""


class ValidationError(UtilityError, ValueError):
    """An input violates a type invariant or an operation precondition."""


class UnknownFactorError(ValidationError, KeyError):
    """A query named a factor (or variable) outside the closed universe."""

    def __init__(self, label, universe="distribution"):
        self.label = label
        super().__init__(f"unknown label {label!r} in {universe}")

    def __str__(self):
        return self.args[0]


class ResourceError(ValidationError):
    """An exhaustive check would exceed its size guard."""


class NullConditioningError(UtilityError, ZeroDivisionError):
    """Conditioning on a set or event of zero measure."""

    def __init__(self, message, side=None):
        self.side = side
        super().__init__(message)


class InapplicableError(UtilityError, ValueError):
    """The requested method cannot be applied to this input."""


class DegenerateError(InapplicableError):
    """The input carries no preference content (all weights or utilities equal)."""


class NonQuantizableError(InapplicableError):
    """No common quantum was found for a binary factorization."""


class DecompositionError(UtilityError, ValueError):
    """An additive decomposition was requested for a non-additive table.

    ``witness`` holds the two lotteries with equal marginals but different
    expected utilities.
    """

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class SelfCheckError(UtilityError, AssertionError):
    """A reconstruction self-check failed (internal inconsistency)."""
