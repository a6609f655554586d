"""Exception types shared across the package.

Every error raised for a domain reason derives from :class:`HardChoiceError`,
so callers (and the CLI) can distinguish bad input from genuine bugs.
"""

from __future__ import annotations


class HardChoiceError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(HardChoiceError):
    """A vector's length does not match the problem's objective count."""


class DuplicateName(HardChoiceError):
    """A name that must be unique (option, objective, juror id) repeats."""


class NonFiniteScore(HardChoiceError):
    """An option score is NaN or infinite."""


class InvalidWeight(HardChoiceError):
    """A weight vector is negative, non-finite, or off the unit simplex."""


class InvalidTolerance(HardChoiceError):
    """A tolerance parameter is negative, non-finite, or out of range."""


class NonPositiveScoreForLogForm(HardChoiceError):
    """A Cobb-Douglas juror consumed a score that is zero or negative."""


class UnsupportedForm(HardChoiceError):
    """An operation restricted to linear utilities met another form."""


class UnsupportedDimension(HardChoiceError):
    """An operation restricted to low-dimensional problems met a larger one."""


class UnknownContextTag(HardChoiceError):
    """A scenario context tag is outside the closed vocabulary."""


class DegenerateCorpus(HardChoiceError):
    """A training corpus contains only one class (or no usable labels)."""


class NotHard(HardChoiceError):
    """Resolution was requested for a pair that is not incommensurable."""


class NoSupportingJuror(HardChoiceError):
    """No juror favors the requested resolution target."""


class InfeasibleTransformation(HardChoiceError):
    """No simplex weight vector can reach the requested preference margin."""


class InfeasibleMix(HardChoiceError):
    """The requested scenario class mix cannot be generated."""


class ScenarioSyntaxError(HardChoiceError):
    """Scenario text violates the file grammar. Carries line and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class ScenarioSemanticError(HardChoiceError):
    """Scenario text parses but violates a domain invariant."""
