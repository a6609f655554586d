"""Domain types for multi-objective choice problems and juror ensembles.

All types are immutable values; validation happens either at construction
(jurors, juries, tolerances) or through :func:`validate_problem` (choice
problems, so that invalid problems can be built and then rejected with a
named error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DimensionMismatch,
    DuplicateName,
    InvalidTolerance,
    InvalidWeight,
    NonFiniteScore,
)

#: Absolute slack allowed when checking that weights sum to one.
WEIGHT_SUM_TOLERANCE = 1e-9

#: Indifference tolerance used when a juror does not carry its own.
DEFAULT_EPSILON = 1e-9


class UtilityForm(str, Enum):
    """Functional form of a scalarised utility model."""

    LINEAR = "linear"
    COBB_DOUGLAS = "cobb_douglas"


class Relation(str, Enum):
    """Four-way classification of an ordered option pair."""

    PREFERRED_FIRST = "first"
    PREFERRED_SECOND = "second"
    EQUAL = "equal"
    INCOMMENSURABLE = "incommensurable"

    def swapped(self) -> "Relation":
        """The same relation seen from the reversed pair."""
        if self is Relation.PREFERRED_FIRST:
            return Relation.PREFERRED_SECOND
        if self is Relation.PREFERRED_SECOND:
            return Relation.PREFERRED_FIRST
        return self


def _require_token(name: str, what: str) -> None:
    if not isinstance(name, str) or not name:
        raise ValueError(f"{what} must be a nonempty string")
    if any(ch.isspace() for ch in name) or name.startswith("[") or name.startswith("#"):
        raise ValueError(f"{what} {name!r} may not contain whitespace or start with '[' or '#'")


def _as_floats(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class Objective:
    """One evaluation criterion. All objectives are benefits: larger is better.

    Costs must be pre-negated by the scenario author; there is no minimize
    direction.
    """

    name: str
    direction: str = "maximize"

    def __post_init__(self):
        _require_token(self.name, "objective name")
        if self.direction != "maximize":
            raise ValueError("objectives only support direction 'maximize'; negate cost scores instead")


@dataclass(frozen=True)
class OptionPoint:
    """A named option scored once per objective.

    Scores are stored as given; finiteness is checked by
    :func:`validate_problem` so that invalid problems can be constructed
    and rejected with a named error.
    """

    name: str
    scores: tuple[float, ...]

    def __post_init__(self):
        _require_token(self.name, "option name")
        object.__setattr__(self, "scores", _as_floats(self.scores))


@dataclass(frozen=True)
class ChoiceProblem:
    """A finite choice: named objectives plus options scored over them."""

    objectives: tuple[Objective, ...]
    options: tuple[OptionPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "options", tuple(self.options))

    @property
    def dimension(self) -> int:
        return len(self.objectives)

    @property
    def option_names(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.options)

    def option(self, name: str) -> OptionPoint:
        for o in self.options:
            if o.name == name:
                return o
        raise KeyError(f"no option named {name!r}")

    def score_ranges(self) -> tuple[float, ...]:
        """Per-objective spread (max minus min) across all options."""
        ranges = []
        for i in range(self.dimension):
            column = [o.scores[i] for o in self.options]
            ranges.append(max(column) - min(column))
        return tuple(ranges)


@dataclass(frozen=True)
class Juror:
    """One permissible ordering: a scalarised utility model with a tolerance.

    ``weights`` must be nonnegative and sum to one within
    ``WEIGHT_SUM_TOLERANCE``; they are stored exactly as given (no silent
    renormalisation) so that serialisation round-trips bit for bit.
    ``epsilon`` is the indifference band on utility differences.
    """

    id: str
    weights: tuple[float, ...]
    form: UtilityForm = UtilityForm.LINEAR
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        _require_token(self.id, "juror id")
        weights = _as_floats(self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "form", UtilityForm(self.form))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if not weights:
            raise InvalidWeight(f"juror {self.id}: empty weight vector")
        for w in weights:
            if not math.isfinite(w):
                raise InvalidWeight(f"juror {self.id}: non-finite weight {w!r}")
            if w < 0:
                raise InvalidWeight(f"juror {self.id}: negative weight {w!r}")
        total = sum(weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidWeight(f"juror {self.id}: weights sum to {total!r}, not 1")
        if not math.isfinite(self.epsilon) or self.epsilon < 0:
            raise InvalidTolerance(f"juror {self.id}: epsilon must be finite and >= 0")

    @property
    def dimension(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class Jury:
    """An ordered, nonempty collection of jurors sharing one dimension."""

    jurors: tuple[Juror, ...]

    def __post_init__(self):
        jurors = tuple(self.jurors)
        object.__setattr__(self, "jurors", jurors)
        if not jurors:
            raise InvalidWeight("a jury needs at least one juror")
        seen = set()
        for juror in jurors:
            if juror.id in seen:
                raise DuplicateName(f"duplicate juror id {juror.id!r}")
            seen.add(juror.id)
        d = jurors[0].dimension
        for juror in jurors:
            if juror.dimension != d:
                raise DimensionMismatch(
                    f"juror {juror.id!r} has {juror.dimension} weights, expected {d}"
                )

    @property
    def dimension(self) -> int:
        return self.jurors[0].dimension

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(j.id for j in self.jurors)

    def juror(self, juror_id: str) -> Juror:
        for j in self.jurors:
            if j.id == juror_id:
                return j
        raise KeyError(f"no juror with id {juror_id!r}")


@dataclass(frozen=True)
class Tolerances:
    """Scenario-level tolerances.

    ``tau`` is the neighbourhood half-width used by the meta-policy's second
    gate; it is unit-bearing, so there is deliberately no default. ``delta``
    is the small-improvement step as a fraction of each objective's score
    range. ``epsilon_default`` is used when a juror omits its own epsilon.
    """

    tau: float
    delta: float
    epsilon_default: float = DEFAULT_EPSILON

    def __post_init__(self):
        for name in ("tau", "delta", "epsilon_default"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value) or value < 0:
                raise InvalidTolerance(f"{name} must be finite and >= 0, got {value!r}")
        if self.delta <= 0:
            raise InvalidTolerance(f"delta must be > 0, got {self.delta!r}")


def validate_problem(problem: ChoiceProblem) -> ChoiceProblem:
    """Check every problem invariant and return the problem unchanged.

    Raises :class:`DimensionMismatch`, :class:`DuplicateName`, or
    :class:`NonFiniteScore`, each naming the offending objective or option.
    Idempotent: a validated problem validates to an identical value.
    """
    if len(problem.objectives) < 1:
        raise DimensionMismatch("a problem needs at least one objective")
    if len(problem.options) < 2:
        raise DimensionMismatch("a problem needs at least two options")
    seen = set()
    for objective in problem.objectives:
        if objective.name in seen:
            raise DuplicateName(f"duplicate objective name {objective.name!r}")
        seen.add(objective.name)
    d = problem.dimension
    seen = set()
    for option in problem.options:
        if option.name in seen:
            raise DuplicateName(f"duplicate option name {option.name!r}")
        seen.add(option.name)
        if len(option.scores) != d:
            raise DimensionMismatch(
                f"option {option.name!r} has {len(option.scores)} scores, expected {d}"
            )
        for i, score in enumerate(option.scores):
            if not math.isfinite(score):
                raise NonFiniteScore(
                    f"option {option.name!r} has non-finite score {score!r} "
                    f"for objective {problem.objectives[i].name!r}"
                )
    return problem


def canonical_instance() -> tuple[ChoiceProblem, Jury]:
    """The fixed two-objective desk instance used throughout the test-bed.

    Two jurors weight income and excitement oppositely, so A and B are
    disputed while A+ improves on A for everyone. The numbers are frozen;
    both calls return bit-identical structures.
    """
    problem = ChoiceProblem(
        objectives=(Objective("income"), Objective("excitement")),
        options=(
            OptionPoint("A", (10.0, 2.0)),
            OptionPoint("B", (4.0, 8.0)),
            OptionPoint("A+", (10.5, 2.2)),
            OptionPoint("B+", (4.2, 8.4)),
        ),
    )
    jury = Jury(
        (
            Juror("alpha", (0.8, 0.2), UtilityForm.LINEAR, DEFAULT_EPSILON),
            Juror("beta", (0.3, 0.7), UtilityForm.LINEAR, DEFAULT_EPSILON),
        )
    )
    return validate_problem(problem), jury
