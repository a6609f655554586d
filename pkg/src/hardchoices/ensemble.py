"""Unanimity-ensemble classification of option pairs.

Each juror orders a pair through its own scalarised utility; the jury
aggregates the verdicts with a unanimity rule rather than a vote:

* every juror indifferent            -> the options are equal;
* at least one strict verdict and no
  juror on the opposite side         -> a preference (one direction only);
* strict verdicts on both sides      -> the pair is incommensurable.

A mixed profile (some indifferent, the rest strictly on one side) counts as
a preference: with nobody on the other side there is only one permissible
strict direction.

The small-improvement test nudges one option up on every objective and
checks that the improved copy beats its original while the disputed rival
still resists it, in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DimensionMismatch, InvalidTolerance, NonPositiveScoreForLogForm
from .model import ChoiceProblem, Juror, Jury, OptionPoint, Relation, UtilityForm, validate_problem


class Verdict(str, Enum):
    """A single juror's view of an ordered pair."""

    FIRST_BETTER = "first_better"
    SECOND_BETTER = "second_better"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class JurorVerdict:
    """One juror's comparison: verdict plus signed utility margin (first minus second)."""

    juror_id: str
    verdict: Verdict
    margin: float


@dataclass(frozen=True)
class ClassificationTrace:
    """A jury classification together with the per-juror verdicts behind it."""

    relation: Relation
    verdicts: tuple[JurorVerdict, ...]


@dataclass(frozen=True)
class RelationMatrix:
    """All pairwise relations of a problem, mirrored around an Equal diagonal."""

    option_names: tuple[str, ...]
    relations: tuple[tuple[Relation, ...], ...]

    def get(self, first: str, second: str) -> Relation:
        i = self.option_names.index(first)
        j = self.option_names.index(second)
        return self.relations[i][j]

    def pairs(self):
        """Yield ((name_i, name_j), relation) for every unordered pair, i < j."""
        for i in range(len(self.option_names)):
            for j in range(i + 1, len(self.option_names)):
                yield (self.option_names[i], self.option_names[j]), self.relations[i][j]

    def count(self, relation: Relation) -> int:
        return sum(1 for _, rel in self.pairs() if rel is relation)


@dataclass(frozen=True)
class SmallImprovementResult:
    """Outcome of the small-improvement test.

    ``confirmed`` is True when both directions of the test pass; otherwise
    ``reason`` names the first check that failed. The synthetic improved
    points are kept for display.
    """

    confirmed: bool
    reason: str | None
    improved_first: OptionPoint
    improved_second: OptionPoint | None = None


def scalar_utility(weights: tuple[float, ...], form: UtilityForm, option: OptionPoint) -> float:
    """Utility of an option under a weight vector and functional form.

    Linear is the weighted sum. Cobb-Douglas is the weighted product of
    powers over the consumed coordinates (those with positive weight); a
    consumed score must be strictly positive.
    """
    scores = option.scores
    if len(scores) != len(weights):
        raise DimensionMismatch(
            f"option {option.name!r} has {len(scores)} scores, expected {len(weights)}"
        )
    if form is UtilityForm.LINEAR:
        total = 0.0
        for w, s in zip(weights, scores):
            total += w * s
        return total
    value = 1.0
    for w, s in zip(weights, scores):
        if w <= 0.0:
            continue
        if s <= 0.0:
            raise NonPositiveScoreForLogForm(
                f"option {option.name!r}: score {s!r} is not positive, "
                "required by the cobb_douglas form"
            )
        value *= s**w
    return value


def juror_value(juror: Juror, option: OptionPoint) -> float:
    """The utility this juror assigns to the option."""
    return scalar_utility(juror.weights, juror.form, option)


def juror_compare(juror: Juror, first: OptionPoint, second: OptionPoint) -> JurorVerdict:
    """Compare two options through one juror's utility.

    The margin is utility(first) minus utility(second); verdicts within
    the juror's epsilon band are indifferent.
    """
    margin = juror_value(juror, first) - juror_value(juror, second)
    if margin > juror.epsilon:
        verdict = Verdict.FIRST_BETTER
    elif margin < -juror.epsilon:
        verdict = Verdict.SECOND_BETTER
    else:
        verdict = Verdict.INDIFFERENT
    return JurorVerdict(juror.id, verdict, margin)


def jury_classify(jury: Jury, first: OptionPoint, second: OptionPoint) -> ClassificationTrace:
    """Classify a pair with the unanimity rule over all juror verdicts."""
    verdicts = tuple(juror_compare(juror, first, second) for juror in jury.jurors)
    any_first = any(v.verdict is Verdict.FIRST_BETTER for v in verdicts)
    any_second = any(v.verdict is Verdict.SECOND_BETTER for v in verdicts)
    if any_first and any_second:
        relation = Relation.INCOMMENSURABLE
    elif any_first:
        relation = Relation.PREFERRED_FIRST
    elif any_second:
        relation = Relation.PREFERRED_SECOND
    else:
        relation = Relation.EQUAL
    return ClassificationTrace(relation, verdicts)


def classification_matrix(jury: Jury, problem: ChoiceProblem) -> RelationMatrix:
    """Classify every option pair of a validated problem.

    The diagonal is Equal and entry (j, i) mirrors entry (i, j) with the
    preferred directions swapped.
    """
    validate_problem(problem)
    options = problem.options
    n = len(options)
    rows: list[list[Relation]] = [[Relation.EQUAL] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            relation = jury_classify(jury, options[i], options[j]).relation
            rows[i][j] = relation
            rows[j][i] = relation.swapped()
    return RelationMatrix(problem.option_names, tuple(tuple(row) for row in rows))


def improvement_steps(problem: ChoiceProblem, delta: float) -> tuple[float, ...]:
    """Coordinatewise improvement step: delta times each objective's range.

    Objectives with zero spread across the problem's options fall back to a
    unit range so the step never degenerates.
    """
    if delta <= 0:
        raise InvalidTolerance(f"delta must be > 0, got {delta!r}")
    return tuple(delta * (r if r > 0 else 1.0) for r in problem.score_ranges())


def _improved(option: OptionPoint, steps: tuple[float, ...]) -> OptionPoint:
    return OptionPoint(option.name + "+", tuple(s + d for s, d in zip(option.scores, steps)))


def small_improvement_test(
    jury: Jury,
    problem: ChoiceProblem,
    first: OptionPoint,
    second: OptionPoint,
    delta: float,
) -> SmallImprovementResult:
    """Confirm incommensurability of a pair by the small-improvement test.

    An improved copy of the first option (every coordinate raised by
    delta times that objective's score range) must be unanimously preferred
    to its original yet still not unanimously preferred to the second
    option; the symmetric check with the roles swapped must also pass.
    """
    steps = improvement_steps(problem, delta)
    improved_first = _improved(first, steps)
    base = jury_classify(jury, first, second).relation
    if base is Relation.EQUAL:
        return SmallImprovementResult(False, "pair is Equal", improved_first)
    if base is Relation.PREFERRED_FIRST:
        return SmallImprovementResult(False, "pair already PreferredFirst", improved_first)
    if base is Relation.PREFERRED_SECOND:
        return SmallImprovementResult(False, "pair already PreferredSecond", improved_first)

    improved_second = _improved(second, steps)
    checks = (
        (improved_first, first, second, "first"),
        (improved_second, second, first, "second"),
    )
    for improved, original, rival, label in checks:
        if jury_classify(jury, improved, original).relation is not Relation.PREFERRED_FIRST:
            return SmallImprovementResult(
                False,
                f"improved {label} option is not unanimously preferred to its original",
                improved_first,
                improved_second,
            )
        if jury_classify(jury, improved, rival).relation is Relation.PREFERRED_FIRST:
            return SmallImprovementResult(
                False,
                f"improved {label} option is unanimously preferred to the rival",
                improved_first,
                improved_second,
            )
    return SmallImprovementResult(True, None, improved_first, improved_second)
