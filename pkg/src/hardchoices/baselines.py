"""Scalarised and Pareto baselines, plus the demonstrations of where they fail.

Scalarised ranking collapses the objectives into one number, so its output
relation is complete by construction: every pair comes out preferred or
tied, never incommensurable. Pareto optimisation keeps every non-dominated
option, so it cannot tell a huge one-sided trade-off from a genuinely hard
pair, nor a hard pair from an exactly equal one. Both failures are packaged
here as concrete instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ensemble import ClassificationTrace, jury_classify, scalar_utility
from .errors import DimensionMismatch, InvalidWeight, UnsupportedDimension
from .model import (
    WEIGHT_SUM_TOLERANCE,
    ChoiceProblem,
    Jury,
    Objective,
    OptionPoint,
    Relation,
    UtilityForm,
    canonical_instance,
    validate_problem,
)
from .ensemble import classification_matrix


@dataclass(frozen=True)
class ScalarisedModel:
    """A single scalar reward model: simplex weights plus a functional form."""

    weights: tuple[float, ...]
    form: UtilityForm = UtilityForm.LINEAR

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "form", UtilityForm(self.form))
        if not weights:
            raise InvalidWeight("empty weight vector")
        for w in weights:
            if not math.isfinite(w) or w < 0:
                raise InvalidWeight(f"invalid weight {w!r}")
        if abs(sum(weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidWeight(f"weights sum to {sum(weights)!r}, not 1")

    def value(self, option: OptionPoint) -> float:
        return scalar_utility(self.weights, self.form, option)


@dataclass(frozen=True)
class Ranking:
    """A total ranking with exact-tie groups, best first."""

    groups: tuple[tuple[str, ...], ...]
    values: tuple[float, ...]

    def position(self, name: str) -> int:
        for rank, group in enumerate(self.groups):
            if name in group:
                return rank
        raise KeyError(f"no option named {name!r}")

    def compare(self, first: str, second: str) -> Relation:
        """The complete relation this ranking induces on a pair."""
        i, j = self.position(first), self.position(second)
        if i < j:
            return Relation.PREFERRED_FIRST
        if i > j:
            return Relation.PREFERRED_SECOND
        return Relation.EQUAL


@dataclass(frozen=True)
class ParetoResult:
    """Non-dominated option names plus one witness dominator per loser."""

    front: frozenset[str]
    dominated: dict[str, str]


def scalarised_rank(model: ScalarisedModel, problem: ChoiceProblem) -> Ranking:
    """Sort options by descending scalar value, grouping exact ties.

    The output is a complete relation by construction; there is no way for
    it to report incommensurability.
    """
    validate_problem(problem)
    if len(model.weights) != problem.dimension:
        raise DimensionMismatch(
            f"model has {len(model.weights)} weights, problem has {problem.dimension} objectives"
        )
    scored = [(model.value(option), index) for index, option in enumerate(problem.options)]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    groups: list[tuple[str, ...]] = []
    values: list[float] = []
    for value, index in scored:
        name = problem.options[index].name
        if values and value == values[-1]:
            groups[-1] = groups[-1] + (name,)
        else:
            groups.append((name,))
            values.append(value)
    return Ranking(tuple(groups), tuple(values))


def dominates(first: OptionPoint, second: OptionPoint) -> bool:
    """Strict Pareto dominance: at least as good everywhere, better somewhere."""
    if len(first.scores) != len(second.scores):
        raise DimensionMismatch(
            f"options {first.name!r} and {second.name!r} have different dimensions"
        )
    strict = False
    for a, b in zip(first.scores, second.scores):
        if a < b:
            return False
        if a > b:
            strict = True
    return strict


def pareto_front(problem: ChoiceProblem) -> ParetoResult:
    """Non-dominated options of a validated problem via the pairwise sweep."""
    validate_problem(problem)
    front: list[str] = []
    dominated: dict[str, str] = {}
    for option in problem.options:
        witness = None
        for other in problem.options:
            if other.name != option.name and dominates(other, option):
                witness = other.name
                break
        if witness is None:
            front.append(option.name)
        else:
            dominated[option.name] = witness
    return ParetoResult(frozenset(front), dominated)


def magnitude_gap_instance() -> tuple[ChoiceProblem, Jury]:
    """A vast one-sided pair: averting mass harm versus a small treat.

    Both options are Pareto-optimal (each wins one objective), yet any
    sane juror strictly prefers the first.
    """
    problem = ChoiceProblem(
        objectives=(Objective("harm_averted"), Objective("pleasure")),
        options=(
            OptionPoint("H", (1_000_000.0, 0.0)),
            OptionPoint("C", (0.0, 1.0)),
        ),
    )
    _, jury = canonical_instance()
    return validate_problem(problem), jury


@dataclass(frozen=True)
class MagnitudeDemo:
    """Pareto keeps both options of a hugely lopsided pair on the front."""

    problem: ChoiceProblem
    jury: Jury
    front: ParetoResult
    ensemble: ClassificationTrace

    @property
    def pareto_keeps_both(self) -> bool:
        names = self.problem.option_names
        return names[0] in self.front.front and names[1] in self.front.front

    @property
    def ensemble_prefers_first(self) -> bool:
        return self.ensemble.relation is Relation.PREFERRED_FIRST

    @property
    def exposes_failure(self) -> bool:
        return self.pareto_keeps_both and self.ensemble_prefers_first


def failure_demo_magnitude() -> MagnitudeDemo:
    """Show that Pareto cannot separate a lopsided pair from a hard one."""
    problem, jury = magnitude_gap_instance()
    front = pareto_front(problem)
    trace = jury_classify(jury, problem.options[0], problem.options[1])
    return MagnitudeDemo(problem, jury, front, trace)


@dataclass(frozen=True)
class EqualityDemo:
    """Identical Pareto output for an exactly equal pair and a hard pair."""

    jury: Jury
    twin_problem: ChoiceProblem
    twin_front: ParetoResult
    twin_relation: Relation
    hard_problem: ChoiceProblem
    hard_front: ParetoResult
    hard_relation: Relation

    @property
    def pareto_outputs_identical(self) -> bool:
        twin_pair_on_front = self.twin_front.front == frozenset(self.twin_problem.option_names)
        hard_pair_on_front = self.hard_front.front == frozenset(self.hard_problem.option_names)
        return twin_pair_on_front and hard_pair_on_front

    @property
    def ensemble_distinguishes(self) -> bool:
        return self.twin_relation is Relation.EQUAL and self.hard_relation is Relation.INCOMMENSURABLE

    @property
    def exposes_failure(self) -> bool:
        return self.pareto_outputs_identical and self.ensemble_distinguishes


def failure_demo_equality() -> EqualityDemo:
    """Show that Pareto output cannot distinguish equality from hardness."""
    canon_problem, jury = canonical_instance()
    twin_problem = validate_problem(
        ChoiceProblem(
            objectives=canon_problem.objectives,
            options=(OptionPoint("X", (5.0, 5.0)), OptionPoint("X_prime", (5.0, 5.0))),
        )
    )
    hard_problem = validate_problem(
        ChoiceProblem(
            objectives=canon_problem.objectives,
            options=(canon_problem.option("A"), canon_problem.option("B")),
        )
    )
    twin_front = pareto_front(twin_problem)
    hard_front = pareto_front(hard_problem)
    twin_relation = jury_classify(jury, *twin_problem.options).relation
    hard_relation = jury_classify(jury, *hard_problem.options).relation
    return EqualityDemo(
        jury, twin_problem, twin_front, twin_relation, hard_problem, hard_front, hard_relation
    )


@dataclass(frozen=True)
class ScalarisationSearch:
    """Result of the exhaustive weight-grid search.

    ``witness`` is the lexicographically smallest weight vector whose induced
    complete relation reproduces the jury's matrix, or None when the sweep
    finds none. ``searched_count`` is the number of grid points examined.
    """

    witness: tuple[float, ...] | None
    searched_count: int

    @property
    def impossible(self) -> bool:
        return self.witness is None


def _induced_relation(model: ScalarisedModel, first: OptionPoint, second: OptionPoint) -> Relation:
    va = model.value(first)
    vb = model.value(second)
    if va > vb:
        return Relation.PREFERRED_FIRST
    if va < vb:
        return Relation.PREFERRED_SECOND
    return Relation.EQUAL


def scalarisation_impossibility(
    problem: ChoiceProblem, jury: Jury, grid_resolution: int
) -> ScalarisationSearch:
    """Search the weight simplex for a scalar model matching the jury's matrix.

    A complete relation must call every pair preferred or tied, so any
    Incommensurable entry in the jury's matrix is unmatchable by definition
    (the small-improvement structure contradicts a tie under transitivity);
    the sweep still runs and reports how many weights were examined.
    Restricted to two objectives, where a grid on the 1-simplex is exhaustive
    at desk scale.
    """
    validate_problem(problem)
    if problem.dimension > 2:
        raise UnsupportedDimension(
            f"grid search supports at most 2 objectives, got {problem.dimension}"
        )
    if grid_resolution < 1:
        raise ValueError("grid_resolution must be a positive integer")
    target = dict(classification_matrix(jury, problem).pairs())
    pairs = {
        names: (problem.option(names[0]), problem.option(names[1])) for names in target
    }

    if problem.dimension == 1:
        candidates = [(1.0,)]
    elif grid_resolution == 1:
        candidates = [(0.0, 1.0)]
    else:
        step = 1.0 / (grid_resolution - 1)
        candidates = [(k * step, 1.0 - k * step) for k in range(grid_resolution)]

    searched = 0
    for weights in candidates:
        searched += 1
        model = ScalarisedModel(weights)
        matched = True
        for names, relation in target.items():
            if relation is Relation.INCOMMENSURABLE:
                matched = False
                break
            first, second = pairs[names]
            if _induced_relation(model, first, second) is not relation:
                matched = False
                break
        if matched:
            return ScalarisationSearch(weights, searched)
    return ScalarisationSearch(None, searched)
