"""Three-step meta-policy: likelihood gate, neighbourhood gate, dispatch.

The first gate scores how likely a choice is to be hard from three scenario
features (context-tag affinity, score dispersion, cross-objective rank
disagreement) through a logistic squash. The second gate checks whether two
options sit in the same neighbourhood under a reference scalarised model.
Choices gated out on either test are handled by scalarised ranking; the
rest go to Pareto optimisation with "incommensurable" labels on front pairs
that share a neighbourhood.

The pipeline never consults the juror ensemble: that is the point. Its
labels come from the gates alone, which is why it cannot tell an exactly
equal front pair from a hard one (the comparison harness exhibits this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .baselines import ParetoResult, Ranking, ScalarisedModel, pareto_front, scalarised_rank
from .errors import DegenerateCorpus, InvalidTolerance, InvalidWeight, UnknownContextTag
from .model import ChoiceProblem, OptionPoint, Relation, Tolerances, validate_problem

if TYPE_CHECKING:
    from .scenario import Scenario

#: Closed vocabulary of context tags with their hardness affinity. Career-like
#: contexts weigh material welfare against intellectual achievement and are
#: hard-prone; investment-like contexts balance profitability against risk and
#: rarely feel hard.
CONTEXT_AFFINITY: dict[str, float] = {
    "career": 0.9,
    "relocation": 0.8,
    "vacation": 0.6,
    "generic": 0.5,
    "procurement": 0.3,
    "investment": 0.15,
    "routine": 0.05,
}


@dataclass(frozen=True)
class GateFeatures:
    """Feature triple consumed by the likelihood gate."""

    context_affinity: float
    dispersion: float
    rank_disagreement: float

    def as_vector(self) -> tuple[float, float, float]:
        return (self.context_affinity, self.dispersion, self.rank_disagreement)


def context_affinity(tag: str) -> float:
    try:
        return CONTEXT_AFFINITY[tag]
    except KeyError:
        raise UnknownContextTag(
            f"context tag {tag!r} is not in the vocabulary {sorted(CONTEXT_AFFINITY)}"
        ) from None


def _normalised_columns(problem: ChoiceProblem) -> list[list[float]]:
    columns = []
    for i in range(problem.dimension):
        column = [o.scores[i] for o in problem.options]
        low, high = min(column), max(column)
        span = high - low
        if span == 0:
            columns.append([0.5] * len(column))
        else:
            columns.append([(v - low) / span for v in column])
    return columns


def score_dispersion(problem: ChoiceProblem) -> float:
    """Mean per-option spread of min-max normalised scores across objectives.

    High when options are strong on some objectives and weak on others;
    zero for one-objective problems.
    """
    if problem.dimension < 2:
        return 0.0
    columns = _normalised_columns(problem)
    n = len(problem.options)
    total = 0.0
    for k in range(n):
        row = [columns[i][k] for i in range(problem.dimension)]
        mean = sum(row) / len(row)
        total += math.sqrt(sum((v - mean) ** 2 for v in row) / len(row))
    return total / n


def rank_disagreement(problem: ChoiceProblem) -> float:
    """Fraction of (option pair, objective pair) combinations ordered oppositely.

    One objective strictly preferring the first option while another strictly
    prefers the second counts as a disagreement; ties count as agreement.
    Zero for one-objective problems.
    """
    d = problem.dimension
    options = problem.options
    if d < 2 or len(options) < 2:
        return 0.0
    disagreements = 0
    combos = 0
    for a in range(len(options)):
        for b in range(a + 1, len(options)):
            diffs = [options[a].scores[i] - options[b].scores[i] for i in range(d)]
            for i in range(d):
                for j in range(i + 1, d):
                    combos += 1
                    if diffs[i] * diffs[j] < 0:
                        disagreements += 1
    return disagreements / combos


def scenario_features(problem: ChoiceProblem, context_tag: str) -> GateFeatures:
    """Compute the gate-1 feature triple for a validated problem."""
    validate_problem(problem)
    return GateFeatures(
        context_affinity=context_affinity(context_tag),
        dispersion=score_dispersion(problem),
        rank_disagreement=rank_disagreement(problem),
    )


@dataclass(frozen=True)
class GateOneModel:
    """Logistic scorer of incommensurability likelihood.

    The disagreement weight must be nonnegative so the output probability is
    monotone nondecreasing in the rank-disagreement feature. ``threshold``
    splits "unlikely" (below) from "likely" (at or above).
    """

    context_weight: float
    dispersion_weight: float
    disagreement_weight: float
    bias: float
    threshold: float = 0.5

    def __post_init__(self):
        for name in ("context_weight", "dispersion_weight", "disagreement_weight", "bias", "threshold"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise InvalidWeight(f"{name} must be finite, got {value!r}")
        if self.disagreement_weight < 0:
            raise InvalidWeight(
                "disagreement_weight must be >= 0 to keep the likelihood monotone"
            )
        if not 0.0 < self.threshold < 1.0:
            raise InvalidTolerance(f"threshold must lie in (0, 1), got {self.threshold!r}")


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def gate1_likelihood(model: GateOneModel, features: GateFeatures) -> float:
    """Probability in [0, 1] that the choice involves incommensurability."""
    z = (
        model.context_weight * features.context_affinity
        + model.dispersion_weight * features.dispersion
        + model.disagreement_weight * features.rank_disagreement
        + model.bias
    )
    return _sigmoid(z)


def scenario_is_hard(scenario: "Scenario") -> bool:
    """Training label: does the scenario's ground truth contain a hard pair?"""
    if scenario.ground_truth is None:
        raise ValueError("scenario carries no ground-truth labels")
    return any(rel is Relation.INCOMMENSURABLE for rel in scenario.ground_truth.values())


def train_gate1(corpus: Sequence["Scenario"], threshold: float = 0.5) -> GateOneModel:
    """Fit the likelihood gate on labeled synthetic scenarios.

    A deterministic convex fit (L-BFGS logistic regression with a fixed
    iteration budget; no randomness enters the solver). The disagreement
    coefficient is floored at zero to preserve the monotonicity contract.
    """
    from sklearn.linear_model import LogisticRegression

    if not corpus:
        raise DegenerateCorpus("empty corpus")
    features = []
    labels = []
    for scenario in corpus:
        f = scenario_features(scenario.problem, scenario.context_tag)
        features.append(f.as_vector())
        labels.append(1 if scenario_is_hard(scenario) else 0)
    if len(set(labels)) < 2:
        raise DegenerateCorpus("corpus contains a single class")
    fit = LogisticRegression(C=100.0, solver="lbfgs", max_iter=500)
    fit.fit(features, labels)
    cw, dw, gw = (float(v) for v in fit.coef_[0])
    return GateOneModel(
        context_weight=cw,
        dispersion_weight=dw,
        disagreement_weight=max(gw, 0.0),
        bias=float(fit.intercept_[0]),
        threshold=threshold,
    )


def gate1_accuracy(model: GateOneModel, corpus: Sequence["Scenario"]) -> float:
    """Fraction of scenarios whose thresholded likelihood matches the label."""
    if not corpus:
        raise DegenerateCorpus("empty corpus")
    hits = 0
    for scenario in corpus:
        f = scenario_features(scenario.problem, scenario.context_tag)
        predicted = gate1_likelihood(model, f) >= model.threshold
        if predicted == scenario_is_hard(scenario):
            hits += 1
    return hits / len(corpus)


@dataclass(frozen=True)
class NeighbourhoodResult:
    """Gate-2 outcome: absolute reference-utility margin against tau."""

    same_neighbourhood: bool
    margin: float


def gate2_neighbourhood(
    reference: ScalarisedModel, first: OptionPoint, second: OptionPoint, tau: float
) -> NeighbourhoodResult:
    """Are two options within tau of each other under the reference model?"""
    if tau < 0 or not math.isfinite(tau):
        raise InvalidTolerance(f"tau must be finite and >= 0, got {tau!r}")
    margin = abs(reference.value(first) - reference.value(second))
    return NeighbourhoodResult(margin <= tau, margin)


class Route(str, Enum):
    SCALARISED = "scalarised"
    PARETO = "pareto"


@dataclass(frozen=True)
class PipelineOutcome:
    """Where the dispatch sent the problem and what came back.

    Exactly one of ``ranking`` (scalarised route) and ``front`` (Pareto
    route) is set. ``labels`` lists the front pairs marked incommensurable;
    it is empty on the scalarised route and for single-member fronts.
    """

    route: Route
    ranking: Ranking | None
    front: ParetoResult | None
    labels: tuple[tuple[str, str], ...]
    gate1_probability: float
    gate2_margins: dict[tuple[str, str], float]


def pipeline_dispatch(
    gate: GateOneModel,
    reference: ScalarisedModel,
    problem: ChoiceProblem,
    tolerances: Tolerances,
    context_tag: str,
) -> PipelineOutcome:
    """Route a problem per the two gates and label the surviving front pairs.

    Scalarised ranking handles choices the likelihood gate calls unlikely,
    and choices where no option pair shares a neighbourhood. Everything else
    goes to Pareto optimisation; front pairs in the same neighbourhood are
    labeled incommensurable.
    """
    validate_problem(problem)
    features = scenario_features(problem, context_tag)
    probability = gate1_likelihood(gate, features)

    options = problem.options
    margins: dict[tuple[str, str], float] = {}
    same: dict[tuple[str, str], bool] = {}
    for i in range(len(options)):
        for j in range(i + 1, len(options)):
            key = (options[i].name, options[j].name)
            result = gate2_neighbourhood(reference, options[i], options[j], tolerances.tau)
            margins[key] = result.margin
            same[key] = result.same_neighbourhood

    likely = probability >= gate.threshold
    if not likely or not any(same.values()):
        ranking = scalarised_rank(reference, problem)
        return PipelineOutcome(Route.SCALARISED, ranking, None, (), probability, margins)

    front = pareto_front(problem)
    labels = tuple(
        pair for pair, near in same.items()
        if near and pair[0] in front.front and pair[1] in front.front
    )
    return PipelineOutcome(Route.PARETO, None, front, labels, probability, margins)
