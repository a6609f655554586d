"""Method-comparison harness: one verdict table per approach, plus where
they disagree.

Each method gets a vocabulary matching what it can actually express:

* ensemble: first / second / equal / incommensurable;
* scalarised: first / second / tie (complete by construction);
* pareto: first / second when one option dominates, otherwise
  ``nondominated_pair`` (it genuinely cannot say more);
* metapolicy: first / second / tie / incommensurable, per the dispatch.

Agreement between two verdicts is compatibility of what they can mean: a
``nondominated_pair`` is compatible with both equal and incommensurable
(that ambiguity is Pareto's failure), while a scalarised ``tie`` asserts
equality and therefore clashes with an ensemble ``incommensurable``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .baselines import (
    EqualityDemo,
    MagnitudeDemo,
    ParetoResult,
    Ranking,
    ScalarisedModel,
    dominates,
    failure_demo_equality,
    failure_demo_magnitude,
    pareto_front,
    scalarised_rank,
)
from .ensemble import classification_matrix
from .metapolicy import GateOneModel, PipelineOutcome, Route, pipeline_dispatch
from .model import Relation
from .resolution import ResolutionReport
from .scenario import Scenario

METHODS = ("ensemble", "scalarised", "pareto", "metapolicy")

#: What each verdict token can mean in four-way terms.
_COMPATIBLE: dict[str, frozenset[str]] = {
    "first": frozenset({"first"}),
    "second": frozenset({"second"}),
    "equal": frozenset({"equal"}),
    "tie": frozenset({"equal"}),
    "incommensurable": frozenset({"incommensurable"}),
    "nondominated_pair": frozenset({"equal", "incommensurable"}),
}


def verdicts_compatible(first: str, second: str) -> bool:
    return bool(_COMPATIBLE[first] & _COMPATIBLE[second])


def default_gate_model() -> GateOneModel:
    """Hand-set gate used when no trained model is supplied.

    Leans on context affinity and rank disagreement; calibrated so that
    career-like trade-off scenarios clear the threshold while routine
    dominated ones do not.
    """
    return GateOneModel(
        context_weight=1.5,
        dispersion_weight=0.5,
        disagreement_weight=2.5,
        bias=-2.0,
        threshold=0.5,
    )


@dataclass(frozen=True)
class Disagreement:
    pair: tuple[str, str]
    method_a: str
    verdict_a: str
    method_b: str
    verdict_b: str


@dataclass(frozen=True)
class ComparisonReport:
    """Per-method pair tables with agreement bookkeeping and optional extras."""

    option_names: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...]
    tables: dict[str, dict[tuple[str, str], str]]
    front: ParetoResult
    ranking: Ranking
    pipeline: PipelineOutcome
    agreement: dict[tuple[str, str], int]
    disagreements: tuple[Disagreement, ...]
    magnitude_demo: MagnitudeDemo | None = None
    equality_demo: EqualityDemo | None = None
    resolutions: tuple[ResolutionReport, ...] = ()


def _pareto_verdict(scenario: Scenario, front: ParetoResult, pair: tuple[str, str]) -> str:
    first = scenario.problem.option(pair[0])
    second = scenario.problem.option(pair[1])
    if dominates(first, second):
        return "first"
    if dominates(second, first):
        return "second"
    return "nondominated_pair"


def _metapolicy_verdict(
    outcome: PipelineOutcome,
    scenario: Scenario,
    reference: ScalarisedModel,
    pair: tuple[str, str],
) -> str:
    if outcome.route is Route.SCALARISED:
        return {"first": "first", "second": "second", "equal": "tie"}[
            outcome.ranking.compare(*pair).value
        ]
    if pair in outcome.labels or (pair[1], pair[0]) in outcome.labels:
        return "incommensurable"
    first = scenario.problem.option(pair[0])
    second = scenario.problem.option(pair[1])
    if dominates(first, second):
        return "first"
    if dominates(second, first):
        return "second"
    va, vb = reference.value(first), reference.value(second)
    if va > vb:
        return "first"
    if va < vb:
        return "second"
    return "tie"


def _fallback_reference(scenario: Scenario) -> ScalarisedModel:
    if scenario.reference_model is not None:
        return scenario.reference_model
    d = scenario.problem.dimension
    return ScalarisedModel(tuple(1.0 / d for _ in range(d)))


def run_comparison(
    scenario: Scenario,
    gate_model: GateOneModel | None = None,
    include_demos: bool = False,
    resolutions: tuple[ResolutionReport, ...] = (),
) -> ComparisonReport:
    """Classify every pair with all four methods and tabulate disagreements.

    The scalarised and metapolicy methods use the scenario's reference model
    (equal weights when the scenario omits one); the metapolicy uses the
    supplied gate model or the hand-set default.
    """
    reference = _fallback_reference(scenario)
    gate = gate_model if gate_model is not None else default_gate_model()

    matrix = classification_matrix(scenario.jury, scenario.problem)
    pairs = tuple(pair for pair, _ in matrix.pairs())
    ranking = scalarised_rank(reference, scenario.problem)
    front = pareto_front(scenario.problem)
    outcome = pipeline_dispatch(
        gate, reference, scenario.problem, scenario.tolerances, scenario.context_tag
    )

    tables: dict[str, dict[tuple[str, str], str]] = {name: {} for name in METHODS}
    for pair in pairs:
        tables["ensemble"][pair] = matrix.get(*pair).value
        scal = ranking.compare(*pair)
        tables["scalarised"][pair] = "tie" if scal is Relation.EQUAL else scal.value
        tables["pareto"][pair] = _pareto_verdict(scenario, front, pair)
        tables["metapolicy"][pair] = _metapolicy_verdict(outcome, scenario, reference, pair)

    agreement: dict[tuple[str, str], int] = {}
    disagreements: list[Disagreement] = []
    for i in range(len(METHODS)):
        for j in range(i + 1, len(METHODS)):
            method_a, method_b = METHODS[i], METHODS[j]
            agree = 0
            for pair in pairs:
                verdict_a = tables[method_a][pair]
                verdict_b = tables[method_b][pair]
                if verdicts_compatible(verdict_a, verdict_b):
                    agree += 1
                else:
                    disagreements.append(
                        Disagreement(pair, method_a, verdict_a, method_b, verdict_b)
                    )
            agreement[(method_a, method_b)] = agree

    return ComparisonReport(
        option_names=scenario.problem.option_names,
        pairs=pairs,
        tables=tables,
        front=front,
        ranking=ranking,
        pipeline=outcome,
        agreement=agreement,
        disagreements=tuple(disagreements),
        magnitude_demo=failure_demo_magnitude() if include_demos else None,
        equality_demo=failure_demo_equality() if include_demos else None,
        resolutions=resolutions,
    )


def render_report_table(report: ComparisonReport) -> str:
    """Human-readable report rendering."""
    lines: list[str] = []
    width = max(len(a) + len(b) for a, b in report.pairs) + 3
    header = "pair".ljust(width) + "".join(m.ljust(18) for m in METHODS)
    lines.append(header)
    lines.append("-" * len(header))
    for pair in report.pairs:
        row = f"{pair[0]} {pair[1]}".ljust(width)
        row += "".join(report.tables[m][pair].ljust(18) for m in METHODS)
        lines.append(row)
    lines.append("")
    lines.append(f"pareto front: {', '.join(sorted(report.front.front))}")
    ranked = " > ".join("{" + ", ".join(g) + "}" for g in report.ranking.groups)
    lines.append(f"scalarised ranking: {ranked}")
    lines.append(
        f"metapolicy route: {report.pipeline.route.value} "
        f"(gate-1 probability {report.pipeline.gate1_probability:.4f})"
    )
    if report.pipeline.labels:
        labeled = ", ".join(f"{a}/{b}" for a, b in report.pipeline.labels)
        lines.append(f"metapolicy incommensurable labels: {labeled}")
    lines.append("")
    if report.disagreements:
        lines.append("disagreements:")
        for row in report.disagreements:
            lines.append(
                f"  {row.pair[0]} {row.pair[1]}: {row.method_a}={row.verdict_a} "
                f"vs {row.method_b}={row.verdict_b}"
            )
    else:
        lines.append("disagreements: none")
    return "\n".join(lines) + "\n"


def render_report_csv(report: ComparisonReport) -> str:
    """Machine-readable report rendering: one row per pair per method."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["table", "first", "second", "verdict"])
    for method in METHODS:
        for pair in report.pairs:
            writer.writerow([method, pair[0], pair[1], report.tables[method][pair]])
    for row in report.disagreements:
        writer.writerow(
            ["disagreement", row.pair[0], row.pair[1], f"{row.method_a}={row.verdict_a}|{row.method_b}={row.verdict_b}"]
        )
    return buffer.getvalue()
