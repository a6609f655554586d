"""Scenario bundle and its line-oriented text format.

A scenario file is a sequence of bracketed section headers with one record
per line, full-line ``#`` comments, and decimal numerals. There is no
dependency on any interchange standard: files are diffable and easy to
write by hand. Floats serialise through ``repr`` so parsing restores them
exactly.

Grammar reference (the canonical desk instance serialises to exactly this
shape)::

    # optional comments anywhere
    [objectives]
    income
    excitement
    [options]
    A 10.0 2.0
    B 4.0 8.0
    [jury]
    alpha linear 1e-09 0.8 0.2
    beta linear 1e-09 0.3 0.7
    [tolerances]
    epsilon_default 1e-09
    tau 1.0
    delta 0.05
    [context]
    career
    [ground_truth]
    A B incommensurable
    [reference_model]
    linear 0.5 0.5

``ground_truth`` and ``reference_model`` are optional; the other sections
are required. A gate model file holds a single ``[gate1_model]`` block of
``key value`` lines (see :func:`serialize_gate_model`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .baselines import ScalarisedModel
from .errors import (
    DimensionMismatch,
    DuplicateName,
    HardChoiceError,
    ScenarioSemanticError,
    ScenarioSyntaxError,
)
from .metapolicy import GateOneModel, context_affinity
from .model import (
    ChoiceProblem,
    Juror,
    Jury,
    Objective,
    OptionPoint,
    Relation,
    Tolerances,
    UtilityForm,
    canonical_instance,
    validate_problem,
)

_TOKEN = re.compile(r"\S+")

_SCENARIO_SECTIONS = (
    "objectives",
    "options",
    "jury",
    "tolerances",
    "context",
    "ground_truth",
    "reference_model",
)
_REQUIRED_SECTIONS = ("objectives", "options", "jury", "tolerances", "context")

_RELATION_TOKENS = {relation.value: relation for relation in Relation}
_FORM_TOKENS = {form.value: form for form in UtilityForm}


@dataclass(frozen=True)
class Scenario:
    """A choice problem bundled with everything a harness run needs."""

    problem: ChoiceProblem
    jury: Jury
    tolerances: Tolerances
    context_tag: str
    ground_truth: dict[tuple[str, str], Relation] | None = None
    reference_model: ScalarisedModel | None = None

    def __post_init__(self):
        validate_problem(self.problem)
        if self.jury.dimension != self.problem.dimension:
            raise DimensionMismatch(
                f"jury dimension {self.jury.dimension} does not match "
                f"problem dimension {self.problem.dimension}"
            )
        context_affinity(self.context_tag)
        if self.reference_model is not None and len(self.reference_model.weights) != self.problem.dimension:
            raise DimensionMismatch("reference model dimension does not match the problem")
        if self.ground_truth is not None:
            names = set(self.problem.option_names)
            seen: set[frozenset[str]] = set()
            for (first, second), relation in self.ground_truth.items():
                if first not in names or second not in names:
                    raise ScenarioSemanticError(
                        f"ground_truth pair ({first!r}, {second!r}) names an unknown option"
                    )
                if first == second:
                    raise ScenarioSemanticError(
                        f"ground_truth pair ({first!r}, {second!r}) repeats one option"
                    )
                if not isinstance(relation, Relation):
                    raise ScenarioSemanticError(f"ground_truth value {relation!r} is not a relation")
                key = frozenset((first, second))
                if key in seen:
                    raise ScenarioSemanticError(
                        f"ground_truth lists pair ({first!r}, {second!r}) more than once"
                    )
                seen.add(key)

    def ground_truth_relation(self, first: str, second: str) -> Relation | None:
        """Look up a labeled pair in either orientation."""
        if self.ground_truth is None:
            return None
        if (first, second) in self.ground_truth:
            return self.ground_truth[(first, second)]
        if (second, first) in self.ground_truth:
            return self.ground_truth[(second, first)].swapped()
        return None


@dataclass(frozen=True)
class _Line:
    number: int
    tokens: tuple[tuple[str, int], ...]  # (token, 1-based column)


def _split_sections(text: str, allowed, what: str) -> dict[str, list[_Line]]:
    sections: dict[str, list[_Line]] = {}
    current: str | None = None
    saw_content = False
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        saw_content = True
        column = len(raw) - len(raw.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise ScenarioSyntaxError(number, column, f"malformed section header {stripped!r}")
            name = stripped[1:-1]
            if name not in allowed:
                raise ScenarioSyntaxError(number, column, f"unknown section [{name}]")
            if name in sections:
                raise ScenarioSyntaxError(number, column, f"duplicate section [{name}]")
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ScenarioSyntaxError(number, column, "content before any section header")
        tokens = tuple((m.group(0), m.start() + 1) for m in _TOKEN.finditer(raw))
        sections[current].append(_Line(number, tokens))
    if not saw_content:
        raise ScenarioSyntaxError(1, 1, f"empty {what}")
    return sections


def _number(token: str, line: int, column: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ScenarioSyntaxError(line, column, f"expected a number, got {token!r}") from None


def _expect_tokens(line: _Line, minimum: int, maximum: int | None, description: str):
    count = len(line.tokens)
    if count < minimum or (maximum is not None and count > maximum):
        raise ScenarioSyntaxError(
            line.number, line.tokens[0][1] if line.tokens else 1,
            f"expected {description}, got {count} tokens",
        )


def _semantic(build):
    try:
        return build()
    except (ScenarioSyntaxError, ScenarioSemanticError):
        raise
    except (HardChoiceError, ValueError) as exc:
        raise ScenarioSemanticError(str(exc)) from exc


def _key_value_section(lines: list[_Line], keys: tuple[str, ...], section: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for line in lines:
        _expect_tokens(line, 2, 2, f"'key value' in [{section}]")
        (key, key_col), (raw, raw_col) = line.tokens
        if key not in keys:
            raise ScenarioSemanticError(f"unknown [{section}] key {key!r}")
        if key in values:
            raise ScenarioSemanticError(f"duplicate [{section}] key {key!r}")
        values[key] = _number(raw, line.number, raw_col)
    missing = [key for key in keys if key not in values]
    if missing:
        raise ScenarioSemanticError(f"[{section}] is missing {missing}")
    return values


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; errors carry line:column (syntax) or the violated
    invariant (semantic)."""
    sections = _split_sections(text, _SCENARIO_SECTIONS, "scenario")
    for name in _REQUIRED_SECTIONS:
        if name not in sections:
            raise ScenarioSemanticError(f"missing required section [{name}]")

    objectives = []
    for line in sections["objectives"]:
        _expect_tokens(line, 1, 1, "one objective name per line")
        objectives.append(_semantic(lambda: Objective(line.tokens[0][0])))

    options = []
    for line in sections["options"]:
        _expect_tokens(line, 2, None, "an option name followed by scores")
        name = line.tokens[0][0]
        scores = tuple(_number(tok, line.number, col) for tok, col in line.tokens[1:])
        options.append(_semantic(lambda: OptionPoint(name, scores)))

    jurors = []
    for line in sections["jury"]:
        _expect_tokens(line, 4, None, "'id form epsilon weights...' in [jury]")
        juror_id = line.tokens[0][0]
        form_token, form_col = line.tokens[1]
        if form_token not in _FORM_TOKENS:
            raise ScenarioSemanticError(
                f"juror {juror_id!r}: unknown utility form {form_token!r}"
            )
        epsilon = _number(line.tokens[2][0], line.number, line.tokens[2][1])
        weights = tuple(_number(tok, line.number, col) for tok, col in line.tokens[3:])
        jurors.append(
            _semantic(lambda: Juror(juror_id, weights, _FORM_TOKENS[form_token], epsilon))
        )

    tolerance_values = _key_value_section(
        sections["tolerances"], ("epsilon_default", "tau", "delta"), "tolerances"
    )
    tolerances = _semantic(
        lambda: Tolerances(
            tau=tolerance_values["tau"],
            delta=tolerance_values["delta"],
            epsilon_default=tolerance_values["epsilon_default"],
        )
    )

    context_lines = sections["context"]
    if len(context_lines) != 1:
        raise ScenarioSemanticError("[context] must hold exactly one tag line")
    _expect_tokens(context_lines[0], 1, 1, "a single context tag")
    context_tag = context_lines[0].tokens[0][0]

    ground_truth = None
    if "ground_truth" in sections:
        ground_truth = {}
        for line in sections["ground_truth"]:
            _expect_tokens(line, 3, 3, "'first second relation' in [ground_truth]")
            first, second = line.tokens[0][0], line.tokens[1][0]
            relation_token = line.tokens[2][0]
            if relation_token not in _RELATION_TOKENS:
                raise ScenarioSemanticError(
                    f"unknown relation {relation_token!r} in [ground_truth]"
                )
            ground_truth[(first, second)] = _RELATION_TOKENS[relation_token]

    reference_model = None
    if "reference_model" in sections:
        model_lines = sections["reference_model"]
        if len(model_lines) != 1:
            raise ScenarioSemanticError("[reference_model] must hold exactly one line")
        line = model_lines[0]
        _expect_tokens(line, 2, None, "'form weights...' in [reference_model]")
        form_token = line.tokens[0][0]
        if form_token not in _FORM_TOKENS:
            raise ScenarioSemanticError(f"unknown utility form {form_token!r} in [reference_model]")
        weights = tuple(_number(tok, line.number, col) for tok, col in line.tokens[1:])
        reference_model = _semantic(lambda: ScalarisedModel(weights, _FORM_TOKENS[form_token]))

    return _semantic(
        lambda: Scenario(
            problem=ChoiceProblem(tuple(objectives), tuple(options)),
            jury=Jury(tuple(jurors)),
            tolerances=tolerances,
            context_tag=context_tag,
            ground_truth=ground_truth,
            reference_model=reference_model,
        )
    )


def _fmt(value: float) -> str:
    return repr(float(value))


def serialize_scenario(scenario: Scenario) -> str:
    """Render a scenario to its canonical text; parsing restores it exactly."""
    lines: list[str] = ["[objectives]"]
    lines.extend(objective.name for objective in scenario.problem.objectives)
    lines.append("[options]")
    for option in scenario.problem.options:
        lines.append(" ".join([option.name, *(_fmt(s) for s in option.scores)]))
    lines.append("[jury]")
    for juror in scenario.jury.jurors:
        lines.append(
            " ".join(
                [juror.id, juror.form.value, _fmt(juror.epsilon), *(_fmt(w) for w in juror.weights)]
            )
        )
    lines.append("[tolerances]")
    lines.append(f"epsilon_default {_fmt(scenario.tolerances.epsilon_default)}")
    lines.append(f"tau {_fmt(scenario.tolerances.tau)}")
    lines.append(f"delta {_fmt(scenario.tolerances.delta)}")
    lines.append("[context]")
    lines.append(scenario.context_tag)
    if scenario.ground_truth is not None:
        lines.append("[ground_truth]")
        for (first, second), relation in scenario.ground_truth.items():
            lines.append(f"{first} {second} {relation.value}")
    if scenario.reference_model is not None:
        lines.append("[reference_model]")
        model = scenario.reference_model
        lines.append(" ".join([model.form.value, *(_fmt(w) for w in model.weights)]))
    return "\n".join(lines) + "\n"


_GATE_KEYS = ("context_weight", "dispersion_weight", "disagreement_weight", "bias", "threshold")


def serialize_gate_model(model: GateOneModel) -> str:
    lines = ["[gate1_model]"]
    for key in _GATE_KEYS:
        lines.append(f"{key} {_fmt(getattr(model, key))}")
    return "\n".join(lines) + "\n"


def parse_gate_model(text: str) -> GateOneModel:
    sections = _split_sections(text, ("gate1_model",), "gate model")
    if "gate1_model" not in sections:
        raise ScenarioSemanticError("missing required section [gate1_model]")
    values = _key_value_section(sections["gate1_model"], _GATE_KEYS, "gate1_model")
    return _semantic(lambda: GateOneModel(**values))


def canonical_scenario() -> Scenario:
    """The canonical desk instance as a full scenario.

    Ground truth is frozen from the brute-force reference classification of
    every pair; the reference model weighs both objectives equally.
    """
    problem, jury = canonical_instance()
    return Scenario(
        problem=problem,
        jury=jury,
        tolerances=Tolerances(tau=1.0, delta=0.05, epsilon_default=1e-9),
        context_tag="career",
        ground_truth={
            ("A", "B"): Relation.INCOMMENSURABLE,
            ("A", "A+"): Relation.PREFERRED_SECOND,
            ("A", "B+"): Relation.INCOMMENSURABLE,
            ("B", "A+"): Relation.INCOMMENSURABLE,
            ("B", "B+"): Relation.PREFERRED_SECOND,
            ("A+", "B+"): Relation.INCOMMENSURABLE,
        },
        reference_model=ScalarisedModel((0.5, 0.5)),
    )
