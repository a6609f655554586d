"""Synthetic scenario generation with ground-truth labels.

Scenarios are built constructively per class so the advertised mix is met
exactly, then cross-checked against the brute-force reference classifier
(never the production classifier, which would make downstream acceptance
circular). Everything is driven by one seeded ``random.Random``, so equal
seeds give byte-identical corpora after serialisation.

Class construction:

* hard/straddle: a non-dominated pair plus two jurors built to disagree on
  it (one weight vector leaning on a coordinate where the first option
  wins, one leaning the other way); extra jurors are random.
* hard/equal_twin: an exactly duplicated option between two trade-off
  decoys, all level under the equal-weight reference model. The twin pair
  is equal while decoy pairs are hard, which is the configuration that
  trips the meta-policy's neighbourhood labeling.
* easy/dominant: one option beats the other on every coordinate.
* easy/tradeoff: a non-dominated pair, but every juror is built on the
  same side. Feature-wise these look exactly like hard scenarios, which is
  what makes gate-1 labels uninformative under this style.
* equal: an exactly duplicated pair.

Any extra options beyond the construction are a strictly dominated filler
chain, so they never change the scenario's class.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .baselines import ScalarisedModel
from .errors import InfeasibleMix, ScenarioSemanticError, ScenarioSyntaxError
from .metapolicy import CONTEXT_AFFINITY
from .model import (
    ChoiceProblem,
    Juror,
    Jury,
    Objective,
    OptionPoint,
    Relation,
    Tolerances,
    validate_problem,
)
from .oracle import reference_relation_map
from .scenario import Scenario, _split_sections

_HARD_TAGS = ("career", "relocation")
_EASY_TAGS = ("investment", "routine")
_EQUAL_TAGS = ("procurement", "routine")


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for the corpus generator; see the module docstring for styles."""

    count: int
    dimensions: int = 2
    options: int = 2
    jurors: int = 2
    mix_hard: float = 0.4
    mix_easy: float = 0.4
    mix_equal: float = 0.2
    score_low: float = 1.0
    score_high: float = 10.0
    easy_style: str = "dominant"
    hard_style: str = "straddle"
    tag_by_class: bool = True
    tau: float | None = None
    delta: float = 0.05
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.dimensions < 1 or self.options < 2 or self.jurors < 1:
            raise ValueError("need dimensions >= 1, options >= 2, jurors >= 1")
        mixes = (self.mix_hard, self.mix_easy, self.mix_equal)
        if any(m < 0 for m in mixes) or abs(sum(mixes) - 1.0) > 1e-9:
            raise ValueError("class mix must be nonnegative and sum to 1")
        if not (0 < self.score_low < self.score_high):
            raise ValueError("need 0 < score_low < score_high")
        if self.easy_style not in ("dominant", "tradeoff"):
            raise ValueError(f"unknown easy_style {self.easy_style!r}")
        if self.hard_style not in ("straddle", "equal_twin"):
            raise ValueError(f"unknown hard_style {self.hard_style!r}")
        if self.delta <= 0 or self.epsilon < 0:
            raise ValueError("need delta > 0 and epsilon >= 0")

    @property
    def span(self) -> float:
        return self.score_high - self.score_low


def sample_problem(
    rng: random.Random, options: int, dimensions: int, low: float = 0.0, high: float = 10.0
) -> ChoiceProblem:
    """A problem with uniformly random scores (test utility)."""
    objectives = tuple(Objective(f"obj{i + 1}") for i in range(dimensions))
    points = tuple(
        OptionPoint(f"O{k + 1}", tuple(rng.uniform(low, high) for _ in range(dimensions)))
        for k in range(options)
    )
    return validate_problem(ChoiceProblem(objectives, points))


def sample_weights(rng: random.Random, dimensions: int) -> tuple[float, ...]:
    """Uniform draw from the probability simplex (normalised exponentials)."""
    raw = [rng.expovariate(1.0) for _ in range(dimensions)]
    total = sum(raw)
    return tuple(v / total for v in raw)


def sample_jury(
    rng: random.Random, dimensions: int, count: int, epsilon: float = 1e-9
) -> Jury:
    """A jury of random linear jurors (test utility)."""
    return Jury(
        tuple(
            Juror(f"J{k + 1}", sample_weights(rng, dimensions), epsilon=epsilon)
            for k in range(count)
        )
    )


def _weights_favoring(
    rng: random.Random, diffs: tuple[float, ...], epsilon: float
) -> tuple[float, ...]:
    """A weight vector whose utility margin over ``diffs`` is safely positive."""
    d = len(diffs)
    pivot = max(range(d), key=lambda i: diffs[i])
    if diffs[pivot] <= 0:
        raise RuntimeError("no coordinate favors the requested side")
    if d == 1:
        return (1.0,)
    shares = [rng.expovariate(1.0) for _ in range(d - 1)]
    total = sum(shares)
    shares = [s / total for s in shares]
    floor = 10 * max(epsilon, 1e-9)
    eta = 0.25
    while eta >= 1e-12:
        weights = [0.0] * d
        k = 0
        for i in range(d):
            if i != pivot:
                weights[i] = eta * shares[k]
                k += 1
        weights[pivot] = 1.0 - eta
        if sum(w * g for w, g in zip(weights, diffs)) > floor:
            return tuple(weights)
        eta /= 2
    weights = [0.0] * d
    weights[pivot] = 1.0
    return tuple(weights)


def _nondominated_scores(
    rng: random.Random, config: GeneratorConfig
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    lo, hi, d = config.score_low, config.score_high, config.dimensions
    for _ in range(1000):
        a = tuple(rng.uniform(lo, hi) for _ in range(d))
        b = tuple(rng.uniform(lo, hi) for _ in range(d))
        a_up = any(x > y for x, y in zip(a, b))
        b_up = any(x < y for x, y in zip(a, b))
        if a_up and b_up:
            return a, b
    # constructive fallback for pathological configs
    base = tuple(rng.uniform(lo + 0.3 * config.span, hi - 0.3 * config.span) for _ in range(d))
    i, j = rng.sample(range(d), 2)
    step = 0.2 * config.span
    b = list(base)
    b[i] -= step
    b[j] += step
    return base, tuple(b)


def _filler_options(existing: list[OptionPoint], total: int) -> list[OptionPoint]:
    """A strictly dominated chain below every existing option."""
    floor = [min(o.scores[i] for o in existing) for i in range(len(existing[0].scores))]
    fillers = []
    scale = 0.9
    for k in range(total - len(existing)):
        fillers.append(OptionPoint(f"F{k + 1}", tuple(v * scale for v in floor)))
        scale *= 0.9
    return fillers


def _random_jurors(rng: random.Random, config: GeneratorConfig, count: int, start: int) -> list[Juror]:
    return [
        Juror(f"J{start + k}", sample_weights(rng, config.dimensions), epsilon=config.epsilon)
        for k in range(count)
    ]


def _build_hard(rng: random.Random, config: GeneratorConfig) -> tuple[list[OptionPoint], list[Juror]]:
    if config.hard_style == "equal_twin":
        return _build_hard_equal_twin(rng, config)
    a, b = _nondominated_scores(rng, config)
    diffs = tuple(x - y for x, y in zip(a, b))
    jurors = [
        Juror("J1", _weights_favoring(rng, diffs, config.epsilon), epsilon=config.epsilon),
        Juror("J2", _weights_favoring(rng, tuple(-v for v in diffs), config.epsilon), epsilon=config.epsilon),
    ]
    jurors.extend(_random_jurors(rng, config, config.jurors - 2, start=3))
    options = [OptionPoint("O1", a), OptionPoint("O2", b)]
    return options, jurors


def _build_hard_equal_twin(
    rng: random.Random, config: GeneratorConfig
) -> tuple[list[OptionPoint], list[Juror]]:
    lo, hi, d = config.score_low, config.score_high, config.dimensions
    centre = tuple(rng.uniform(lo + 0.3 * config.span, hi - 0.3 * config.span) for _ in range(d))
    step = rng.uniform(0.1, 0.25) * config.span
    i, j = rng.sample(range(d), 2)
    first = list(centre)
    first[i] += step
    first[j] -= step
    second = list(centre)
    second[i] -= step
    second[j] += step
    options = [
        OptionPoint("T1", centre),
        OptionPoint("T2", centre),
        OptionPoint("D1", tuple(first)),
        OptionPoint("D2", tuple(second)),
    ]
    diffs = tuple(x - y for x, y in zip(first, second))
    jurors = [
        Juror("J1", _weights_favoring(rng, diffs, config.epsilon), epsilon=config.epsilon),
        Juror("J2", _weights_favoring(rng, tuple(-v for v in diffs), config.epsilon), epsilon=config.epsilon),
    ]
    jurors.extend(_random_jurors(rng, config, config.jurors - 2, start=3))
    return options, jurors


def _build_easy(rng: random.Random, config: GeneratorConfig) -> tuple[list[OptionPoint], list[Juror]]:
    if config.easy_style == "tradeoff":
        a, b = _nondominated_scores(rng, config)
        diffs = tuple(x - y for x, y in zip(a, b))
        jurors = [
            Juror(f"J{k + 1}", _weights_favoring(rng, diffs, config.epsilon), epsilon=config.epsilon)
            for k in range(config.jurors)
        ]
    else:
        lo, hi = config.score_low, config.score_high
        a = tuple(
            rng.uniform(lo + 0.35 * config.span, hi) for _ in range(config.dimensions)
        )
        gaps = tuple(rng.uniform(0.05, 0.3) * config.span for _ in range(config.dimensions))
        b = tuple(x - g for x, g in zip(a, gaps))
        jurors = _random_jurors(rng, config, config.jurors, start=1)
    if rng.random() < 0.5:
        a, b = b, a
    options = [OptionPoint("O1", a), OptionPoint("O2", b)]
    return options, jurors


def _build_equal(rng: random.Random, config: GeneratorConfig) -> tuple[list[OptionPoint], list[Juror]]:
    lo, hi = config.score_low, config.score_high
    scores = tuple(rng.uniform(lo, hi) for _ in range(config.dimensions))
    options = [OptionPoint("T1", scores), OptionPoint("T2", scores)]
    return options, _random_jurors(rng, config, config.jurors, start=1)


def _class_matches(label: str, relations: dict[tuple[str, str], Relation]) -> bool:
    values = relations.values()
    any_hard = any(rel is Relation.INCOMMENSURABLE for rel in values)
    any_equal = any(rel is Relation.EQUAL for rel in values)
    if label == "hard":
        return any_hard
    if label == "equal":
        return any_equal and not any_hard
    return not any_hard and not any_equal


def _class_counts(config: GeneratorConfig) -> dict[str, int]:
    mixes = (("hard", config.mix_hard), ("easy", config.mix_easy), ("equal", config.mix_equal))
    counts = {}
    remainders = []
    for name, mix in mixes:
        exact = mix * config.count
        counts[name] = math.floor(exact)
        remainders.append((exact - counts[name], name))
    remainders.sort(key=lambda item: (-item[0], item[1]))
    for k in range(config.count - sum(counts.values())):
        counts[remainders[k][1]] += 1
    return counts


def _pick_tag(rng: random.Random, config: GeneratorConfig, label: str) -> str:
    if not config.tag_by_class:
        return rng.choice(sorted(CONTEXT_AFFINITY))
    pool = {"hard": _HARD_TAGS, "easy": _EASY_TAGS, "equal": _EQUAL_TAGS}[label]
    return rng.choice(pool)


def _build_scenario(rng: random.Random, config: GeneratorConfig, label: str) -> Scenario:
    builders = {"hard": _build_hard, "easy": _build_easy, "equal": _build_equal}
    for _ in range(50):
        options, jurors = builders[label](rng, config)
        if len(options) < config.options:
            options = options + _filler_options(options, config.options)
        problem = validate_problem(
            ChoiceProblem(
                tuple(Objective(f"obj{i + 1}") for i in range(config.dimensions)),
                tuple(options),
            )
        )
        jury = Jury(tuple(jurors))
        relations = reference_relation_map(jury, problem)
        if not _class_matches(label, relations):
            continue
        d = config.dimensions
        tau = config.tau if config.tau is not None else config.span / 4
        return Scenario(
            problem=problem,
            jury=jury,
            tolerances=Tolerances(tau=tau, delta=config.delta, epsilon_default=config.epsilon),
            context_tag=_pick_tag(rng, config, label),
            ground_truth=relations,
            reference_model=ScalarisedModel(tuple(1.0 / d for _ in range(d))),
        )
    raise RuntimeError(f"could not generate a {label!r} scenario for this config")


def generate_corpus(config: GeneratorConfig, seed: int) -> tuple[Scenario, ...]:
    """Generate ``config.count`` labeled scenarios, deterministic per seed.

    The class mix is met exactly by allocation (largest-remainder rounding),
    then shuffled, so any corpus of reasonable size is trivially within the
    advertised tolerance of the configured mix.
    """
    if config.mix_hard > 0 and config.jurors < 2:
        raise InfeasibleMix("incommensurable scenarios require at least two jurors")
    if config.mix_hard > 0 and config.dimensions < 2:
        raise InfeasibleMix("incommensurable scenarios require at least two objectives")
    if config.mix_hard > 0 and config.hard_style == "equal_twin" and config.options < 4:
        raise InfeasibleMix("equal_twin scenarios require at least four options")
    if config.mix_easy > 0 and config.easy_style == "tradeoff" and config.dimensions < 2:
        raise InfeasibleMix("tradeoff scenarios require at least two objectives")

    rng = random.Random(seed)
    counts = _class_counts(config)
    labels = (
        ["hard"] * counts["hard"] + ["easy"] * counts["easy"] + ["equal"] * counts["equal"]
    )
    rng.shuffle(labels)
    return tuple(_build_scenario(rng, config, label) for label in labels)


_INT_KEYS = ("count", "dimensions", "options", "jurors")
_FLOAT_KEYS = ("mix_hard", "mix_easy", "mix_equal", "score_low", "score_high", "tau", "delta", "epsilon")
_STR_KEYS = ("easy_style", "hard_style")
_BOOL_KEYS = ("tag_by_class",)


def parse_generator_config(text: str) -> GeneratorConfig:
    """Parse a ``[generator]`` block of ``key value`` lines.

    Only ``count`` is required; every other key falls back to the
    :class:`GeneratorConfig` default.
    """
    sections = _split_sections(text, ("generator",), "generator config")
    if "generator" not in sections:
        raise ScenarioSemanticError("missing required section [generator]")
    values: dict[str, object] = {}
    for line in sections["generator"]:
        if len(line.tokens) != 2:
            raise ScenarioSyntaxError(
                line.number, line.tokens[0][1], "expected 'key value' in [generator]"
            )
        key, raw = line.tokens[0][0], line.tokens[1][0]
        raw_column = line.tokens[1][1]
        if key in values:
            raise ScenarioSemanticError(f"duplicate [generator] key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(raw)
            except ValueError:
                raise ScenarioSyntaxError(
                    line.number, raw_column, f"expected an integer, got {raw!r}"
                ) from None
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(raw)
            except ValueError:
                raise ScenarioSyntaxError(
                    line.number, raw_column, f"expected a number, got {raw!r}"
                ) from None
        elif key in _STR_KEYS:
            values[key] = raw
        elif key in _BOOL_KEYS:
            if raw not in ("true", "false"):
                raise ScenarioSemanticError(f"[generator] key {key!r} expects true or false")
            values[key] = raw == "true"
        else:
            raise ScenarioSemanticError(f"unknown [generator] key {key!r}")
    if "count" not in values:
        raise ScenarioSemanticError("[generator] is missing 'count'")
    try:
        return GeneratorConfig(**values)  # type: ignore[arg-type]
    except (ValueError, TypeError) as exc:
        raise ScenarioSemanticError(str(exc)) from exc
