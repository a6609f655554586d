"""Turning an incommensurable pair into a preferred one.

Two mechanisms operate on the jury. Abandonment removes every juror whose
verdict opposes the requested target, leaving a jury that agrees.
Transformation instead moves each opposing juror's weight vector the
shortest Euclidean distance to a point on the probability simplex where
that juror concedes the target by at least the requested margin. Arbitrary
picking changes nothing: it is a pure, seeded coin flip over the pair.

The target is always supplied by the caller; this module never decides
which option should win.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ensemble import ClassificationTrace, Verdict, jury_classify
from .errors import (
    InfeasibleTransformation,
    InvalidTolerance,
    NoSupportingJuror,
    NotHard,
    UnsupportedForm,
)
from .model import Juror, Jury, OptionPoint, Relation, UtilityForm


class ResolutionMethod(str, Enum):
    ABANDONMENT = "abandonment"
    TRANSFORMATION = "transformation"
    ARBITRARY_PICK = "arbitrary_pick"


class Target(str, Enum):
    """Which side of the pair the resolution should end up preferring."""

    FIRST = "first"
    SECOND = "second"

    @property
    def relation(self) -> Relation:
        return Relation.PREFERRED_FIRST if self is Target.FIRST else Relation.PREFERRED_SECOND

    @property
    def supporting_verdict(self) -> Verdict:
        return Verdict.FIRST_BETTER if self is Target.FIRST else Verdict.SECOND_BETTER

    @property
    def opposing_verdict(self) -> Verdict:
        return Verdict.SECOND_BETTER if self is Target.FIRST else Verdict.FIRST_BETTER


@dataclass(frozen=True)
class ResolutionReport:
    """What a resolution did to the jury and to the pair's classification.

    ``perturbation`` maps every surviving juror id to the Euclidean distance
    its weights moved (zero for untouched jurors); ``removed`` lists the ids
    of abandoned jurors in jury order.
    """

    method: ResolutionMethod
    before: ClassificationTrace
    after: ClassificationTrace
    jury_after: Jury
    perturbation: dict[str, float]
    removed: tuple[str, ...]


def _require_hard(jury: Jury, first: OptionPoint, second: OptionPoint) -> ClassificationTrace:
    before = jury_classify(jury, first, second)
    if before.relation is not Relation.INCOMMENSURABLE:
        raise NotHard(
            f"pair ({first.name!r}, {second.name!r}) classifies as "
            f"{before.relation.value}, not incommensurable"
        )
    return before


def resolve_by_abandonment(
    jury: Jury, first: OptionPoint, second: OptionPoint, target: Target
) -> ResolutionReport:
    """Drop every juror whose verdict opposes the target preference.

    All opposing jurors must go (keeping any would keep the conflict), so
    there is never a choice of which juror to drop.
    """
    target = Target(target)
    before = _require_hard(jury, first, second)
    if not any(v.verdict is target.supporting_verdict for v in before.verdicts):
        raise NoSupportingJuror(f"no juror favors the {target.value} option")
    opposing = {v.juror_id for v in before.verdicts if v.verdict is target.opposing_verdict}
    survivors = tuple(j for j in jury.jurors if j.id not in opposing)
    jury_after = Jury(survivors)
    after = jury_classify(jury_after, first, second)
    if after.relation is not target.relation:
        raise RuntimeError("abandonment failed to produce the target preference")
    return ResolutionReport(
        method=ResolutionMethod.ABANDONMENT,
        before=before,
        after=after,
        jury_after=jury_after,
        perturbation={j.id: 0.0 for j in survivors},
        removed=tuple(j.id for j in jury.jurors if j.id in opposing),
    )


def project_to_preference_region(
    weights: tuple[float, ...], gap: tuple[float, ...], required: float
) -> tuple[float, ...]:
    """Closest simplex point whose utility gap meets a floor.

    Minimises the Euclidean distance to ``weights`` over
    ``{w : w >= 0, sum(w) = 1, gap . w >= required}``. Solved exactly by
    enumerating active sets: for every subset of coordinates pinned to
    zero, the remaining equality-constrained least squares problem has a
    closed form through its two Lagrange multipliers. Feasible when some
    simplex vertex reaches the floor, i.e. ``max(gap) >= required``.
    """
    w0 = np.asarray(weights, dtype=float)
    g = np.asarray(gap, dtype=float)
    d = w0.size
    if float(g @ w0) >= required:
        return tuple(float(v) for v in w0)
    if float(np.max(g)) < required:
        raise InfeasibleTransformation(
            f"maximum achievable utility gap {float(np.max(g))!r} is below {required!r}"
        )

    best: np.ndarray | None = None
    best_dist = np.inf
    # relative slack: with large score gaps the active-set solve meets the
    # floor only up to float error proportional to the gap magnitude
    feasibility_slack = 1e-9 * max(1.0, abs(required), float(np.max(np.abs(g))))
    for mask in range(1, 1 << d):
        free = np.array([(mask >> i) & 1 == 1 for i in range(d)])
        size = int(free.sum())
        w0_f = w0[free]
        g_f = g[free]
        sum_g = float(g_f.sum())
        gram = float(g_f @ g_f)
        det = size * gram - sum_g * sum_g
        if abs(det) <= 1e-15 * max(1.0, size * gram):
            # gap is constant on this face; only the sum constraint binds
            w_f = w0_f + (1.0 - float(w0_f.sum())) / size
        else:
            rhs_sum = 1.0 - float(w0_f.sum())
            rhs_gap = required - float(g_f @ w0_f)
            lam = (gram * rhs_sum - sum_g * rhs_gap) / det
            mu = (size * rhs_gap - sum_g * rhs_sum) / det
            w_f = w0_f + lam + mu * g_f
        if np.any(w_f < -1e-12):
            continue
        candidate = np.zeros(d)
        candidate[free] = np.clip(w_f, 0.0, None)
        if abs(float(candidate.sum()) - 1.0) > 1e-9:
            continue
        if float(g @ candidate) < required - feasibility_slack:
            continue
        dist = float(np.linalg.norm(candidate - w0))
        if dist < best_dist:
            best_dist = dist
            best = candidate
    if best is None:
        raise InfeasibleTransformation("no feasible simplex point found")
    return tuple(float(v) for v in best)


def resolve_by_transformation(
    jury: Jury,
    first: OptionPoint,
    second: OptionPoint,
    target: Target,
    margin: float = 0.0,
) -> ResolutionReport:
    """Move each opposing juror minimally until it concedes the target.

    Every opposing juror's weights are replaced by the closest simplex point
    at which the target option's utility exceeds the other's by at least
    ``margin`` plus that juror's epsilon; supporting and indifferent jurors
    are untouched. Linear jurors only.
    """
    target = Target(target)
    if margin < 0:
        raise InvalidTolerance(f"margin must be >= 0, got {margin!r}")
    for juror in jury.jurors:
        if juror.form is not UtilityForm.LINEAR:
            raise UnsupportedForm(
                f"juror {juror.id!r} has form {juror.form.value}; transformation "
                "supports linear jurors only"
            )
    before = _require_hard(jury, first, second)
    winner, loser = (first, second) if target is Target.FIRST else (second, first)
    gap = tuple(a - b for a, b in zip(winner.scores, loser.scores))

    verdicts = {v.juror_id: v.verdict for v in before.verdicts}
    transformed: list[Juror] = []
    perturbation: dict[str, float] = {}
    for juror in jury.jurors:
        if verdicts[juror.id] is target.opposing_verdict:
            new_weights = project_to_preference_region(
                juror.weights, gap, margin + juror.epsilon
            )
            moved = float(
                np.linalg.norm(np.asarray(new_weights) - np.asarray(juror.weights))
            )
            transformed.append(Juror(juror.id, new_weights, juror.form, juror.epsilon))
            perturbation[juror.id] = moved
        else:
            transformed.append(juror)
            perturbation[juror.id] = 0.0
    jury_after = Jury(tuple(transformed))
    after = jury_classify(jury_after, first, second)
    if after.relation is not target.relation:
        raise RuntimeError("transformation failed to produce the target preference")
    return ResolutionReport(
        method=ResolutionMethod.TRANSFORMATION,
        before=before,
        after=after,
        jury_after=jury_after,
        perturbation=perturbation,
        removed=(),
    )


def pick_arbitrarily(
    jury: Jury, first: OptionPoint, second: OptionPoint, seed: int
) -> tuple[OptionPoint, ResolutionReport]:
    """Seeded, preference-free pick between two options.

    The choice is a pure function of the two option names and the seed
    (a stable hash split, unbiased over seeds); the jury plays no part in
    it and is left untouched. The report's before and after traces are
    identical.
    """
    digest = hashlib.sha256(
        f"{first.name}\x1f{second.name}\x1f{seed}".encode("utf-8")
    ).digest()
    chosen = first if digest[0] & 1 == 0 else second
    before = jury_classify(jury, first, second)
    report = ResolutionReport(
        method=ResolutionMethod.ARBITRARY_PICK,
        before=before,
        after=before,
        jury_after=jury,
        perturbation={j.id: 0.0 for j in jury.jurors},
        removed=(),
    )
    return chosen, report
