"""Brute-force reference classifier, kept independent of the ensemble module.

Corpus ground truth and equivalence tests must not reuse the code path
under test, so this module re-derives every juror's utility comparison
with numpy and applies the unanimity rule through sign counting.
"""

from __future__ import annotations

import numpy as np

from .errors import NonPositiveScoreForLogForm
from .model import ChoiceProblem, Jury, OptionPoint, Relation, UtilityForm


def _utilities(jury: Jury, option: OptionPoint) -> np.ndarray:
    scores = np.asarray(option.scores, dtype=float)
    values = np.empty(len(jury.jurors), dtype=float)
    for k, juror in enumerate(jury.jurors):
        weights = np.asarray(juror.weights, dtype=float)
        if juror.form is UtilityForm.LINEAR:
            values[k] = float(weights @ scores)
        else:
            consumed = weights > 0.0
            if np.any(scores[consumed] <= 0.0):
                raise NonPositiveScoreForLogForm(
                    f"option {option.name!r} has a non-positive consumed score"
                )
            values[k] = float(np.prod(scores[consumed] ** weights[consumed]))
    return values


def reference_pair_relation(jury: Jury, first: OptionPoint, second: OptionPoint) -> Relation:
    """Classify one pair by enumerating every juror's exact comparison."""
    margins = _utilities(jury, first) - _utilities(jury, second)
    epsilons = np.asarray([j.epsilon for j in jury.jurors], dtype=float)
    signs = np.zeros(len(margins), dtype=int)
    signs[margins > epsilons] = 1
    signs[margins < -epsilons] = -1
    if (signs > 0).any() and (signs < 0).any():
        return Relation.INCOMMENSURABLE
    if (signs > 0).any():
        return Relation.PREFERRED_FIRST
    if (signs < 0).any():
        return Relation.PREFERRED_SECOND
    return Relation.EQUAL


def reference_relation_map(jury: Jury, problem: ChoiceProblem) -> dict[tuple[str, str], Relation]:
    """Relations for every unordered option pair (problem order, i < j)."""
    relations: dict[tuple[str, str], Relation] = {}
    options = problem.options
    for i in range(len(options)):
        for j in range(i + 1, len(options)):
            relations[(options[i].name, options[j].name)] = reference_pair_relation(
                jury, options[i], options[j]
            )
    return relations
