"""Indifference-curve plots as self-contained, byte-deterministic SVG.

The emitter writes the SVG by hand rather than through a plotting library:
golden-file tests require byte-identical output for identical scenarios,
which is easiest to guarantee when every coordinate is formatted here.
Axis ranges come from the option bounding box padded by 10%, margins are
fixed, and option labels are drawn in alphabetical order.

Each juror contributes three level sets of its utility: through the first
option of the requested pair, through the second, and through the midpoint
level. When a post-resolution jury is supplied, a second panel repeats the
picture with the transformed jurors drawn dashed.
"""

from __future__ import annotations

import math

from .ensemble import juror_value
from .errors import UnsupportedDimension
from .model import Juror, Jury, OptionPoint, UtilityForm, validate_problem
from .scenario import Scenario

_PANEL_W = 520
_PANEL_H = 460
_MARGIN_LEFT = 64
_MARGIN_RIGHT = 24
_MARGIN_TOP = 36
_MARGIN_BOTTOM = 48

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def _tick(value: float) -> str:
    return f"{value:.5g}"


class _Frame:
    """Maps data coordinates into one panel's pixel box."""

    def __init__(self, x_offset: int, xs: list[float], ys: list[float]):
        def padded(values):
            low, high = min(values), max(values)
            pad = 0.1 * (high - low) if high > low else 1.0
            return low - pad, high + pad

        self.xmin, self.xmax = padded(xs)
        self.ymin, self.ymax = padded(ys)
        self.left = x_offset + _MARGIN_LEFT
        self.top = _MARGIN_TOP
        self.width = _PANEL_W - _MARGIN_LEFT - _MARGIN_RIGHT
        self.height = _PANEL_H - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(self, x: float) -> float:
        return self.left + (x - self.xmin) / (self.xmax - self.xmin) * self.width

    def py(self, y: float) -> float:
        return self.top + (self.ymax - y) / (self.ymax - self.ymin) * self.height

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def _linear_level_segment(weights, level: float, frame: _Frame):
    w1, w2 = weights
    eps = 1e-12
    if abs(w2) < eps:
        x = level / w1
        if frame.xmin <= x <= frame.xmax:
            return [(x, frame.ymin), (x, frame.ymax)]
        return []
    if abs(w1) < eps:
        y = level / w2
        if frame.ymin <= y <= frame.ymax:
            return [(frame.xmin, y), (frame.xmax, y)]
        return []
    candidates = []
    for x in (frame.xmin, frame.xmax):
        candidates.append((x, (level - w1 * x) / w2))
    for y in (frame.ymin, frame.ymax):
        candidates.append(((level - w2 * y) / w1, y))
    tol = 1e-9 * (abs(frame.xmax) + abs(frame.ymax) + 1.0)
    inside = [
        (x, y)
        for x, y in candidates
        if frame.xmin - tol <= x <= frame.xmax + tol and frame.ymin - tol <= y <= frame.ymax + tol
    ]
    inside.sort()
    if len(inside) < 2:
        return []
    return [inside[0], inside[-1]]


def _cobb_level_polylines(weights, level: float, frame: _Frame):
    w1, w2 = weights
    eps = 1e-12
    if level <= 0:
        return []
    if abs(w1) < eps:
        y = level ** (1.0 / w2)
        return [[(frame.xmin, y), (frame.xmax, y)]] if frame.ymin <= y <= frame.ymax else []
    if abs(w2) < eps:
        x = level ** (1.0 / w1)
        return [[(x, frame.ymin), (x, frame.ymax)]] if frame.xmin <= x <= frame.xmax else []
    polylines = []
    run: list[tuple[float, float]] = []
    start = max(frame.xmin, 1e-9)
    steps = 160
    log_level = math.log(level)
    for k in range(steps + 1):
        x = start + (frame.xmax - start) * k / steps
        y = math.exp((log_level - w1 * math.log(x)) / w2)
        if frame.ymin <= y <= frame.ymax:
            run.append((x, y))
        elif run:
            polylines.append(run)
            run = []
    if run:
        polylines.append(run)
    return [line for line in polylines if len(line) >= 2]


def _juror_curves(juror: Juror, levels, frame: _Frame, color: str, dashed: bool) -> list[str]:
    dash = ' stroke-dasharray="6 4"' if dashed else ""
    parts = []
    for level in levels:
        if juror.form is UtilityForm.LINEAR:
            segment = _linear_level_segment(juror.weights, level, frame)
            lines = [segment] if segment else []
        else:
            lines = _cobb_level_polylines(juror.weights, level, frame)
        for line in lines:
            points = " ".join(f"{_fmt(frame.px(x))},{_fmt(frame.py(y))}" for x, y in line)
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.2"{dash} points="{points}"/>'
            )
    return parts


def _panel(
    x_offset: int,
    title: str,
    options: tuple[OptionPoint, ...],
    objective_names: tuple[str, str],
    jury: Jury,
    pair: tuple[OptionPoint, OptionPoint],
    transformed_ids: frozenset[str],
) -> list[str]:
    xs = [o.scores[0] for o in options]
    ys = [o.scores[1] for o in options]
    frame = _Frame(x_offset, xs, ys)
    parts = [
        f'<rect x="{frame.left}" y="{frame.top}" width="{frame.width}" height="{frame.height}" '
        'fill="white" stroke="#444444" stroke-width="1"/>'
    ]
    parts.append(
        f'<text x="{x_offset + _PANEL_W / 2:.1f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>'
    )
    # ticks
    for k in range(5):
        x = frame.xmin + (frame.xmax - frame.xmin) * k / 4
        px = frame.px(x)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{frame.top + frame.height}" '
            f'x2="{_fmt(px)}" y2="{frame.top + frame.height + 5}" stroke="#444444"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{frame.top + frame.height + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_tick(x)}</text>'
        )
        y = frame.ymin + (frame.ymax - frame.ymin) * k / 4
        py = frame.py(y)
        parts.append(
            f'<line x1="{frame.left - 5}" y1="{_fmt(py)}" x2="{frame.left}" y2="{_fmt(py)}" '
            'stroke="#444444"/>'
        )
        parts.append(
            f'<text x="{frame.left - 8}" y="{_fmt(py + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_tick(y)}</text>'
        )
    parts.append(
        f'<text x="{x_offset + _PANEL_W / 2:.1f}" y="{_PANEL_H - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{objective_names[0]}</text>'
    )
    parts.append(
        f'<text x="{x_offset + 14}" y="{_MARGIN_TOP + frame.height / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 {x_offset + 14} {_MARGIN_TOP + frame.height / 2:.1f})">'
        f"{objective_names[1]}</text>"
    )

    # per-juror level sets through both pair members plus the midpoint level
    for index, juror in enumerate(jury.jurors):
        color = _PALETTE[index % len(_PALETTE)]
        va = juror_value(juror, pair[0])
        vb = juror_value(juror, pair[1])
        levels = sorted({va, vb, (va + vb) / 2.0})
        parts.extend(
            _juror_curves(juror, levels, frame, color, dashed=juror.id in transformed_ids)
        )
        suffix = "*" if juror.id in transformed_ids else ""
        weights = ", ".join(_tick(w) for w in juror.weights)
        parts.append(
            f'<text x="{frame.left + 8}" y="{frame.top + 16 + 14 * index}" '
            f'font-family="sans-serif" font-size="11" fill="{color}">'
            f"{juror.id}{suffix} {juror.form.value} ({weights})</text>"
        )

    pair_names = {pair[0].name, pair[1].name}
    for option in sorted(options, key=lambda o: o.name):
        px, py = frame.px(option.scores[0]), frame.py(option.scores[1])
        radius = 5 if option.name in pair_names else 4
        stroke = ' stroke="#000000" stroke-width="1.5"' if option.name in pair_names else ""
        parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{radius}" fill="#222222"{stroke}/>')
        parts.append(
            f'<text x="{_fmt(px + 7)}" y="{_fmt(py - 7)}" font-family="sans-serif" '
            f'font-size="12">{option.name}</text>'
        )
    return parts


def render_plot_svg(
    scenario: Scenario, pair: tuple[str, str], jury_after: Jury | None = None
) -> str:
    """Render the indifference-curve picture for one option pair.

    With ``jury_after`` given, a second panel shows the post-resolution
    jury; jurors whose weights changed are drawn dashed and starred.
    """
    problem = validate_problem(scenario.problem)
    if problem.dimension != 2:
        raise UnsupportedDimension(f"plots require exactly 2 objectives, got {problem.dimension}")
    first = problem.option(pair[0])
    second = problem.option(pair[1])
    objective_names = (problem.objectives[0].name, problem.objectives[1].name)

    panels = 1 if jury_after is None else 2
    width = _PANEL_W * panels
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_PANEL_H}" '
        f'viewBox="0 0 {width} {_PANEL_H}">',
        f'<rect x="0" y="0" width="{width}" height="{_PANEL_H}" fill="white"/>',
    ]
    parts.extend(
        _panel(
            0,
            f"pair {first.name} vs {second.name}",
            problem.options,
            objective_names,
            scenario.jury,
            (first, second),
            frozenset(),
        )
    )
    if jury_after is not None:
        original = {j.id: j.weights for j in scenario.jury.jurors}
        transformed = frozenset(
            j.id for j in jury_after.jurors if original.get(j.id) != j.weights
        )
        parts.extend(
            _panel(
                _PANEL_W,
                "after resolution",
                problem.options,
                objective_names,
                jury_after,
                (first, second),
                transformed,
            )
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(
    scenario: Scenario, pair: tuple[str, str], path, jury_after: Jury | None = None
) -> None:
    """Write the SVG to ``path``; identical inputs give identical bytes."""
    svg = render_plot_svg(scenario, pair, jury_after)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
