"""Deterministic SVG output for scenes.

Same scene, same config, same version: byte-identical file.  All
numbers go through one fixed-precision formatter (negative zero
normalised away), elements appear in scene order, and nothing
timestamped or random enters the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cycles import (
    Cycle,
    CycleKind,
    ExtendedPoint,
    canonicalize,
    center_radius,
    classify,
    point_of,
)
from .errors import InvalidInput, MoebloxError
from .loxodrome import LoxodromeTriple, SlsKind, lambda_from_triple, sample_curve
from .numerics import DEFAULT_TOLERANCES, Tolerances
from .scene import Scene, SceneObject


@dataclass(frozen=True)
class RenderConfig:
    samples: int = 2048
    t_min: float = -3.0
    t_max: float = 3.0
    width: int = 800
    height: int = 600
    precision: int = 6

    def __post_init__(self):
        if self.samples < 16:
            raise InvalidInput("samples per branch must be at least 16")
        if not 3 <= self.precision <= 12:
            raise InvalidInput("precision must lie in [3, 12]")
        if self.width <= 0 or self.height <= 0:
            raise InvalidInput("output size must be positive")
        if not self.t_max > self.t_min:
            raise InvalidInput("t range must be non-empty")


_TRIPLE_STYLE = {
    "c1": 'stroke="#2e8b57" stroke-dasharray="6 4"',
    "c23": 'stroke="#c0392b"',
    "curve": 'stroke="#1f4e9c"',
}


def _fmt(x: float, precision: int) -> str:
    r = round(float(x), precision)
    if r == 0.0:
        r = 0.0  # clear negative zero
    return f"{r:.{precision}f}"


def _style_attr(scene: Scene, object_id: str, default: str) -> str:
    hints = scene.style.get(object_id)
    if not isinstance(hints, dict):
        return default
    parts = []
    if "stroke" in hints:
        parts.append(f'stroke="{hints["stroke"]}"')
    if "width" in hints:
        parts.append(f'stroke-width="{hints["width"]}"')
    if "dash" in hints:
        parts.append(f'stroke-dasharray="{hints["dash"]}"')
    return " ".join(parts) if parts else default


def _finite_bounds(obj: SceneObject, tol: Tolerances):
    """Bounding boxes of circles and points; lines and maps are unbounded."""
    boxes = []

    def cycle_box(C: Cycle):
        kind = classify(C, tol)
        if kind == CycleKind.LINE:
            return
        c, r = center_radius(C, tol)
        boxes.append((c.real - r, c.imag - r, c.real + r, c.imag + r))

    if obj.kind in ("circle", "line", "cycle"):
        cycle_box(obj.value)
    elif obj.kind == "point":
        p = obj.value
        if not p.is_infinity:
            z = p.as_complex()
            boxes.append((z.real, z.imag, z.real, z.imag))
    elif obj.kind == "triple":
        for C in (obj.value.c1, obj.value.c2, obj.value.c3):
            try:
                cycle_box(C)
            except MoebloxError:
                pass
    return boxes


def _scene_bbox(scene: Scene, tol: Tolerances):
    if scene.bbox is not None:
        xmin, ymin, xmax, ymax = scene.bbox
    else:
        boxes = []
        for obj in scene.objects:
            boxes.extend(_finite_bounds(obj, tol))
        if not boxes:
            return (-5.0, -5.0, 5.0, 5.0)
        xmin = min(b[0] for b in boxes)
        ymin = min(b[1] for b in boxes)
        xmax = max(b[2] for b in boxes)
        ymax = max(b[3] for b in boxes)
    span = max(xmax - xmin, ymax - ymin, 1e-6)
    pad = 0.1 * span
    return (xmin - pad, ymin - pad, xmax + pad, ymax + pad)


class _Projector:
    """World to pixel coordinates: uniform scale, centred, y flipped."""

    def __init__(self, bbox, width, height):
        xmin, ymin, xmax, ymax = bbox
        self.scale = min(width / (xmax - xmin), height / (ymax - ymin))
        self.ox = (width - self.scale * (xmax - xmin)) / 2.0 - self.scale * xmin
        self.oy = (height + self.scale * (ymax - ymin)) / 2.0 + self.scale * ymin
        self.bbox = bbox

    def to_px(self, z: complex) -> tuple[float, float]:
        return self.ox + self.scale * z.real, self.oy - self.scale * z.imag


def _clip_line_to_box(anchor: complex, direction: complex, bbox):
    """Parameter interval of an infinite line inside a rectangle."""
    xmin, ymin, xmax, ymax = bbox
    t0, t1 = -math.inf, math.inf
    for pos, vel, lo, hi in (
        (anchor.real, direction.real, xmin, xmax),
        (anchor.imag, direction.imag, ymin, ymax),
    ):
        if abs(vel) < 1e-300:
            if not lo <= pos <= hi:
                return None
            continue
        a, b = (lo - pos) / vel, (hi - pos) / vel
        if a > b:
            a, b = b, a
        t0, t1 = max(t0, a), min(t1, b)
    if t0 >= t1 or not (math.isfinite(t0) and math.isfinite(t1)):
        return None
    return anchor + t0 * direction, anchor + t1 * direction


def _emit_point(out, p: ExtendedPoint, proj: _Projector, style: str, precision: int):
    if p.is_infinity:
        return
    cx, cy = proj.to_px(p.as_complex())
    out.append(
        f'<circle cx="{_fmt(cx, precision)}" cy="{_fmt(cy, precision)}" r="3" '
        f'fill="currentColor" {style}/>'
    )


def _emit_cycle(out, C: Cycle, proj: _Projector, style: str, precision: int, tol):
    kind = classify(C, tol)
    if kind == CycleKind.POINT:
        _emit_point(out, point_of(C, tol), proj, style, precision)
        return
    if kind == CycleKind.LINE:
        line = canonicalize(C, tol)
        normal = complex(line.l, line.n)
        anchor = (line.m / 2.0) * normal
        clipped = _clip_line_to_box(anchor, 1j * normal, proj.bbox)
        if clipped is None:
            return
        (x1, y1), (x2, y2) = proj.to_px(clipped[0]), proj.to_px(clipped[1])
        out.append(
            f'<line x1="{_fmt(x1, precision)}" y1="{_fmt(y1, precision)}" '
            f'x2="{_fmt(x2, precision)}" y2="{_fmt(y2, precision)}" {style}/>'
        )
    else:
        c, r = center_radius(C, tol)
        cx, cy = proj.to_px(c)
        out.append(
            f'<circle cx="{_fmt(cx, precision)}" cy="{_fmt(cy, precision)}" '
            f'r="{_fmt(r * proj.scale, precision)}" {style}/>'
        )


def _polyline_runs(points: list[ExtendedPoint], guard: float):
    run: list[complex] = []
    for p in points:
        z = None if p.is_infinity else p.as_complex()
        if z is not None and max(abs(z.real), abs(z.imag)) <= guard:
            run.append(z)
        else:
            if len(run) >= 2:
                yield run
            run = []
    if len(run) >= 2:
        yield run


def _emit_triple(out, scene, obj, proj, config, tol, warnings_out):
    T: LoxodromeTriple = obj.value
    style = _style_attr(scene, obj.id, "")
    out.append(f'<g id="{obj.id}">')
    _emit_cycle(out, T.c1, proj, style or _TRIPLE_STYLE["c1"], config.precision, tol)
    _emit_cycle(out, T.c2, proj, style or _TRIPLE_STYLE["c23"], config.precision, tol)
    _emit_cycle(out, T.c3, proj, style or _TRIPLE_STYLE["c23"], config.precision, tol)
    try:
        param = lambda_from_triple(T, tol)
        closed = param.kind == SlsKind.FINITE and param.lambda_tilde == 0.0
        branches = ("+",) if closed else ("+", "-")  # one branch covers a circle
        guard = 50.0 * max(
            abs(proj.bbox[0]), abs(proj.bbox[1]), abs(proj.bbox[2]), abs(proj.bbox[3]), 1.0
        )
        curve_style = style or _TRIPLE_STYLE["curve"]
        for branch in branches:
            pts = sample_curve(T, config.t_min, config.t_max, config.samples, branch, tol)
            for run in _polyline_runs(pts, guard):
                coords = " ".join(
                    f"{_fmt(proj.to_px(z)[0], config.precision)},"
                    f"{_fmt(proj.to_px(z)[1], config.precision)}"
                    for z in run
                )
                out.append(f'<polyline points="{coords}" {curve_style}/>')
    except MoebloxError as exc:
        warnings_out.append(f"triple {obj.id!r}: curve not drawn: {exc}")
    out.append("</g>")


def render_scene(
    scene: Scene,
    config: RenderConfig = RenderConfig(),
    tol: Tolerances = DEFAULT_TOLERANCES,
    warnings_out: list[str] | None = None,
) -> str:
    """Render a scene to SVG text.

    Invalid triples are still drawn from their raw cycles; the curve is
    skipped and a note appended to ``warnings_out``.
    """
    if warnings_out is None:
        warnings_out = []
    warnings_out.extend(scene.triple_warnings(tol))
    bbox = _scene_bbox(scene, tol)
    proj = _Projector(bbox, config.width, config.height)
    p = config.precision

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{config.width}" '
        f'height="{config.height}" viewBox="0 0 {config.width} {config.height}">',
        f'<rect x="0" y="0" width="{config.width}" height="{config.height}" fill="#ffffff"/>',
        '<g fill="none" stroke="#000000" stroke-width="1.5">',
    ]
    for obj in scene.objects:
        if obj.kind == "moebius":
            continue
        if obj.kind == "triple":
            _emit_triple(out, scene, obj, proj, config, tol, warnings_out)
        elif obj.kind == "point":
            _emit_point(out, obj.value, proj, _style_attr(scene, obj.id, ""), p)
        else:
            try:
                _emit_cycle(out, obj.value, proj, _style_attr(scene, obj.id, ""), p, tol)
            except MoebloxError as exc:
                warnings_out.append(f"object {obj.id!r}: not drawn: {exc}")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
