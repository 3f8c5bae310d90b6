"""Render one generation of a refinement tree as a standalone SVG file.

The drawing is deterministic: polygons appear in lineage order, floats are
written with shortest round-trip repr, and the same input always produces a
byte-identical file.  The y axis is flipped so the apex points up, matching
the mathematical orientation of the construction.
"""

from __future__ import annotations

from typing import Sequence

from .geometry import TriangleNode

MAX_RENDER_GENERATION = 14  # at most 2**14 = 16384 polygons

_MARGIN_FRACTION = 0.02
_STROKE_FRACTION = 0.002


def render_svg(nodes: Sequence[TriangleNode], path: str,
               stroke_reference: float | None = None) -> None:
    """Write the triangles (one generation, all the same depth) to ``path``.

    The viewBox fits the union of the triangles (the initial triangle, which
    the generation tiles) with a 2% margin.  Stroke width is 0.2% of
    ``stroke_reference`` (the initial longest side); when omitted, the
    longest side among the given triangles is used.
    """
    if not nodes:
        raise ValueError("nothing to render: empty generation")
    generation = nodes[0].generation
    if generation > MAX_RENDER_GENERATION:
        raise ValueError(
            f"generation {generation} exceeds the render limit of "
            f"{MAX_RENDER_GENERATION} (2**{MAX_RENDER_GENERATION} polygons)")
    ordered = sorted(nodes, key=lambda n: n.lineage)

    xs = [p.x for n in ordered for p in n.vertices]
    ys = [p.y for n in ordered for p in n.vertices]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    span = max(xmax - xmin, ymax - ymin)
    margin = _MARGIN_FRACTION * span
    if stroke_reference is None:
        stroke_reference = max(max(n.sides()) for n in ordered)
    stroke = _STROKE_FRACTION * stroke_reference

    # Flip y inside the bounding box so screen-down SVG shows apex-up.
    flip = ymin + ymax

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{xmin - margin!r} {ymin - margin!r} '
        f'{xmax - xmin + 2 * margin!r} {ymax - ymin + 2 * margin!r}">'
    ]
    for node in ordered:
        pts = " ".join(f"{p.x!r},{flip - p.y!r}" for p in node.vertices)
        lines.append(
            f'<polygon points="{pts}" fill="none" stroke="black" '
            f'stroke-width="{stroke!r}"/>')
    lines.append("</svg>")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")
