"""Triangle refinement by largest-angle bisection.

Splitting a triangle along the bisector of its largest angle, repeatedly,
keeps the smallest angle bounded below by min(gamma, alpha/2), drives the
mesh (longest surviving side) to zero geometrically, and, except for the
right isosceles start, produces an unbounded number of similarity classes.
This package tracks the angles exactly through every split, measures all of
those quantities, re-checks the bounds they rest on over random sweeps, and
renders the subdivisions.  Longest-edge and shortest-altitude splitting are
included as reference procedures.
"""

from .exact import (
    AngleForm,
    BaseAngles,
    DyadicRational,
    carrier_angle_forms,
    check_major_angles_distinct,
    evaluate_angle_form,
    first_major_angle_collision,
    jacobsthal,
    major_angle_values,
)
from .engine import (
    GenerationStats,
    RefinementResult,
    RefinementRun,
    RetainPolicy,
    RunMode,
    generation_stats,
    refine,
    rho_sequence,
    similarity_classes,
    similarity_key,
    track_carrier,
)
from .geometry import (
    DegenerateTriangleError,
    Point2,
    ProcedureKind,
    TriangleNode,
    aspect_ratio,
    aspect_ratio_trig,
    bisect,
    bisector_to_longest_side_ratio,
    largest_angle_vertex,
    side_lengths,
    triangle_from_angles,
    triangle_from_angles_deg,
    triangle_from_sides,
)
from .svg import render_svg
from .verifier import (
    CheckReport,
    random_valid_base,
    replay_margin,
    run_suite,
)

__all__ = [
    "AngleForm",
    "BaseAngles",
    "CheckReport",
    "DegenerateTriangleError",
    "DyadicRational",
    "GenerationStats",
    "Point2",
    "ProcedureKind",
    "RefinementResult",
    "RefinementRun",
    "RetainPolicy",
    "RunMode",
    "TriangleNode",
    "aspect_ratio",
    "aspect_ratio_trig",
    "bisect",
    "bisector_to_longest_side_ratio",
    "carrier_angle_forms",
    "check_major_angles_distinct",
    "evaluate_angle_form",
    "first_major_angle_collision",
    "generation_stats",
    "jacobsthal",
    "largest_angle_vertex",
    "major_angle_values",
    "random_valid_base",
    "refine",
    "render_svg",
    "replay_margin",
    "rho_sequence",
    "run_suite",
    "side_lengths",
    "similarity_classes",
    "similarity_key",
    "track_carrier",
    "triangle_from_angles",
    "triangle_from_angles_deg",
    "triangle_from_sides",
]

__version__ = "0.1.0"
