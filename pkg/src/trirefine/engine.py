"""Refinement driver: iterate a splitting procedure and stream statistics.

A run starts from either exact base angles or numeric side lengths, applies
one of the three procedures ``depth`` times, and reports one row of
aggregate statistics per generation:

* ``mesh``            -- longest side over the generation (non-increasing),
* ``min_angle_deg``   -- smallest angle over the generation,
* ``min_largest_angle_deg`` -- smallest per-triangle maximum angle,
* ``max_aspect_ratio``-- largest aspect ratio,
* ``rho``             -- max(r_n, r_{n+1}, sqrt(3)/2), the factor bounding
  two-generation mesh decay (undefined for the last generation),
* ``cumulative_similarity_classes`` -- distinct sorted angle triples seen in
  generations 0..n.

In exact-base mode (largest-angle procedure from rational angles) the angle
statistics and similarity keys are exact; numeric mode quantizes angles to
1e-9 degrees for class counting.  Streaming mode walks the tree depth-first
without retaining nodes, so memory stays flat in the depth; full-tree mode
additionally returns every generation (for rendering).  Both modes execute
the identical per-node computation, so their statistics agree bit for bit.
Aggregation uses only min/max/set-union, hence the result is independent of
traversal or worker order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import BaseAngles, FORM_GAMMA
from .geometry import (
    ANGLE_TIE_TOL_DEG,
    ProcedureKind,
    TriangleNode,
    bisect,
    side_lengths,
    triangle_from_angles,
    triangle_from_sides,
)

SQRT3_2 = math.sqrt(3.0) / 2.0

# Numeric-mode similarity keys quantize angles to this many degrees: far
# below the angle separation of any supported run, far above accumulated
# float error at the permitted depths.
NUMERIC_KEY_QUANTUM_DEG = 1e-9
_KEY_SCALE = 1e9

MAX_DEPTH_STREAMING = 40
MAX_DEPTH_FULL_TREE = 24


class RunMode:
    EXACT_BASE = "exact-base"
    NUMERIC = "numeric"


class RetainPolicy:
    STREAMING = "streaming"
    FULL_TREE = "full-tree"


@dataclass(frozen=True)
class RefinementRun:
    """Configuration of one refinement run.

    Exactly one of ``base`` (exact angles) or ``sides`` must be given.
    ``mode`` defaults to exact-base when base angles drive the largest-angle
    procedure, numeric otherwise.  ``scale`` is the initial longest side for
    angle input; side input is used as given.
    """

    kind: ProcedureKind
    depth: int
    base: BaseAngles | None = None
    sides: tuple[float, float, float] | None = None
    mode: str | None = None
    retain: str = RetainPolicy.STREAMING
    scale: float = 1.0

    def __post_init__(self) -> None:
        if (self.base is None) == (self.sides is None):
            raise ValueError("exactly one of base angles or sides must be given")
        if self.mode is None:
            derived = (RunMode.EXACT_BASE
                       if self.base is not None
                       and self.kind is ProcedureKind.LARGEST_ANGLE
                       else RunMode.NUMERIC)
            object.__setattr__(self, "mode", derived)
        if self.mode not in (RunMode.EXACT_BASE, RunMode.NUMERIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == RunMode.EXACT_BASE:
            if self.base is None:
                raise ValueError("exact-base mode requires base angles")
            if self.kind is not ProcedureKind.LARGEST_ANGLE:
                raise ValueError(
                    "exact-base mode is only available for the largest-angle "
                    "procedure; the other procedures leave the exact span")
        if self.retain not in (RetainPolicy.STREAMING, RetainPolicy.FULL_TREE):
            raise ValueError(f"unknown retain policy {self.retain!r}")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        limit = (MAX_DEPTH_FULL_TREE if self.retain == RetainPolicy.FULL_TREE
                 else MAX_DEPTH_STREAMING)
        if self.depth > limit:
            raise ValueError(
                f"depth {self.depth} exceeds the {self.retain} limit of {limit}")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


@dataclass
class GenerationStats:
    """Aggregates over the 2**n triangles of one generation."""

    n: int
    triangle_count: int
    mesh: float
    min_angle_deg: Fraction | float
    min_largest_angle_deg: Fraction | float
    max_aspect_ratio: float
    rho: float | None
    cumulative_similarity_classes: int


@dataclass
class RefinementResult:
    run: RefinementRun
    stats: list[GenerationStats]
    generations: list[list[TriangleNode]] | None
    class_keys: list[frozenset]


def similarity_key(node: TriangleNode, exact: bool) -> tuple:
    """Canonical similarity-class key: the sorted angle triple.

    Exact mode keys are (numerator, denominator) pairs of the exact degree
    values; numeric mode rounds each angle to 1e-9 degrees.  Keys are
    invariant under vertex permutation and scaling.
    """
    if exact:
        vals = node.angles_exact
        return tuple(sorted((v.numerator, v.denominator) for v in vals))
    a0, a1, a2 = node.angles_deg()
    return tuple(sorted((round(a0 * _KEY_SCALE), round(a1 * _KEY_SCALE),
                         round(a2 * _KEY_SCALE))))


def _root_node(run: RefinementRun) -> TriangleNode:
    if run.base is not None:
        return triangle_from_angles(run.base, scale=run.scale,
                                    exact=run.mode == RunMode.EXACT_BASE)
    return triangle_from_sides(*run.sides)


class _Accumulators:
    """Per-generation aggregates; merging is min/max/union, so order-free."""

    __slots__ = ("counts", "mesh", "max_aspect", "min_angle", "min_largest",
                 "key_sets")

    def __init__(self, depth: int) -> None:
        self.counts = [0] * (depth + 1)
        self.mesh = [0.0] * (depth + 1)
        self.max_aspect = [0.0] * (depth + 1)
        self.min_angle: list = [None] * (depth + 1)
        self.min_largest: list = [None] * (depth + 1)
        self.key_sets: list[set] = [set() for _ in range(depth + 1)]

    def observe_shape(self, g: int, node: TriangleNode) -> None:
        s0, s1, s2 = node.sides()
        longest = s0 if s0 >= s1 else s1
        if s2 > longest:
            longest = s2
        if longest > self.mesh[g]:
            self.mesh[g] = longest
        r = longest / (s0 + s1 + s2 - longest)
        if r > self.max_aspect[g]:
            self.max_aspect[g] = r
        self.counts[g] += 1

    def observe_angles(self, g: int, v0, v1, v2, key) -> None:
        small = v0 if v0 <= v1 else v1
        if v2 < small:
            small = v2
        big = v0 if v0 >= v1 else v1
        if v2 > big:
            big = v2
        cur = self.min_angle[g]
        if cur is None or small < cur:
            self.min_angle[g] = small
        cur = self.min_largest[g]
        if cur is None or big < cur:
            self.min_largest[g] = big
        self.key_sets[g].add(key)


def _assemble(run: RefinementRun, acc: _Accumulators,
              generations) -> RefinementResult:
    depth = run.depth
    stats: list[GenerationStats] = []
    cumulative: set = set()
    for n in range(depth + 1):
        cumulative |= acc.key_sets[n]
        rho = (max(acc.max_aspect[n], acc.max_aspect[n + 1], SQRT3_2)
               if n < depth else None)
        stats.append(GenerationStats(
            n=n,
            triangle_count=acc.counts[n],
            mesh=acc.mesh[n],
            min_angle_deg=acc.min_angle[n],
            min_largest_angle_deg=acc.min_largest[n],
            max_aspect_ratio=acc.max_aspect[n],
            rho=rho,
            cumulative_similarity_classes=len(cumulative),
        ))
    return RefinementResult(
        run=run,
        stats=stats,
        generations=generations,
        class_keys=[frozenset(ks) for ks in acc.key_sets],
    )


def _scaled_int(value: Fraction, scale: int) -> int:
    # scale is a multiple of the denominator, so this is exact.
    return value.numerator * (scale // value.denominator)


def _refine_exact(run: RefinementRun, full: bool) -> RefinementResult:
    """Exact-base largest-angle run.

    Every angle that appears at generation g is an integer multiple of
    1 / (q * 2**g) degrees, q being the common denominator of the base
    angles.  Mirroring the exact values as integers at the fixed scale
    q * 2**(depth+1) turns halving, adding and comparing into plain int
    ops; the engine then hands the precomputed split index to ``bisect``.
    Full-tree runs additionally keep symbolic forms on the retained nodes.
    """
    depth = run.depth
    base = run.base
    acc = _Accumulators(depth)
    generations = [[] for _ in range(depth + 1)] if full else None

    q = math.lcm(base.alpha.denominator, base.beta.denominator,
                 base.gamma.denominator)
    scale = q << (depth + 1)
    root = triangle_from_angles(base, scale=run.scale, exact=full)
    stack = [(root,
              _scaled_int(base.alpha, scale),
              _scaled_int(base.beta, scale),
              _scaled_int(base.gamma, scale))]
    push = stack.append
    pop = stack.pop
    while stack:
        node, v0, v1, v2 = pop()
        g = node.generation
        acc.observe_shape(g, node)
        key = tuple(sorted((v0, v1, v2)))
        acc.observe_angles(g, v0, v1, v2, key)
        if full:
            generations[g].append(node)
        if g < depth:
            ia = 0
            best = v0
            if v1 > best:
                ia, best = 1, v1
            if v2 > best:
                ia, best = 2, v2
            left, right = bisect(node, ProcedureKind.LARGEST_ANGLE, ia)
            half = best >> 1
            if ia == 0:
                vb, vc = v1, v2
            elif ia == 1:
                vb, vc = v2, v0
            else:
                vb, vc = v0, v1
            push((right, half, half + vb, vc))
            push((left, half, vb, half + vc))

    # Convert the integer aggregates back to exact rational degrees and the
    # keys to the canonical (numerator, denominator) representation.
    for g in range(depth + 1):
        if acc.min_angle[g] is not None:
            acc.min_angle[g] = Fraction(acc.min_angle[g], scale)
            acc.min_largest[g] = Fraction(acc.min_largest[g], scale)
        acc.key_sets[g] = {
            tuple(sorted(Fraction(i, scale).as_integer_ratio() for i in key))
            for key in acc.key_sets[g]
        }
    return _assemble(run, acc, generations)


def _refine_numeric(run: RefinementRun, full: bool) -> RefinementResult:
    """Numeric-mode run.

    Angle statistics follow each procedure's own angle algebra rather than
    remeasuring coordinates: halving a float is exact, an angle-bisection
    child has angles (A/2, B, A/2+C), and an altitude split always produces
    (90, B, 90-B).  Coordinates accumulate error relative to the shrinking
    local scale (badly so for thin triangles), while the propagated values
    stay within a few ulp of the true angles at any supported depth, which
    keeps quantized similarity keys stable.  Only the longest-edge split,
    whose foot angles are genuinely new, measures them from the child
    coordinates.
    """
    depth = run.depth
    kind = run.kind
    acc = _Accumulators(depth)
    generations = [[] for _ in range(depth + 1)] if full else None

    root = _root_node(run)
    if run.base is not None:
        a0, a1, a2 = (float(x) for x in run.base.as_tuple())
    else:
        a0, a1, a2 = root.angles_deg()
    stack = [(root, a0, a1, a2)]
    push = stack.append
    pop = stack.pop
    while stack:
        node, v0, v1, v2 = pop()
        g = node.generation
        acc.observe_shape(g, node)
        key = tuple(sorted((round(v0 * _KEY_SCALE), round(v1 * _KEY_SCALE),
                            round(v2 * _KEY_SCALE))))
        acc.observe_angles(g, v0, v1, v2, key)
        if full:
            generations[g].append(node)
        if g < depth:
            if kind is ProcedureKind.LARGEST_ANGLE:
                top = v0 if v0 >= v1 else v1
                if v2 > top:
                    top = v2
                if top - v0 <= ANGLE_TIE_TOL_DEG:
                    ia = 0
                    va, vb, vc = v0, v1, v2
                elif top - v1 <= ANGLE_TIE_TOL_DEG:
                    ia = 1
                    va, vb, vc = v1, v2, v0
                else:
                    ia = 2
                    va, vb, vc = v2, v0, v1
                left, right = bisect(node, kind, ia)
                half = va / 2.0
                push((right, half, half + vb, vc))
                push((left, half, vb, half + vc))
            elif kind is ProcedureKind.SHORTEST_ALTITUDE:
                ia = side_lengths(node)[0][1]
                if ia == 0:
                    vb, vc = v1, v2
                elif ia == 1:
                    vb, vc = v2, v0
                else:
                    vb, vc = v0, v1
                left, right = bisect(node, kind)
                push((right, 90.0 - vc, 90.0, vc))
                push((left, 90.0 - vb, vb, 90.0))
            else:
                left, right = bisect(node, kind)
                push((right,) + right.angles_deg())
                push((left,) + left.angles_deg())
    return _assemble(run, acc, generations)


def refine(run: RefinementRun) -> RefinementResult:
    """Run the refinement and collect per-generation statistics.

    Depth-first traversal with per-generation accumulators; aborts with a
    ``DegenerateTriangleError`` naming the lineage path if a split ever
    produces a numerically collinear child.  Streaming and full-tree runs
    execute the same per-node computation and report identical statistics.
    """
    full = run.retain == RetainPolicy.FULL_TREE
    if run.mode == RunMode.EXACT_BASE:
        return _refine_exact(run, full)
    return _refine_numeric(run, full)


def rho_sequence(stats: Sequence[GenerationStats]) -> list[float]:
    """max(r_n, r_{n+1}, sqrt(3)/2) for n = 0 .. len(stats)-2; non-increasing."""
    if len(stats) < 2:
        raise ValueError("need statistics for at least two generations")
    return [
        max(stats[n].max_aspect_ratio, stats[n + 1].max_aspect_ratio, SQRT3_2)
        for n in range(len(stats) - 1)
    ]


def similarity_classes(result: RefinementResult) -> list[int]:
    """Cumulative similarity-class count per generation."""
    return [s.cumulative_similarity_classes for s in result.stats]


def generation_stats(triangles: Iterable[TriangleNode]) -> GenerationStats:
    """Aggregate one generation of triangles (no rho: that needs the next one).

    ``cumulative_similarity_classes`` counts the classes within the given
    triangles.  Exact aggregation when the nodes carry exact values.
    """
    nodes = list(triangles)
    if not nodes:
        raise ValueError("generation must be non-empty")
    exact = nodes[0].angles_exact is not None
    mesh = 0.0
    max_aspect = 0.0
    min_angle = None
    min_largest = None
    keys = set()
    for node in nodes:
        s = node.sides()
        longest = max(s)
        mesh = max(mesh, longest)
        max_aspect = max(max_aspect, longest / (sum(s) - longest))
        vals = node.angles_exact if exact else node.angles_deg()
        small, big = min(vals), max(vals)
        if min_angle is None or small < min_angle:
            min_angle = small
        if min_largest is None or big < min_largest:
            min_largest = big
        keys.add(similarity_key(node, exact))
    return GenerationStats(
        n=nodes[0].generation,
        triangle_count=len(nodes),
        mesh=mesh,
        min_angle_deg=min_angle,
        min_largest_angle_deg=min_largest,
        max_aspect_ratio=max_aspect,
        rho=None,
        cumulative_similarity_classes=len(keys),
    )


def track_carrier(run: RefinementRun) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Angles of the carrier triangle for generations 1 .. depth, exactly.

    The carrier is the child that keeps the vertex labeled gamma at every
    split; a triangle's largest angle is never the kept gamma corner, so
    the lineage is well defined.  Each entry is (major, minor, kept) in
    degrees, where major >= minor are the two mutable angles; they match
    ``carrier_angle_forms(n)`` evaluated at the base.
    """
    if run.mode != RunMode.EXACT_BASE:
        raise ValueError("carrier tracking requires exact-base mode")
    node = _root_node(run)
    out: list[tuple[Fraction, Fraction, Fraction]] = []
    kept = run.base.gamma
    for _ in range(run.depth):
        left, right = bisect(node, ProcedureKind.LARGEST_ANGLE)
        if FORM_GAMMA in left.angle_forms:
            node = left
        elif FORM_GAMMA in right.angle_forms:
            node = right
        else:
            raise RuntimeError(
                f"carrier lineage lost at generation {left.generation}")
        others = sorted(
            (v for f, v in zip(node.angle_forms, node.angles_exact)
             if f != FORM_GAMMA),
            reverse=True)
        out.append((others[0], others[1], kept))
    return out
