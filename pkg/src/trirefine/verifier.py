"""Executable re-check of every quantitative guarantee the library relies on.

``run_suite`` evaluates each named check over deterministic fixtures plus a
seeded random sweep and reports, per check, the population size, the worst
signed margin to the bound (negative means violated), and a replayable
witness for the extremal case.  A check passes when its worst margin stays
above minus its tolerance.

Tolerances: exact-arithmetic checks use zero tolerance; single-step float
identities use 1e-12; multi-generation float aggregates use 1e-9.  Failures
are reported, never repaired: a violated bound would show up as a negative
margin with the witness that produced it, and ``replay_margin`` recomputes
that margin bit for bit from the witness alone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .exact import (
    BaseAngles,
    DyadicRational,
    FORM_GAMMA,
    carrier_angle_forms,
    check_major_angles_distinct,
    evaluate_angle_form,
    first_major_angle_collision,
    jacobsthal,
)
from .engine import (
    ProcedureKind,
    RefinementResult,
    RefinementRun,
    RetainPolicy,
    SQRT3_2,
    refine,
    track_carrier,
)
from .geometry import (
    TriangleNode,
    aspect_ratio,
    aspect_ratio_trig,
    bisect,
    bisector_to_longest_side_ratio,
    largest_angle_vertex,
    smallest_angle_vertex,
    triangle_from_angles,
    triangle_from_angles_deg,
    triangle_from_sides,
)

TOL_EXACT = 0.0
TOL_SINGLE_STEP = 1e-12
TOL_MULTI_STEP = 1e-9
TOL_MODE_IDENTITY = 1e-15
TOL_SYMBOLIC_NUMERIC = 1e-7

# Bound on second-generation aspect ratios when the largest starting angle
# is at most twice the smallest: sin(54 deg) / cos(7.5 deg) = 0.8159...
FLAT_START_ASPECT_BOUND = math.sin(math.radians(54.0)) / math.cos(math.radians(7.5))

CARRIER_N_MAX = 20

EQUILATERAL = BaseAngles(60, 60, 60)
RIGHT_ISOSCELES = BaseAngles(90, 45, 45)
DOUBLE_PAIR = BaseAngles(80, 60, 40)
THIN = BaseAngles(178, 1, 1)
PYTHAGOREAN_SIDES = (3.0, 4.0, 5.0)

ANGLE_FIXTURES = (EQUILATERAL, RIGHT_ISOSCELES, DOUBLE_PAIR, THIN)

# Raw label pairs whose major-angle sequence must collapse: alpha == 2*beta.
# (80, 40) is the (80, 40, 60) labeling, which is not sorted and therefore
# enters through the pair-level helper rather than BaseAngles.
COLLISION_PAIRS = ((Fraction(90), Fraction(45)), (Fraction(80), Fraction(40)))


@dataclass
class CheckReport:
    """Outcome of one named check; ``passed`` iff worst_margin >= -tolerance."""

    name: str
    population: int
    worst_margin: float
    tolerance: float
    witness: dict
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "population": self.population,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "witness": self.witness,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# Random populations
# ---------------------------------------------------------------------------

def random_valid_base(rng: random.Random) -> BaseAngles:
    """Random exact base angles: denominator <= 10**4, each angle >= 1/2 degree,
    summing to 180 exactly, labels sorted descending."""
    q = rng.randint(1, 10_000)
    lo = (q + 1) // 2  # ceil(q / 2), i.e. at least half a degree
    total = 180 * q
    n1 = rng.randint(lo, total - 2 * lo)
    n2 = rng.randint(lo, total - n1 - lo)
    parts = sorted((n1, n2, total - n1 - n2), reverse=True)
    return BaseAngles(Fraction(parts[0], q), Fraction(parts[1], q),
                      Fraction(parts[2], q))


def random_triangle_angles(rng: random.Random) -> tuple[float, float, float]:
    """Random float triangle angles, each >= 1/2 degree, sorted descending."""
    while True:
        a = rng.uniform(0.5, 179.0)
        b = rng.uniform(0.5, 179.5 - a)
        c = 180.0 - a - b
        if c >= 0.5:
            vals = sorted((a, b, c), reverse=True)
            return (vals[0], vals[1], vals[2])


# ---------------------------------------------------------------------------
# Witness (de)serialization and run loading
# ---------------------------------------------------------------------------

def _base_json(base: BaseAngles) -> list[str]:
    return [str(base.alpha), str(base.beta), str(base.gamma)]


def _base_parse(items) -> BaseAngles:
    return BaseAngles(Fraction(items[0]), Fraction(items[1]), Fraction(items[2]))


def _exact_stats(base: BaseAngles, depth: int):
    return refine(RefinementRun(kind=ProcedureKind.LARGEST_ANGLE,
                                depth=depth, base=base)).stats


def _run_from_spec(spec: dict, depth: int,
                   retain: str = RetainPolicy.STREAMING) -> RefinementResult:
    kind = ProcedureKind(spec["kind"])
    if spec.get("base") is not None:
        return refine(RefinementRun(kind=kind, depth=depth,
                                    base=_base_parse(spec["base"]),
                                    retain=retain))
    return refine(RefinementRun(kind=kind, depth=depth,
                                sides=tuple(spec["sides"]), retain=retain))


def _root_from_witness(w: dict) -> TriangleNode:
    if w.get("sides") is not None:
        return triangle_from_sides(*w["sides"])
    return triangle_from_angles_deg(*w["angles_deg"])


# ---------------------------------------------------------------------------
# Suite context: fixtures, sweeps, shared runs
# ---------------------------------------------------------------------------

class _Context:
    def __init__(self, depth: int, sweep_size: int, seed: int) -> None:
        self.depth = depth
        self.sweep_size = sweep_size
        self.seed = seed
        rng = random.Random(seed)
        self.bases: list[BaseAngles] = list(ANGLE_FIXTURES)
        self.bases += [random_valid_base(rng) for _ in range(sweep_size)]
        fixture_triangles = [tuple(float(x) for x in b.as_tuple())
                             for b in ANGLE_FIXTURES]
        self.triangles: list[tuple[float, float, float]] = fixture_triangles
        self.triangles += [random_triangle_angles(rng)
                           for _ in range(10 * sweep_size)]
        self.dyadics = [(rng.randint(-10**9, 10**9), rng.randint(0, 60))
                        for _ in range(sweep_size)]
        walk_count = min(100, sweep_size) + len(ANGLE_FIXTURES)
        self.walks = [
            (base, "".join(rng.choice("01") for _ in range(CARRIER_N_MAX)))
            for base in self.bases[:walk_count]
        ]
        self._exact_cache: dict[BaseAngles, list] = {}
        self._le_cache: dict[BaseAngles, list] = {}

    def exact_stats(self, base: BaseAngles):
        stats = self._exact_cache.get(base)
        if stats is None:
            stats = _exact_stats(base, self.depth)
            self._exact_cache[base] = stats
        return stats

    def le_stats(self, base: BaseAngles):
        stats = self._le_cache.get(base)
        if stats is None:
            stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                         depth=self.depth, base=base)).stats
            self._le_cache[base] = stats
        return stats


def _finish(name: str, tolerance: float,
            items: Iterable[tuple[float, dict]]) -> CheckReport:
    worst = math.inf
    witness: dict = {}
    population = 0
    for margin, wit in items:
        population += 1
        if margin < worst:
            worst = margin
            witness = wit
    if population == 0:
        worst = 0.0
    return CheckReport(name, population, worst, tolerance, witness,
                       worst >= -tolerance)


_CHECKS: list[tuple[str, float, Callable[[_Context], Iterator[tuple[float, dict]]]]] = []
_REPLAYERS: dict[str, Callable[[dict], float]] = {}


def _check(name: str, tolerance: float):
    def wrap(fn):
        _CHECKS.append((name, tolerance, fn))
        return fn
    return wrap


def _replayer(name: str):
    def wrap(fn):
        _REPLAYERS[name] = fn
        return fn
    return wrap


# ---------------------------------------------------------------------------
# Exact sequence and form checks
# ---------------------------------------------------------------------------

def _m_jacobsthal_sum(n: int) -> float:
    return 0.0 if jacobsthal(n) + jacobsthal(n + 1) == 2**n else -1.0


@_check("jacobsthal-sum-identity", TOL_EXACT)
def _c_jacobsthal_sum(ctx):
    for n in range(65):
        yield _m_jacobsthal_sum(n), {"n": n}


_replayer("jacobsthal-sum-identity")(lambda w: _m_jacobsthal_sum(w["n"]))


def _m_jacobsthal_closed(n: int) -> float:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, b + 2 * a
    return 0.0 if jacobsthal(n) == a else -1.0


@_check("jacobsthal-closed-form", TOL_EXACT)
def _c_jacobsthal_closed(ctx):
    for n in range(65):
        yield _m_jacobsthal_closed(n), {"n": n}


_replayer("jacobsthal-closed-form")(lambda w: _m_jacobsthal_closed(w["n"]))


def _m_carrier_sum(n: int) -> float:
    major, minor = carrier_angle_forms(n)
    total = major + minor + FORM_GAMMA
    ok = all(c.as_fraction() == 1 for c in total.coefficients())
    return 0.0 if ok else -1.0


@_check("carrier-form-coefficient-sum", TOL_EXACT)
def _c_carrier_sum(ctx):
    for n in range(1, 41):
        yield _m_carrier_sum(n), {"n": n}


_replayer("carrier-form-coefficient-sum")(lambda w: _m_carrier_sum(w["n"]))


def _m_carrier_dominates(base: BaseAngles, n: int) -> float:
    major, minor = carrier_angle_forms(n)
    big = evaluate_angle_form(major, base)
    small = evaluate_angle_form(minor, base)
    return float(min(big - small, big - base.gamma))


@_check("carrier-major-dominates", TOL_EXACT)
def _c_carrier_dominates(ctx):
    for base in ctx.bases:
        worst = math.inf
        worst_n = 1
        for n in range(1, CARRIER_N_MAX + 1):
            m = _m_carrier_dominates(base, n)
            if m < worst:
                worst, worst_n = m, n
        yield worst, {"base": _base_json(base), "n": worst_n}


@_replayer("carrier-major-dominates")
def _r_carrier_dominates(w):
    return _m_carrier_dominates(_base_parse(w["base"]), w["n"])


def _m_dyadic_roundtrip(numerator: int, log2_denominator: int) -> float:
    x = DyadicRational(numerator, log2_denominator)
    return 0.0 if (x + x).halve() == x else -1.0


@_check("dyadic-halve-add-roundtrip", TOL_EXACT)
def _c_dyadic_roundtrip(ctx):
    for num, k in ctx.dyadics:
        yield _m_dyadic_roundtrip(num, k), {
            "numerator": num, "log2_denominator": k}


@_replayer("dyadic-halve-add-roundtrip")
def _r_dyadic_roundtrip(w):
    return _m_dyadic_roundtrip(w["numerator"], w["log2_denominator"])


# ---------------------------------------------------------------------------
# Single-split geometry checks over random triangles
# ---------------------------------------------------------------------------

def _m_child_areas(angles: tuple[float, float, float]) -> float:
    t = triangle_from_angles_deg(*angles)
    left, right = bisect(t, ProcedureKind.LARGEST_ANGLE)
    return -abs(left.area() + right.area() - t.area()) / t.area()


@_check("child-areas-sum-to-parent", TOL_MULTI_STEP)
def _c_child_areas(ctx):
    for angles in ctx.triangles:
        yield _m_child_areas(angles), {"angles_deg": list(angles)}


_replayer("child-areas-sum-to-parent")(
    lambda w: _m_child_areas(tuple(w["angles_deg"])))


def _m_foot_inside(angles: tuple[float, float, float]) -> float:
    t = triangle_from_angles_deg(*angles)
    left, _ = bisect(t, ProcedureKind.LARGEST_ANGLE)
    foot = left.vertices[2]
    ia = largest_angle_vertex(t)
    B = t.vertices[(ia + 1) % 3]
    C = t.vertices[(ia + 2) % 3]
    ex, ey = C.x - B.x, C.y - B.y
    s = ((foot.x - B.x) * ex + (foot.y - B.y) * ey) / (ex * ex + ey * ey)
    return min(s, 1.0 - s)


@_check("bisector-foot-inside-segment", TOL_SINGLE_STEP)
def _c_foot_inside(ctx):
    for angles in ctx.triangles:
        yield _m_foot_inside(angles), {"angles_deg": list(angles)}


_replayer("bisector-foot-inside-segment")(
    lambda w: _m_foot_inside(tuple(w["angles_deg"])))


def _m_keeper_aspect(angles: tuple[float, float, float]) -> float:
    """Margin of: the child keeping the smallest-angle vertex has the larger
    aspect ratio."""
    t = triangle_from_angles_deg(*angles)
    ia = largest_angle_vertex(t)
    ismall = smallest_angle_vertex(t)
    if ismall == ia:  # all angles equal: either base vertex qualifies
        angs = t.angles_deg()
        ib, ic = (ia + 1) % 3, (ia + 2) % 3
        ismall = ib if angs[ib] <= angs[ic] else ic
    left, right = bisect(t, ProcedureKind.LARGEST_ANGLE)
    keeper = left if ismall == (ia + 1) % 3 else right
    other = right if keeper is left else left
    return aspect_ratio(keeper) - aspect_ratio(other)


@_check("min-angle-child-has-larger-aspect", TOL_SINGLE_STEP)
def _c_keeper_aspect(ctx):
    for angles in ctx.triangles:
        yield _m_keeper_aspect(angles), {"angles_deg": list(angles)}


_replayer("min-angle-child-has-larger-aspect")(
    lambda w: _m_keeper_aspect(tuple(w["angles_deg"])))


def _m_aspect_trig(angles: tuple[float, float, float]) -> float:
    t = triangle_from_angles_deg(*angles)
    r = aspect_ratio(t)
    return -abs(r - aspect_ratio_trig(t)) / r


@_check("aspect-trig-matches-side-form", TOL_SINGLE_STEP)
def _c_aspect_trig(ctx):
    for angles in ctx.triangles:
        yield _m_aspect_trig(angles), {"angles_deg": list(angles)}


_replayer("aspect-trig-matches-side-form")(
    lambda w: _m_aspect_trig(tuple(w["angles_deg"])))


def _m_aspect_range(angles: tuple[float, float, float]) -> float:
    r = aspect_ratio(triangle_from_angles_deg(*angles))
    return min(r - 0.5, 1.0 - r)


@_check("aspect-ratio-in-range", TOL_SINGLE_STEP)
def _c_aspect_range(ctx):
    for angles in ctx.triangles:
        yield _m_aspect_range(angles), {"angles_deg": list(angles)}


_replayer("aspect-ratio-in-range")(
    lambda w: _m_aspect_range(tuple(w["angles_deg"])))


def _m_bisector_bound(angles: tuple[float, float, float]) -> float:
    return SQRT3_2 - bisector_to_longest_side_ratio(
        triangle_from_angles_deg(*angles))


@_check("bisector-length-bound", TOL_SINGLE_STEP)
def _c_bisector_bound(ctx):
    for angles in ctx.triangles:
        yield _m_bisector_bound(angles), {"angles_deg": list(angles)}


_replayer("bisector-length-bound")(
    lambda w: _m_bisector_bound(tuple(w["angles_deg"])))


def _m_altitude_similarity(w: dict) -> float:
    node = _root_from_witness(w)
    for index in w.get("path", ()):
        node = bisect(node, ProcedureKind.SHORTEST_ALTITUDE)[index]
    parent_angles = sorted(node.angles_deg())
    worst = 0.0
    for child in bisect(node, ProcedureKind.SHORTEST_ALTITUDE):
        for got, want in zip(sorted(child.angles_deg()), parent_angles):
            worst = max(worst, abs(got - want))
    return -worst


@_check("altitude-children-similar-to-right-parent", TOL_MULTI_STEP)
def _c_altitude_similarity(ctx):
    population: list[dict] = [
        {"sides": list(PYTHAGOREAN_SIDES), "path": []},
        {"angles_deg": [90.0, 45.0, 45.0], "path": []},
    ]
    for base in ANGLE_FIXTURES:
        angles = [float(x) for x in base.as_tuple()]
        population.append({"angles_deg": angles, "path": [0]})
        population.append({"angles_deg": angles, "path": [1]})
    for w in population:
        yield _m_altitude_similarity(w), w


_replayer("altitude-children-similar-to-right-parent")(_m_altitude_similarity)


def _m_symbolic_numeric(base: BaseAngles, lineage: str) -> float:
    node = triangle_from_angles(base)
    worst = 0.0
    for bit in lineage:
        left, right = bisect(node, ProcedureKind.LARGEST_ANGLE)
        node = right if bit == "1" else left
        for value, numeric in zip(node.angles_exact, node.angles_deg()):
            worst = max(worst, abs(float(value) - numeric))
    return -worst


@_check("symbolic-numeric-angle-agreement", TOL_SYMBOLIC_NUMERIC)
def _c_symbolic_numeric(ctx):
    for base, lineage in ctx.walks:
        yield _m_symbolic_numeric(base, lineage), {
            "base": _base_json(base), "lineage": lineage}


@_replayer("symbolic-numeric-angle-agreement")
def _r_symbolic_numeric(w):
    return _m_symbolic_numeric(_base_parse(w["base"]), w["lineage"])


# ---------------------------------------------------------------------------
# Largest-angle run aggregates (exact mode)
# ---------------------------------------------------------------------------

def _m_min_angle_identity(stats, base: BaseAngles) -> tuple[float, int]:
    expected = min(base.gamma, base.alpha / 2)
    worst, worst_n = 0.0, 0
    for row in stats[1:]:
        diff = row.min_angle_deg - expected
        if diff != 0 and -abs(float(diff)) < worst:
            worst, worst_n = -abs(float(diff)), row.n
    return worst, worst_n


@_check("min-angle-equals-min-gamma-half-alpha", TOL_EXACT)
def _c_min_angle_identity(ctx):
    for base in ctx.bases:
        margin, n = _m_min_angle_identity(ctx.exact_stats(base), base)
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("min-angle-equals-min-gamma-half-alpha")
def _r_min_angle_identity(w):
    base = _base_parse(w["base"])
    return _m_min_angle_identity(_exact_stats(base, w["depth"]), base)[0]


def _m_step_inequality(stats) -> tuple[float, int]:
    # For consecutive generations: half the next smallest-largest angle is
    # at least min(current smallest angle, half the current smallest-largest).
    worst, worst_n = math.inf, 0
    for n in range(len(stats) - 1):
        diff = (stats[n + 1].min_largest_angle_deg / 2
                - min(stats[n].min_angle_deg, stats[n].min_largest_angle_deg / 2))
        m = float(diff)
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("next-largest-angle-inequality", TOL_EXACT)
def _c_step_inequality(ctx):
    for base in ctx.bases:
        margin, n = _m_step_inequality(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("next-largest-angle-inequality")
def _r_step_inequality(w):
    return _m_step_inequality(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _m_mesh_two_step(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for n in range(len(stats) - 2):
        bound = stats[n].rho * stats[n].mesh
        m = (bound - stats[n + 2].mesh) / bound
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("mesh-two-step-contraction", TOL_SINGLE_STEP)
def _c_mesh_two_step(ctx):
    for base in ctx.bases:
        margin, n = _m_mesh_two_step(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("mesh-two-step-contraction")
def _r_mesh_two_step(w):
    return _m_mesh_two_step(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _m_mesh_decay(stats) -> tuple[float, int]:
    rho0 = stats[0].rho
    m0 = stats[0].mesh
    worst, worst_n = math.inf, 0
    for row in stats:
        bound = m0 * rho0 ** (row.n // 2)
        m = (bound - row.mesh) / bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("mesh-geometric-decay", TOL_MULTI_STEP)
def _c_mesh_decay(ctx):
    for base in ctx.bases:
        margin, n = _m_mesh_decay(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("mesh-geometric-decay")
def _r_mesh_decay(w):
    return _m_mesh_decay(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _m_aspect_two_step(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for n in range(len(stats) - 2):
        m = stats[n].rho - stats[n + 2].max_aspect_ratio
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("aspect-two-step-bound", TOL_SINGLE_STEP)
def _c_aspect_two_step(ctx):
    for base in ctx.bases:
        margin, n = _m_aspect_two_step(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("aspect-two-step-bound")
def _r_aspect_two_step(w):
    return _m_aspect_two_step(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _m_rho_monotone(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for n in range(len(stats) - 2):
        m = stats[n].rho - stats[n + 1].rho
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("rho-nonincreasing", TOL_SINGLE_STEP)
def _c_rho_monotone(ctx):
    for base in ctx.bases:
        margin, n = _m_rho_monotone(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("rho-nonincreasing")
def _r_rho_monotone(w):
    return _m_rho_monotone(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _m_flat_start_bound(base: BaseAngles) -> float:
    stats = _exact_stats(base, 2)
    return FLAT_START_ASPECT_BOUND - stats[2].max_aspect_ratio


@_check("second-generation-aspect-special-bound", TOL_SINGLE_STEP)
def _c_flat_start_bound(ctx):
    for base in ctx.bases:
        if base.alpha <= 2 * base.gamma:
            yield _m_flat_start_bound(base), {"base": _base_json(base)}


@_replayer("second-generation-aspect-special-bound")
def _r_flat_start_bound(w):
    return _m_flat_start_bound(_base_parse(w["base"]))


def _m_mesh_nonincreasing(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for n in range(len(stats) - 1):
        m = (stats[n].mesh - stats[n + 1].mesh) / stats[n].mesh
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("mesh-nonincreasing", TOL_SINGLE_STEP)
def _c_mesh_nonincreasing(ctx):
    for base in ctx.bases:
        margin, n = _m_mesh_nonincreasing(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth,
                       "kind": ProcedureKind.LARGEST_ANGLE.value}
    for base in ANGLE_FIXTURES:
        margin, n = _m_mesh_nonincreasing(ctx.le_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth,
                       "kind": ProcedureKind.LONGEST_EDGE.value}


@_replayer("mesh-nonincreasing")
def _r_mesh_nonincreasing(w):
    result = _run_from_spec(w, w["depth"])
    return _m_mesh_nonincreasing(result.stats)[0]


@_check("max-aspect-sequence-observed", TOL_EXACT)
def _c_r_sequence_observed(ctx):
    # Informational only: the two-step bound is asserted elsewhere; whether
    # the max-aspect sequence is eventually monotone is measured, not
    # asserted, so the margin here is always 0 and the witness records the
    # largest observed one-step increase.
    for base in ctx.bases:
        stats = ctx.exact_stats(base)
        rise = 0.0
        rise_n = 0
        for n in range(len(stats) - 1):
            d = stats[n + 1].max_aspect_ratio - stats[n].max_aspect_ratio
            if d > rise:
                rise, rise_n = d, n
        yield 0.0, {"base": _base_json(base), "largest_rise": rise,
                    "after_generation": rise_n}


_replayer("max-aspect-sequence-observed")(lambda w: 0.0)


# ---------------------------------------------------------------------------
# Similarity classes and carrier lineage
# ---------------------------------------------------------------------------

def _m_carrier_closed_form(base: BaseAngles) -> tuple[float, int]:
    track = track_carrier(RefinementRun(kind=ProcedureKind.LARGEST_ANGLE,
                                        depth=CARRIER_N_MAX, base=base))
    for n, (major, minor, kept) in enumerate(track, start=1):
        form_major, form_minor = carrier_angle_forms(n)
        if (major != evaluate_angle_form(form_major, base)
                or minor != evaluate_angle_form(form_minor, base)
                or kept != base.gamma):
            return -1.0, n
    return 0.0, 0


@_check("carrier-track-matches-closed-form", TOL_EXACT)
def _c_carrier_closed_form(ctx):
    for base, _ in ctx.walks:
        margin, n = _m_carrier_closed_form(base)
        yield margin, {"base": _base_json(base), "n": n}


@_replayer("carrier-track-matches-closed-form")
def _r_carrier_closed_form(w):
    return _m_carrier_closed_form(_base_parse(w["base"]))[0]


def _m_majors_distinct(base: BaseAngles) -> float:
    ok, _ = check_major_angles_distinct(base, CARRIER_N_MAX)
    return 0.0 if ok else -1.0


@_check("major-angles-distinct", TOL_EXACT)
def _c_majors_distinct(ctx):
    for base in ctx.bases:
        if base.alpha != 2 * base.beta:
            yield _m_majors_distinct(base), {"base": _base_json(base)}


@_replayer("major-angles-distinct")
def _r_majors_distinct(w):
    return _m_majors_distinct(_base_parse(w["base"]))


def _m_major_collision(alpha: Fraction, beta: Fraction) -> float:
    collision = first_major_angle_collision(alpha, beta, CARRIER_N_MAX)
    return 0.0 if collision is not None else -1.0


@_check("major-angle-collision-when-alpha-twice-beta", TOL_EXACT)
def _c_major_collision(ctx):
    for alpha, beta in COLLISION_PAIRS:
        yield _m_major_collision(alpha, beta), {
            "pair": [str(alpha), str(beta)]}


@_replayer("major-angle-collision-when-alpha-twice-beta")
def _r_major_collision(w):
    return _m_major_collision(Fraction(w["pair"][0]), Fraction(w["pair"][1]))


def _m_single_class(stats) -> float:
    extra = max(row.cumulative_similarity_classes for row in stats) - 1
    return -float(extra)


@_check("right-isosceles-single-class", TOL_EXACT)
def _c_single_class(ctx):
    yield _m_single_class(ctx.exact_stats(RIGHT_ISOSCELES)), {
        "base": _base_json(RIGHT_ISOSCELES), "depth": ctx.depth}


@_replayer("right-isosceles-single-class")
def _r_single_class(w):
    return _m_single_class(_exact_stats(_base_parse(w["base"]), w["depth"]))


def _m_class_growth(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for row in stats:
        m = float(row.cumulative_similarity_classes - row.n)
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("class-count-grows-with-depth", TOL_EXACT)
def _c_class_growth(ctx):
    exceptional = RIGHT_ISOSCELES
    for base in ctx.bases:
        if base == exceptional:
            continue
        margin, n = _m_class_growth(ctx.exact_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("class-count-grows-with-depth")
def _r_class_growth(w):
    return _m_class_growth(_exact_stats(_base_parse(w["base"]), w["depth"]))[0]


def _altitude_depth(depth: int) -> int:
    return min(depth, 8)


def _m_altitude_classes(spec: dict, depth: int) -> tuple[float, int]:
    result = _run_from_spec(spec, depth)
    union: set = set()
    worst, worst_n = math.inf, 0
    for n, keys in enumerate(result.class_keys[1:], start=1):
        union |= keys
        m = float(2 - len(union))
        if m < worst:
            worst, worst_n = m, n
    return worst, worst_n


@_check("altitude-class-count-bound", TOL_EXACT)
def _c_altitude_classes(ctx):
    depth = _altitude_depth(ctx.depth)
    specs = [{"kind": ProcedureKind.SHORTEST_ALTITUDE.value,
              "base": _base_json(base)} for base in ANGLE_FIXTURES]
    specs.append({"kind": ProcedureKind.SHORTEST_ALTITUDE.value,
                  "base": None, "sides": list(PYTHAGOREAN_SIDES)})
    for spec in specs:
        margin, n = _m_altitude_classes(spec, depth)
        spec = dict(spec, n=n, depth=depth)
        yield margin, spec


@_replayer("altitude-class-count-bound")
def _r_altitude_classes(w):
    return _m_altitude_classes(w, w["depth"])[0]


def _m_altitude_mesh(spec: dict, depth: int) -> tuple[float, int]:
    result = _run_from_spec(spec, depth, retain=RetainPolicy.FULL_TREE)
    root = result.generations[0][0]
    subtrees = []
    for child in bisect(root, ProcedureKind.SHORTEST_ALTITUDE):
        sides = sorted(child.sides(), reverse=True)
        z = sides[0]
        subtrees.append((z, sides[1] / z))
    worst, worst_n = math.inf, 0
    for row in result.stats[1:]:
        bound = max(z * q ** (row.n - 1) for z, q in subtrees)
        m = (bound - row.mesh) / bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("altitude-mesh-geometric-bound", TOL_MULTI_STEP)
def _c_altitude_mesh(ctx):
    depth = _altitude_depth(ctx.depth)
    specs = [{"kind": ProcedureKind.SHORTEST_ALTITUDE.value,
              "base": _base_json(base)} for base in ANGLE_FIXTURES]
    specs.append({"kind": ProcedureKind.SHORTEST_ALTITUDE.value,
                  "base": None, "sides": list(PYTHAGOREAN_SIDES)})
    for spec in specs:
        margin, n = _m_altitude_mesh(spec, depth)
        yield margin, dict(spec, n=n, depth=depth)


@_replayer("altitude-mesh-geometric-bound")
def _r_altitude_mesh(w):
    return _m_altitude_mesh(w, w["depth"])[0]


# ---------------------------------------------------------------------------
# Longest-edge reference bounds
# ---------------------------------------------------------------------------

def _m_le_min_angle(stats, base: BaseAngles) -> tuple[float, int]:
    g0 = math.radians(float(base.gamma))
    bound = math.degrees(math.atan(math.sin(g0) / (2.0 - math.cos(g0))))
    worst, worst_n = math.inf, 0
    for row in stats:
        m = row.min_angle_deg - bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("longest-edge-min-angle-bound", TOL_MULTI_STEP)
def _c_le_min_angle(ctx):
    for base in ctx.bases:
        margin, n = _m_le_min_angle(ctx.le_stats(base), base)
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("longest-edge-min-angle-bound")
def _r_le_min_angle(w):
    base = _base_parse(w["base"])
    stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                 depth=w["depth"], base=base)).stats
    return _m_le_min_angle(stats, base)[0]


def _m_le_halfstep(stats) -> tuple[float, int]:
    m0 = stats[0].mesh
    worst, worst_n = math.inf, 0
    for row in stats:
        bound = m0 * SQRT3_2 ** (row.n // 2)
        m = (bound - row.mesh) / bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("longest-edge-mesh-sqrt3-half-bound", TOL_MULTI_STEP)
def _c_le_halfstep(ctx):
    for base in ctx.bases:
        margin, n = _m_le_halfstep(ctx.le_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("longest-edge-mesh-sqrt3-half-bound")
def _r_le_halfstep(w):
    stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                 depth=w["depth"],
                                 base=_base_parse(w["base"]))).stats
    return _m_le_halfstep(stats)[0]


def _le_parity_bound(m0: float, n: int) -> float:
    factor = math.sqrt(3.0) if n % 2 == 0 else math.sqrt(2.0)
    return m0 * factor * 2.0 ** (-n / 2.0)


def _m_le_parity(stats) -> tuple[float, int]:
    m0 = stats[0].mesh
    worst, worst_n = math.inf, 0
    for row in stats:
        bound = _le_parity_bound(m0, row.n)
        m = (bound - row.mesh) / bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("longest-edge-mesh-parity-bound", TOL_MULTI_STEP)
def _c_le_parity(ctx):
    for base in ctx.bases:
        margin, n = _m_le_parity(ctx.le_stats(base))
        yield margin, {"base": _base_json(base), "n": n, "depth": ctx.depth}


@_replayer("longest-edge-mesh-parity-bound")
def _r_le_parity(w):
    stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                 depth=w["depth"],
                                 base=_base_parse(w["base"]))).stats
    return _m_le_parity(stats)[0]


def _m_le_equilateral_mesh(stats) -> tuple[float, int]:
    m0 = stats[0].mesh
    worst, worst_n = math.inf, 0
    for row in stats[1:]:
        bound = _le_parity_bound(m0, row.n)
        m = -abs(row.mesh - bound) / bound
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("longest-edge-equilateral-mesh-equality", TOL_MULTI_STEP)
def _c_le_equilateral_mesh(ctx):
    margin, n = _m_le_equilateral_mesh(ctx.le_stats(EQUILATERAL))
    yield margin, {"base": _base_json(EQUILATERAL), "n": n, "depth": ctx.depth}


@_replayer("longest-edge-equilateral-mesh-equality")
def _r_le_equilateral_mesh(w):
    stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                 depth=w["depth"],
                                 base=_base_parse(w["base"]))).stats
    return _m_le_equilateral_mesh(stats)[0]


def _m_le_equilateral_angle(stats) -> tuple[float, int]:
    worst, worst_n = math.inf, 0
    for row in stats[1:]:
        m = -abs(row.min_angle_deg - 30.0)
        if m < worst:
            worst, worst_n = m, row.n
    return worst, worst_n


@_check("longest-edge-equilateral-min-angle", TOL_MULTI_STEP)
def _c_le_equilateral_angle(ctx):
    margin, n = _m_le_equilateral_angle(ctx.le_stats(EQUILATERAL))
    yield margin, {"base": _base_json(EQUILATERAL), "n": n, "depth": ctx.depth}


@_replayer("longest-edge-equilateral-min-angle")
def _r_le_equilateral_angle(w):
    stats = refine(RefinementRun(kind=ProcedureKind.LONGEST_EDGE,
                                 depth=w["depth"],
                                 base=_base_parse(w["base"]))).stats
    return _m_le_equilateral_angle(stats)[0]


# ---------------------------------------------------------------------------
# Streaming / full-tree agreement
# ---------------------------------------------------------------------------

def _m_mode_identity(spec: dict, depth: int) -> float:
    streamed = _run_from_spec(spec, depth, RetainPolicy.STREAMING)
    retained = _run_from_spec(spec, depth, RetainPolicy.FULL_TREE)
    worst = 0.0
    for a, b in zip(streamed.stats, retained.stats):
        if (a.n, a.triangle_count, a.cumulative_similarity_classes) != \
                (b.n, b.triangle_count, b.cumulative_similarity_classes):
            return -1.0
        if a.min_angle_deg != b.min_angle_deg or \
                a.min_largest_angle_deg != b.min_largest_angle_deg:
            return -1.0
        for x, y in ((a.mesh, b.mesh), (a.max_aspect_ratio, b.max_aspect_ratio),
                     (a.rho or 0.0, b.rho or 0.0)):
            if y != 0.0 or x != 0.0:
                worst = max(worst, abs(x - y) / max(abs(x), abs(y), 1e-300))
    return -worst


@_check("streaming-matches-full-tree", TOL_MODE_IDENTITY)
def _c_mode_identity(ctx):
    depth = min(ctx.depth, 10)
    specs = [
        {"kind": ProcedureKind.LARGEST_ANGLE.value, "base": _base_json(EQUILATERAL)},
        {"kind": ProcedureKind.LARGEST_ANGLE.value, "base": _base_json(THIN)},
        {"kind": ProcedureKind.LONGEST_EDGE.value, "base": _base_json(EQUILATERAL)},
        {"kind": ProcedureKind.SHORTEST_ALTITUDE.value, "base": None,
         "sides": list(PYTHAGOREAN_SIDES)},
    ]
    for spec in specs:
        yield _m_mode_identity(spec, depth), dict(spec, depth=depth)


@_replayer("streaming-matches-full-tree")
def _r_mode_identity(w):
    return _m_mode_identity(w, w["depth"])


# ---------------------------------------------------------------------------
# Suite driver
# ---------------------------------------------------------------------------

def run_suite(depth: int = 8, sweep_size: int = 1000,
              seed: int = 0) -> list[CheckReport]:
    """Run every check; deterministic given the seed; sorted by check name."""
    if depth < 4:
        raise ValueError("depth must be at least 4")
    if sweep_size < 1:
        raise ValueError("sweep_size must be at least 1")
    ctx = _Context(depth, sweep_size, seed)
    reports = [_finish(name, tol, fn(ctx)) for name, tol, fn in _CHECKS]
    reports.sort(key=lambda r: r.name)
    return reports


def check_names() -> list[str]:
    return sorted(name for name, _, _ in _CHECKS)


def replay_margin(name: str, witness: dict) -> float:
    """Recompute the margin of a report's extremal case from its witness.

    The same margin kernel that produced the report is invoked on the same
    deterministic inputs, so the value matches bit for bit.
    """
    try:
        fn = _REPLAYERS[name]
    except KeyError:
        raise KeyError(f"unknown check name {name!r}") from None
    return fn(witness)


def report_as_dict(reports: list[CheckReport], depth: int, sweep_size: int,
                   seed: int) -> dict:
    return {
        "depth": depth,
        "sweep_size": sweep_size,
        "seed": seed,
        "all_pass": all(r.passed for r in reports),
        "checks": [r.to_json_dict() for r in reports],
    }
