"""Exact arithmetic for angles produced by repeated angle bisection.

Bisecting the largest angle of a triangle only ever halves an angle or
adds a halved angle to an existing one, so every angle in the process is
a combination ``c_a*alpha + c_b*beta + c_g*gamma`` whose coefficients are
dyadic rationals (p / 2**k).  Tracking the coefficients exactly lets
similarity classes be counted by equality instead of floating-point
closeness, and keeps minimum-angle statistics exact at any depth.

Angles are measured in degrees throughout this module; conversion to
radians happens only at the numeric geometry boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class DyadicRational:
    """An exact number numerator / 2**log2_denominator.

    Canonical form: the numerator is odd (or zero), and zero is stored as
    0 / 2**0.  Addition, subtraction, halving and comparison are exact;
    numerators are arbitrary-precision integers so denominators may grow
    like 2**n without overflow.
    """

    __slots__ = ("numerator", "log2_denominator")

    def __init__(self, numerator: int, log2_denominator: int = 0) -> None:
        if log2_denominator < 0:
            raise ValueError("log2_denominator must be non-negative")
        if numerator == 0:
            log2_denominator = 0
        elif log2_denominator:
            twos = (numerator & -numerator).bit_length() - 1
            if twos:
                shift = twos if twos < log2_denominator else log2_denominator
                numerator >>= shift
                log2_denominator -= shift
        self.numerator = numerator
        self.log2_denominator = log2_denominator

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DyadicRational":
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} does not have a power-of-two denominator")
        return cls(value.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def halve(self) -> "DyadicRational":
        return DyadicRational(self.numerator, self.log2_denominator + 1)

    def _aligned(self, other: "DyadicRational") -> tuple[int, int]:
        ka, kb = self.log2_denominator, other.log2_denominator
        if ka == kb:
            return self.numerator, other.numerator
        if ka > kb:
            return self.numerator, other.numerator << (ka - kb)
        return self.numerator << (kb - ka), other.numerator

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        if not isinstance(other, DyadicRational):
            return NotImplemented
        ka, kb = self.log2_denominator, other.log2_denominator
        if ka == kb:
            return DyadicRational(self.numerator + other.numerator, ka)
        if ka > kb:
            return DyadicRational(self.numerator + (other.numerator << (ka - kb)), ka)
        return DyadicRational((self.numerator << (kb - ka)) + other.numerator, kb)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return self + DyadicRational(-other.numerator, other.log2_denominator)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.log2_denominator)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return (
            self.numerator == other.numerator
            and self.log2_denominator == other.log2_denominator
        )

    def __lt__(self, other: "DyadicRational") -> bool:
        a, b = self._aligned(other)
        return a < b

    def __le__(self, other: "DyadicRational") -> bool:
        a, b = self._aligned(other)
        return a <= b

    def __gt__(self, other: "DyadicRational") -> bool:
        a, b = self._aligned(other)
        return a > b

    def __ge__(self, other: "DyadicRational") -> bool:
        a, b = self._aligned(other)
        return a >= b

    def __hash__(self) -> int:
        return hash((self.numerator, self.log2_denominator))

    def __float__(self) -> float:
        return self.numerator / (1 << self.log2_denominator)

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.log2_denominator})"

    def __str__(self) -> str:
        if self.log2_denominator == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.log2_denominator}"


DYADIC_ZERO = DyadicRational(0)
DYADIC_ONE = DyadicRational(1)


class AngleForm:
    """One triangle angle written as c_alpha*alpha + c_beta*beta + c_gamma*gamma.

    Coefficients are nonnegative dyadic rationals.  The three forms of any
    triangle in the process sum coefficient-wise to (1, 1, 1), mirroring the
    180-degree angle sum.
    """

    __slots__ = ("c_alpha", "c_beta", "c_gamma")

    def __init__(self, c_alpha: DyadicRational, c_beta: DyadicRational,
                 c_gamma: DyadicRational) -> None:
        if c_alpha.numerator < 0 or c_beta.numerator < 0 or c_gamma.numerator < 0:
            raise ValueError("angle form coefficients must be nonnegative")
        self.c_alpha = c_alpha
        self.c_beta = c_beta
        self.c_gamma = c_gamma

    def halve(self) -> "AngleForm":
        return AngleForm(self.c_alpha.halve(), self.c_beta.halve(), self.c_gamma.halve())

    def __add__(self, other: "AngleForm") -> "AngleForm":
        if not isinstance(other, AngleForm):
            return NotImplemented
        return AngleForm(
            self.c_alpha + other.c_alpha,
            self.c_beta + other.c_beta,
            self.c_gamma + other.c_gamma,
        )

    def coefficients(self) -> tuple[DyadicRational, DyadicRational, DyadicRational]:
        return (self.c_alpha, self.c_beta, self.c_gamma)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AngleForm):
            return NotImplemented
        return (
            self.c_alpha == other.c_alpha
            and self.c_beta == other.c_beta
            and self.c_gamma == other.c_gamma
        )

    def __hash__(self) -> int:
        return hash((self.c_alpha, self.c_beta, self.c_gamma))

    def __repr__(self) -> str:
        return f"AngleForm({self.c_alpha!s}*a + {self.c_beta!s}*b + {self.c_gamma!s}*g)"


FORM_ALPHA = AngleForm(DYADIC_ONE, DYADIC_ZERO, DYADIC_ZERO)
FORM_BETA = AngleForm(DYADIC_ZERO, DYADIC_ONE, DYADIC_ZERO)
FORM_GAMMA = AngleForm(DYADIC_ZERO, DYADIC_ZERO, DYADIC_ONE)


@dataclass(frozen=True)
class BaseAngles:
    """The three starting angles as exact rational degrees, alpha >= beta >= gamma."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, Fraction(value))
        if self.alpha + self.beta + self.gamma != 180:
            raise ValueError(
                f"angles must sum to 180 degrees exactly, got "
                f"{self.alpha} + {self.beta} + {self.gamma}"
            )
        if not (self.alpha >= self.beta >= self.gamma > 0):
            raise ValueError(
                f"angles must satisfy alpha >= beta >= gamma > 0, got "
                f"({self.alpha}, {self.beta}, {self.gamma})"
            )

    @classmethod
    def from_unordered(cls, a, b, c) -> "BaseAngles":
        """Build from three positive rationals in any order (labels sorted descending)."""
        vals = sorted((Fraction(a), Fraction(b), Fraction(c)), reverse=True)
        return cls(*vals)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.alpha, self.beta, self.gamma)


def evaluate_angle_form(form: AngleForm, base: BaseAngles) -> Fraction:
    """Instantiate a symbolic angle at concrete base angles, exactly, in degrees."""
    return (
        form.c_alpha.as_fraction() * base.alpha
        + form.c_beta.as_fraction() * base.beta
        + form.c_gamma.as_fraction() * base.gamma
    )


def jacobsthal(n: int) -> int:
    """n-th term of 0, 1, 1, 3, 5, 11, 21, 43, ... (j(n+1) = j(n) + 2*j(n-1)).

    Uses the closed form (2**n - (-1)**n) / 3, which is exact for all n >= 0.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return ((1 << n) - (1 if n % 2 == 0 else -1)) // 3


def carrier_angle_forms(n: int) -> tuple[AngleForm, AngleForm]:
    """Closed form for the two mutable angles of the generation-n carrier triangle.

    The carrier is the unique triangle of generation n that still holds the
    starting triangle's gamma angle; its other two angles are

        major(n) = j(n+1)/2**n * alpha + j(n)/2**(n-1) * beta
        minor(n) = j(n)/2**n   * alpha + j(n-1)/2**(n-1) * beta

    where j is the ``jacobsthal`` sequence.  major(n) is the angle bisected
    on the way to generation n+1; major(n) >= minor(n) and major(n) >= gamma
    for every valid base.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    major = AngleForm(
        DyadicRational(jacobsthal(n + 1), n),
        DyadicRational(jacobsthal(n), n - 1),
        DYADIC_ZERO,
    )
    minor = AngleForm(
        DyadicRational(jacobsthal(n), n),
        DyadicRational(jacobsthal(n - 1), n - 1),
        DYADIC_ZERO,
    )
    return major, minor


def major_angle_values(alpha: Fraction, beta: Fraction, n_max: int) -> list[Fraction]:
    """Exact values of major(1..n_max) for an arbitrary positive (alpha, beta) pair.

    No ordering between alpha and beta is required here; the collision
    behaviour below depends only on whether alpha == 2*beta.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    values = []
    for n in range(1, n_max + 1):
        values.append(
            Fraction(jacobsthal(n + 1), 1 << n) * alpha
            + Fraction(jacobsthal(n), 1 << (n - 1)) * beta
        )
    return values


def first_major_angle_collision(alpha: Fraction, beta: Fraction,
                                n_max: int) -> tuple[int, int] | None:
    """First (p, q), p < q <= n_max, with major(p) == major(q), or None.

    Exact evaluation: equal values can only occur when alpha == 2*beta, in
    which case every major(n) collapses to the constant alpha.
    """
    seen: dict[Fraction, int] = {}
    for n, value in enumerate(major_angle_values(alpha, beta, n_max), start=1):
        if value in seen:
            return (seen[value], n)
        seen[value] = n
    return None


def check_major_angles_distinct(base: BaseAngles,
                                n_max: int) -> tuple[bool, tuple[int, int] | None]:
    """Whether major(1..n_max) evaluated at base are pairwise distinct.

    Returns (True, None) when all values differ, else (False, (p, q)) with
    the first colliding pair.  A collision occurs exactly when the base has
    alpha == 2*beta (e.g. the right isosceles triangle).
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    collision = first_major_angle_collision(base.alpha, base.beta, n_max)
    return (collision is None, collision)
