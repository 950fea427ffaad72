"""(-2)-classes, their spherical points, and the excluded segments of V(X).

In the rational model the spherical point of ``delta = (r, n, s)`` (r > 0) is
``(n/r, 1/r)``, and the segment removed below it is ``{x = n/r, 0 < t <= 1/r}``.
Because ``gcd(r, n) = 1`` for every spherical class, a rational abscissa
``a/q`` in lowest terms can only be excluded by a class of rank ``q``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonSpherical, NotIsotropic, NotPrimitive, WindowEmpty
from .exact import as_fraction
from .lattice import MukaiVector, is_isotropic, is_primitive, is_spherical
from .model import HPoint, K3Context


class PointAtInfinity:
    """The boundary point at infinity of H."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = PointAtInfinity()


@dataclass(frozen=True)
class SphericalClass:
    delta: MukaiVector
    point: HPoint

    @classmethod
    def from_vector(cls, v: MukaiVector, ctx: K3Context) -> "SphericalClass":
        delta = v.normalized()
        return cls(delta, spherical_point(delta, ctx))

    @property
    def rank(self) -> int:
        return self.delta.r


@dataclass(frozen=True)
class ExcludedSegment:
    """``{x fixed, 0 < t <= top_t}``, or ``< top_t`` when ``top_closed`` is False."""

    x: Fraction
    top_t: Fraction
    top_closed: bool = True

    def contains(self, p: HPoint) -> bool:
        if p.x != self.x:
            return False
        return p.t <= self.top_t if self.top_closed else p.t < self.top_t


def spherical_point(delta: MukaiVector, ctx: K3Context) -> HPoint:
    if not is_spherical(delta, ctx):
        raise NonSpherical(f"{delta} is not spherical for d={ctx.d}")
    r = abs(delta.r)
    return HPoint(Fraction(delta.n, delta.r), Fraction(1, r))


def excluded_segment(delta: MukaiVector, ctx: K3Context, top_closed: bool = True) -> ExcludedSegment:
    p = spherical_point(delta, ctx)
    return ExcludedSegment(p.x, p.t, top_closed)


def associated_point_isotropic(v: MukaiVector, ctx: K3Context):
    """Boundary point where ``<exp(p), v> = 0``: ``n/r``, or INFINITY for r = 0."""
    if not is_isotropic(v, ctx):
        raise NotIsotropic(f"{v} is not isotropic for d={ctx.d}")
    if not is_primitive(v):
        raise NotPrimitive(f"{v} is not primitive")
    if v.r == 0:
        return INFINITY
    return Fraction(v.n, v.r)


@lru_cache(maxsize=None)
def _residues(d: int, r: int) -> tuple[int, ...]:
    """Residues n mod r with r | d n^2 + 1."""
    return tuple(n for n in range(r) if (d * n * n + 1) % r == 0)


def is_spherical_rank(d: int, r: int) -> bool:
    return bool(_residues(d, r))


def enumerate_spherical(ctx: K3Context, r_max: int, x_min, x_max) -> list[SphericalClass]:
    """All spherical classes with ``1 <= r <= r_max`` and ``x_min <= n/r <= x_max``.

    Sorted by ``(r, n)``.  Only the residues of ``n`` solving
    ``d n^2 + 1 = 0 (mod r)`` are visited.
    """
    lo, hi = as_fraction(x_min), as_fraction(x_max)
    if lo > hi:
        raise WindowEmpty(f"window [{lo}, {hi}] is empty")
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    d = ctx.d
    out = []
    for r in range(1, r_max + 1):
        n_lo = math.ceil(lo * r)
        n_hi = math.floor(hi * r)
        if n_lo > n_hi:
            continue
        found = []
        for res in _residues(d, r):
            start = n_lo + ((res - n_lo) % r)
            found.extend(range(start, n_hi + 1, r))
        for n in sorted(found):
            delta = MukaiVector(r, n, (d * n * n + 1) // r)
            out.append(SphericalClass(delta, HPoint(Fraction(n, r), Fraction(1, r))))
    return out


def rank_levels(ctx: K3Context, i_max: int) -> list[int]:
    """The first ``i_max`` distinct ranks occurring in Delta^+(X)."""
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    levels = []
    r = 0
    while len(levels) < i_max:
        r += 1
        if is_spherical_rank(ctx.d, r):
            levels.append(r)
    return levels


def level_of_rank(ctx: K3Context, r: int) -> int:
    """Index i (1-based) with r_i = r; raises if r is not a spherical rank."""
    if not is_spherical_rank(ctx.d, r):
        raise ValueError(f"{r} is not a spherical rank for d={ctx.d}")
    return sum(1 for k in range(1, r + 1) if is_spherical_rank(ctx.d, k))


class Membership(enum.Enum):
    INSIDE = "inside"
    ON_TOP = "on_top_point"
    OUTSIDE = "outside"


def _excluding_rank(ctx: K3Context, x: Fraction):
    """Rank of the unique spherical class with n/r = x, or None."""
    q, a = x.denominator, x.numerator
    return q if (ctx.d * a * a + 1) % q == 0 else None


def v_membership(ctx: K3Context, p: HPoint) -> Membership:
    """Position of ``p`` relative to the excluded segments.

    ON_TOP is the spherical point itself: outside V for the closed segments
    S(delta), but not on the open boundary segments of the wall components.
    """
    if not isinstance(p.x, Fraction):
        raise TypeError("only rational abscissae are supported")
    q = _excluding_rank(ctx, p.x)
    if q is None:
        return Membership.INSIDE
    top = Fraction(1, q)
    if p.t > top:
        return Membership.INSIDE
    return Membership.ON_TOP if p.t == top else Membership.OUTSIDE


def in_V(ctx: K3Context, p: HPoint) -> bool:
    return v_membership(ctx, p) is Membership.INSIDE


def in_V_level(ctx: K3Context, p: HPoint, i: int) -> bool:
    """Membership in V^(i): ``t > 1/r_i`` minus the segments of ranks r_1..r_{i-1}."""
    levels = rank_levels(ctx, i)
    if p.t <= Fraction(1, levels[-1]):
        return False
    q = _excluding_rank(ctx, p.x)
    if q is None or i == 1 or q > levels[-2]:
        return True
    return p.t > Fraction(1, q)


def enumerate_isotropic(ctx: K3Context, r_max: int, n_max: int) -> list[MukaiVector]:
    """Primitive isotropic ``(r, n, dn^2/r)`` with ``1 <= r <= r_max``, ``|n| <= n_max``."""
    out = []
    for r in range(1, r_max + 1):
        for n in range(-n_max, n_max + 1):
            num = ctx.d * n * n
            if num % r == 0 and math.gcd(r, n, num // r) == 1:
                out.append(MukaiVector(r, n, num // r))
    return out
