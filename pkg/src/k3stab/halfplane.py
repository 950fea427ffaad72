"""Hyperbolic geometry of the upper half plane in the rational model, and the
Moebius maps induced by isometries of the Mukai lattice.

Two independent routes produce the induced map of a lattice isometry:

* :func:`induced_map_oracle` pushes ``exp(zL)`` through the lattice map as a
  vector of polynomials in ``z`` and reads off ``z' = n-part / r-part`` after
  cancelling the common factor;
* :func:`lemma32_closed_form` / :func:`twist_moebius` evaluate the closed
  formula ``z -> n1/r1 - 1/(d*sqrt(r1*r2)*(z - n2/r2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    CoincidentPoints,
    NegativeRankProduct,
    NonSpherical,
    NonSquareRankProduct,
    NotAnIsometry,
    NotIsotropic,
    NotMoebius,
    OrientationReversed,
    RankZero,
)
from .exact import ModelComplex, as_fraction, format_rational
from .lattice import LatticeMap, MukaiVector, is_isotropic, is_spherical
from .model import HPoint, K3Context

__all__ = [
    "HPoint",
    "MoebiusMap",
    "Vertical",
    "Semicircle",
    "Geodesic",
    "apply",
    "hyp_distance",
    "cosh_distance",
    "geodesic_through",
    "map_geodesic",
    "cross_ratio",
    "translation",
    "induced_map_oracle",
    "twist_moebius",
    "lemma32_closed_form",
]


@dataclass(frozen=True)
class MoebiusMap:
    """``z -> (a z + b) / (c z + e)`` with positive determinant.

    Stored scaled so that the first nonzero entry of ``(a, b, c, e)`` is 1;
    two maps are equal exactly when they act identically on H.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    e: Fraction

    def __post_init__(self):
        ents = [as_fraction(v) for v in (self.a, self.b, self.c, self.e)]
        det = ents[0] * ents[3] - ents[1] * ents[2]
        if det <= 0:
            raise ValueError(f"Moebius map needs positive determinant, got {det}")
        lead = next(v for v in ents if v != 0)
        for name, v in zip("abce", ents):
            object.__setattr__(self, name, v / lead)

    @property
    def det(self) -> Fraction:
        return self.a * self.e - self.b * self.c

    @property
    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.e)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    @property
    def translation_shift(self):
        """``k`` if this is ``z -> z + k``, else None."""
        if self.a == 1 and self.c == 0 and self.e == 1:
            return self.b
        return None

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Composition ``(self @ other)(z) = self(other(z))``."""
        a, b, c, e = self.entries
        p, q, r, s = other.entries
        return MoebiusMap(a * p + b * r, a * q + b * s, c * p + e * r, c * q + e * s)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.e, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "MoebiusMap":
        if k < 0:
            return self.inverse() ** (-k)
        out = MoebiusMap.identity()
        for _ in range(k):
            out = self @ out
        return out

    def __call__(self, z):
        if isinstance(z, ModelComplex):
            return (self.a * z + self.b) / (self.c * z + self.e)
        return (float(self.a) * z + float(self.b)) / (float(self.c) * z + float(self.e))

    def fixed_point(self, ctx: K3Context) -> HPoint:
        """The fixed point in H of an elliptic map, when it lies in the rational model."""
        a, b, c, e = self.entries
        if c == 0:
            raise ValueError("no fixed point in H: map fixes infinity")
        disc = (a - e) ** 2 + 4 * b * c
        if disc >= 0:
            raise ValueError("map is not elliptic")
        t_sq = ctx.d * (-disc) / (4 * c * c)
        t = _rational_sqrt(t_sq)
        if t is None:
            raise ValueError("fixed point is outside the rational model")
        return HPoint((a - e) / (2 * c), t)

    def to_json(self) -> dict:
        return {"matrix": [format_rational(v) for v in self.entries]}

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(*self.entries)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, m = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and m * m == q.denominator:
        return Fraction(n, m)
    return None


def translation(k) -> MoebiusMap:
    return MoebiusMap(1, as_fraction(k), 0, 1)


def apply(m: MoebiusMap, p: HPoint, ctx: K3Context) -> HPoint:
    """Image of ``p``; stays in the rational model for rational matrices."""
    a, b, c, e = m.entries
    x, t, d = p.x, p.t, ctx.d
    re_den = c * x + e
    norm = re_den * re_den + c * c * t * t / d
    x_new = ((a * x + b) * re_den + a * c * t * t / d) / norm
    t_new = m.det * t / norm
    return HPoint(x_new, t_new)


def cosh_distance(p: HPoint, q: HPoint, ctx: K3Context) -> Fraction:
    """cosh of the hyperbolic distance; exact in the rational model."""
    dx, dt = p.x - q.x, p.t - q.t
    return 1 + (ctx.d * dx * dx + dt * dt) / (2 * p.t * q.t)


def hyp_distance(p: HPoint, q: HPoint, ctx: K3Context) -> float:
    """Distance for ds^2 = (dx^2 + dy^2)/y^2 with y = t/sqrt(d)."""
    dx, dt = p.x - q.x, p.t - q.t
    ratio = (ctx.d * dx * dx + dt * dt) / (4 * p.t * q.t)
    # 2*asinh(sqrt(.)) is the well-conditioned form of arccosh(1 + 2*ratio)
    return 2.0 * math.asinh(math.sqrt(ratio))


def cross_ratio(z1, z2, z3, z4):
    return ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3))


@dataclass(frozen=True)
class Vertical:
    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))

    def contains(self, p: HPoint, ctx: K3Context) -> bool:
        return p.x == self.x

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(0), Fraction(1), -self.x)

    def to_json(self) -> dict:
        return {"kind": "vertical", "x": format_rational(self.x)}


@dataclass(frozen=True)
class Semicircle:
    """``(x - center)^2 + t^2/d = radius_sq``."""

    center: Fraction
    radius_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        object.__setattr__(self, "radius_sq", as_fraction(self.radius_sq))
        if self.radius_sq <= 0:
            raise ValueError("radius_sq must be positive")

    def contains(self, p: HPoint, ctx: K3Context) -> bool:
        return self.contains_sq(p.x, p.t * p.t / ctx.d)

    def contains_sq(self, x, y_sq) -> bool:
        return (x - self.center) ** 2 + y_sq == self.radius_sq

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(1), -2 * self.center, self.center**2 - self.radius_sq)

    def to_json(self) -> dict:
        return {
            "kind": "semicircle",
            "center": format_rational(self.center),
            "radius_sq": format_rational(self.radius_sq),
        }


Geodesic = Union[Vertical, Semicircle]


def geodesic_from_coefficients(A, B, C) -> Geodesic:
    """Geodesic ``A(x^2 + y^2) + B x + C = 0`` (y = t/sqrt(d))."""
    A, B, C = (as_fraction(v) for v in (A, B, C))
    if A == 0:
        if B == 0:
            raise ValueError("equation does not define a geodesic")
        return Vertical(-C / B)
    center = -B / (2 * A)
    return Semicircle(center, center * center - C / A)


def geodesic_through(p: HPoint, q: HPoint, ctx: K3Context) -> Geodesic:
    if p == q:
        raise CoincidentPoints(f"{p} == {q}")
    if p.x == q.x:
        return Vertical(p.x)
    d = ctx.d
    center = (q.x**2 - p.x**2 + (q.t**2 - p.t**2) / d) / (2 * (q.x - p.x))
    return Semicircle(center, (p.x - center) ** 2 + p.t**2 / d)


def map_geodesic(m: MoebiusMap, g: Geodesic) -> Geodesic:
    """Image of a geodesic, by transforming its Hermitian form with m^-1."""
    A, B, C = g.coefficients()
    h = ((A, B / 2), (B / 2, C))
    inv = m.inverse().entries
    minv = ((inv[0], inv[1]), (inv[2], inv[3]))
    # H' = minv^T H minv
    hm = [[sum(h[i][k] * minv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    hp = [[sum(minv[k][i] * hm[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return geodesic_from_coefficients(hp[0][0], 2 * hp[0][1], hp[1][1])


# -- polynomial helpers for the oracle (coefficients low -> high degree) -----

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod(num, den):
    num, den = _trim(num), _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    rem = list(num)
    while len(rem) >= len(den) and rem:
        shift = len(rem) - len(den)
        coef = rem[-1] / den[-1]
        quot[shift] = coef
        for i, c in enumerate(den):
            rem[shift + i] -= coef * c
        rem = _trim(rem)
    return _trim(quot), rem


def _gcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        _, r = _divmod(p, q)
        p, q = q, r
    if not p:
        return [Fraction(1)]
    return [c / p[-1] for c in p]


def induced_map_oracle(psi: LatticeMap, ctx: K3Context) -> MoebiusMap:
    """Map ``z -> z'`` with ``psi(exp(zL)) = lambda * exp(z'L)``.

    ``psi(exp(zL))`` is computed as a triple of polynomials in ``z``;
    ``z'`` is the ratio of the L-component to the rank component, reduced by
    their gcd.  A translation is returned when psi fixes the point class up to
    sign.
    """
    if not psi.is_isometry(ctx):
        raise NotAnIsometry("lattice map does not preserve the Mukai pairing")
    d = ctx.d
    imgs = (psi.e_r, psi.e_n, psi.e_s)
    # exp(zL) = (1, z, d z^2), so component k of psi(exp) is sum_j img_j.k * z^j (*d for j=2)
    weights = (1, 1, d)
    rank_poly = [Fraction(img.r * w) for img, w in zip(imgs, weights)]
    line_poly = [Fraction(img.n * w) for img, w in zip(imgs, weights)]
    if not _trim(rank_poly):
        raise NotMoebius("rank component of psi(exp(zL)) vanishes identically")
    g = _gcd(rank_poly, line_poly)
    den, rem1 = _divmod(rank_poly, g)
    num, rem2 = _divmod(line_poly, g)
    assert not rem1 and not rem2
    if len(den) > 2 or len(num) > 2:
        raise NotMoebius("normalized image is not a linear fractional transformation")
    num = num + [Fraction(0)] * (2 - len(num))
    den = den + [Fraction(0)] * (2 - len(den))
    a, b, c, e = num[1], num[0], den[1], den[0]
    det = a * e - b * c
    if det < 0:
        raise OrientationReversed("induced map reverses the orientation of H")
    if det == 0:
        raise NotMoebius("induced map is constant")
    return MoebiusMap(a, b, c, e)


def lemma32_closed_form(v_fwd: MukaiVector, v_bwd: MukaiVector, ctx: K3Context) -> MoebiusMap:
    """Closed form of the induced map from the images of the point classes.

    ``v_fwd = v(Phi(O_p))`` and ``v_bwd = v(Phi^-1(O_p))``; the map is
    ``z -> n1/r1 - 1/(d*sqrt(r1*r2)*(z - n2/r2))``.
    """
    for v in (v_fwd, v_bwd):
        if not is_isotropic(v, ctx):
            raise NotIsotropic(f"{v} is not isotropic for d={ctx.d}")
    r1, r2 = v_fwd.r, v_bwd.r
    if r1 == 0 or r2 == 0:
        raise RankZero("rank-zero point image: the induced map is a translation")
    if r1 * r2 < 0:
        raise NegativeRankProduct(f"r1*r2 = {r1 * r2} < 0")
    rho = math.isqrt(r1 * r2)
    if rho * rho != r1 * r2:
        raise NonSquareRankProduct(f"r1*r2 = {r1 * r2} is not a perfect square")
    a1, a2 = Fraction(v_fwd.n, r1), Fraction(v_bwd.n, r2)
    k = ctx.d * rho
    return MoebiusMap(a1 * k, -a1 * a2 * k - 1, k, -a2 * k)


def twist_moebius(delta: MukaiVector, ctx: K3Context) -> MoebiusMap:
    """Induced map of the spherical twist: ``z -> a - 1/(d r^2 (z - a))``, a = n/r."""
    if not is_spherical(delta, ctx):
        raise NonSpherical(f"{delta} is not spherical for d={ctx.d}")
    delta = delta.normalized()
    a = Fraction(delta.n, delta.r)
    k = ctx.d * delta.r * delta.r
    return MoebiusMap(a * k, -a * a * k - 1, k, -a * k)
