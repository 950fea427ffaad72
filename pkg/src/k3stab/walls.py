"""Walls W(A, E), their marked points and types, the bounded region that
contains all type-II wall segments, the large-volume path, and the disks
D_A obtained by twisting the domain {t > 1}.

Conventions: A is spherical (rank normalized positive), E is primitive
isotropic with positive rank, ``a = n_A/r_A``, ``x_E = n_E/r_E``.  All
predicates are exact; wall arcs are sampled at rational parameters of the
half-angle substitution, so sampled points are carried as ``(x, y^2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BadVector, BadVectors, DegenerateProportional, NonSpherical, NotTypeII
from .exact import as_fraction, floor_sqrt, format_rational
from .halfplane import (
    Geodesic,
    MoebiusMap,
    Semicircle,
    Vertical,
    apply,
    geodesic_from_coefficients,
    twist_moebius,
)
from .lattice import MukaiVector, is_isotropic, is_primitive, is_spherical, twist_on_skyscraper
from .model import HPoint, K3Context
from .spherical import (
    ExcludedSegment,
    associated_point_isotropic,
    enumerate_spherical,
    in_V,
    spherical_point,
)


class WallType(enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    VERTICAL = "Vertical"
    DEGENERATE = "Degenerate"


def _check_pair(A: MukaiVector, E: MukaiVector, ctx: K3Context) -> MukaiVector:
    if not is_spherical(A, ctx):
        raise BadVectors(f"A={A} is not spherical for d={ctx.d}")
    if not is_isotropic(E, ctx) or not is_primitive(E):
        raise BadVectors(f"E={E} is not primitive isotropic for d={ctx.d}")
    if E.r <= 0:
        raise BadVectors(f"E={E} must have positive rank")
    return A.normalized()


def n_AE_sq(A: MukaiVector, E: MukaiVector, x, y_sq, ctx: K3Context) -> Fraction:
    """N_{A,E} as a function of ``x`` and ``y^2``."""
    A = _check_pair(A, E, ctx)
    d = ctx.d
    x = as_fraction(x)
    lam_E = E.n - E.r * x
    lam_A = A.n - A.r * x
    gap = Fraction(E.n, E.r) - Fraction(A.n, A.r)
    return d * (A.r * E.n - E.r * A.n) * y_sq + d * lam_E * lam_A * gap - lam_E / A.r


def n_AE(A: MukaiVector, E: MukaiVector, p: HPoint, ctx: K3Context) -> Fraction:
    """Vanishes exactly on W(A, E).  Equals Im(Z(E) conj Z(A)) / (2 d y)."""
    return n_AE_sq(A, E, p.x, p.y_squared(ctx), ctx)


# -- generic walls Im Z(v_i) conj Z(v_j) = 0 ---------------------------------

Poly = dict  # {(deg_x, deg_y): Fraction}


def _padd(*polys: Poly) -> Poly:
    out: Poly = {}
    for p in polys:
        for k, c in p.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c != 0}


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c != 0}


def _pneg(p: Poly) -> Poly:
    return {k: -c for k, c in p.items()}


def _central_charge_poly(v: MukaiVector, ctx: K3Context) -> tuple[Poly, Poly]:
    """Real and imaginary parts of Z(v) = 2dnz - s - drz^2 as polynomials in x, y."""
    d = ctx.d
    re = _padd({(1, 0): Fraction(2 * d * v.n), (0, 0): Fraction(-v.s)},
               {(2, 0): Fraction(-d * v.r), (0, 2): Fraction(d * v.r)})
    im = _padd({(0, 1): Fraction(2 * d * v.n)}, {(1, 1): Fraction(-2 * d * v.r)})
    return re, im


def wall_polynomial(v_i: MukaiVector, v_j: MukaiVector, ctx: K3Context) -> Poly:
    """``Im(Z(v_i) conj Z(v_j)) / y`` as a polynomial in x and y."""
    re_i, im_i = _central_charge_poly(v_i, ctx)
    re_j, im_j = _central_charge_poly(v_j, ctx)
    full = _padd(_pmul(im_i, re_j), _pneg(_pmul(re_i, im_j)))
    if any(j == 0 for (_, j) in full):
        raise AssertionError("Im Z Zbar must be divisible by y")
    return {(i, j - 1): c for (i, j), c in full.items()}


def is_geodesic_polynomial(poly: Poly) -> bool:
    """``A(x^2 + y^2) + Bx + C`` with (A, B) != 0: no xy term, equal square terms."""
    allowed = {(2, 0), (0, 2), (1, 0), (0, 0)}
    if not set(poly) <= allowed:
        return False
    if poly.get((2, 0), 0) != poly.get((0, 2), 0):
        return False
    return poly.get((2, 0), 0) != 0 or poly.get((1, 0), 0) != 0


def wall_pair(v_i: MukaiVector, v_j: MukaiVector, ctx: K3Context) -> Geodesic:
    """The locus Im Z(v_i) conj Z(v_j) = 0 for arbitrary lattice vectors."""
    poly = wall_polynomial(v_i, v_j, ctx)
    if not poly:
        raise DegenerateProportional(f"Z({v_i}) and Z({v_j}) are everywhere proportional")
    if not is_geodesic_polynomial(poly):
        raise DegenerateProportional(f"wall of {v_i}, {v_j} does not meet H in a geodesic")
    return geodesic_from_coefficients(poly.get((2, 0), 0), poly.get((1, 0), 0), poly.get((0, 0), 0))


# -- the (spherical, isotropic) walls ---------------------------------------

@dataclass(frozen=True)
class WallDescriptor:
    A: MukaiVector
    E: MukaiVector
    geodesic: Geodesic
    x_A: Fraction
    x_E: Fraction
    alpha_E: Optional[Fraction]
    alpha_A: Optional[Fraction]
    p_A: HPoint
    q: Optional[HPoint]
    wall_type: WallType

    @property
    def gap(self) -> Fraction:
        return self.x_E - self.x_A

    def marked_points(self) -> list[tuple[Fraction, Fraction]]:
        """The marked points as ``(x, t)``; base points have t = 0."""
        pts = [(self.x_E, Fraction(0)), (self.p_A.x, self.p_A.t)]
        if self.alpha_E is not None:
            pts.insert(0, (self.alpha_E, Fraction(0)))
            pts.append((self.q.x, self.q.t))
        return pts

    def to_json(self) -> dict:
        out = {
            "A": self.A.to_json(),
            "E": self.E.to_json(),
            "type": self.wall_type.value,
            "geodesic": self.geodesic.to_json(),
            "x_A": format_rational(self.x_A),
            "x_E": format_rational(self.x_E),
            "p_A": self.p_A.to_json(),
        }
        if self.alpha_E is not None:
            out["alpha_E"] = format_rational(self.alpha_E)
            out["alpha_A"] = format_rational(self.alpha_A)
            out["q"] = self.q.to_json()
        return out


def classify(A: MukaiVector, E: MukaiVector, ctx: K3Context) -> WallType:
    """Type from the gap ``x_E - a``: type I iff gap^2 >= 1/(d r_A^2)."""
    A = _check_pair(A, E, ctx)
    gap = Fraction(E.n, E.r) - Fraction(A.n, A.r)
    if gap == 0:
        return WallType.VERTICAL
    if gap * gap >= Fraction(1, ctx.d * A.r * A.r):
        return WallType.TYPE_I
    return WallType.TYPE_II


def wall(A: MukaiVector, E: MukaiVector, ctx: K3Context) -> WallDescriptor:
    A = _check_pair(A, E, ctx)
    x_A, x_E = Fraction(A.n, A.r), Fraction(E.n, E.r)
    p_A = spherical_point(A, ctx)
    wtype = classify(A, E, ctx)
    if wtype is WallType.VERTICAL:
        return WallDescriptor(A, E, Vertical(x_E), x_A, x_E, None, None, p_A, None, wtype)
    gap = x_E - x_A
    shift = 1 / (ctx.d * A.r * A.r * gap)
    alpha_E = x_A - shift
    alpha_A = x_E - shift
    center = (alpha_E + x_E) / 2
    geo = Semicircle(center, ((x_E - alpha_E) / 2) ** 2)
    q = HPoint(alpha_A, p_A.t)
    return WallDescriptor(A, E, geo, x_A, x_E, alpha_E, alpha_A, p_A, q, wtype)


def classify_by_ordering(w: WallDescriptor) -> Optional[WallType]:
    """Type read off from the order of alpha_E, a, alpha_A, x_E alone.

    Returns None when no admissible ordering holds (which would falsify the
    classification).
    """
    a, xe = w.x_A, w.x_E
    if a == xe:
        return WallType.VERTICAL
    ae, aa = w.alpha_E, w.alpha_A
    if xe < a:  # mirror image
        a, xe, ae, aa = -a, -xe, -ae, -aa
    if ae < a <= aa < xe:
        return WallType.TYPE_I
    if ae < aa < a < xe:
        return WallType.TYPE_II
    return None


def derived_B(r: int, ctx: K3Context) -> Fraction:
    return Fraction(1, r) + Fraction(r, ctx.d)


def printed_B(r: int, ctx: K3Context) -> Fraction:
    return Fraction(1, ctx.d) + Fraction(r, ctx.d)


def diameter_and_bound(A: MukaiVector, E: MukaiVector, ctx: K3Context) -> tuple[Fraction, Fraction, bool]:
    """Diameter |x_E - alpha_E| of a type-II wall and the bound 1/r_E + r_E/d."""
    w = wall(A, E, ctx)
    if w.wall_type is not WallType.TYPE_II:
        raise NotTypeII(f"wall of A={A}, E={E} is {w.wall_type.value}")
    diameter = abs(w.x_E - w.alpha_E)
    bound = derived_B(E.r, ctx)
    return diameter, bound, diameter <= bound


@dataclass(frozen=True)
class BoundaryComponent:
    """Open segment from the base point (x, 0) up to p(A), both excluded."""

    segment: ExcludedSegment
    base_x: Fraction
    top: HPoint


def boundary_component(A: MukaiVector, ctx: K3Context) -> BoundaryComponent:
    if not is_spherical(A, ctx):
        raise NonSpherical(f"{A} is not spherical for d={ctx.d}")
    A = A.normalized()
    top = spherical_point(A, ctx)
    base = associated_point_isotropic(twist_on_skyscraper(A, ctx), ctx)
    return BoundaryComponent(ExcludedSegment(top.x, top.t, top_closed=False), base, top)


# -- the region R and the large volume path ---------------------------------

@dataclass(frozen=True)
class RegionR:
    """Strip ``t <= strip_top_t`` union two disks of diameter ``B`` tangent at ``center_x``.

    Disks live in the Euclidean (x, y = t/sqrt(d)) plane.
    """

    d: int
    center_x: Fraction
    B: Fraction
    strip_top_t: Fraction = Fraction(1)

    @property
    def half_diameter(self) -> Fraction:
        return self.B / 2

    def disk_centers(self) -> tuple[Fraction, Fraction]:
        return (self.center_x - self.B / 2, self.center_x + self.B / 2)

    def contains_sq(self, x, y_sq) -> bool:
        if self.d * y_sq <= self.strip_top_t**2:
            return True
        rad_sq = self.B * self.B / 4
        return any((x - c) ** 2 + y_sq <= rad_sq for c in self.disk_centers())

    def contains(self, p: HPoint) -> bool:
        return self.contains_sq(p.x, p.t * p.t / self.d)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "strip_top_t": format_rational(self.strip_top_t),
            "center_x": format_rational(self.center_x),
            "B": format_rational(self.B),
            "half_diameter": format_rational(self.half_diameter),
        }


def _check_v0(v0: MukaiVector, ctx: K3Context) -> None:
    if not (is_isotropic(v0, ctx) and is_primitive(v0) and v0.r > 0):
        raise BadVector(f"v0={v0} must be primitive isotropic with r > 0 (d={ctx.d})")


def region_R(v0: MukaiVector, ctx: K3Context, paper_printed_B: bool = False) -> RegionR:
    _check_v0(v0, ctx)
    B = printed_B(v0.r, ctx) if paper_printed_B else derived_B(v0.r, ctx)
    return RegionR(ctx.d, Fraction(v0.n, v0.r), B)


def region_contains(region: RegionR, p: HPoint) -> bool:
    return region.contains(p)


def _segment_samples(w: WallDescriptor, ctx: K3Context, samples: int):
    """Rational points ``(x, y^2)`` on the arc from the base (alpha_E, 0) to p(A)."""
    y_sq_A = w.p_A.y_squared(ctx)
    if w.wall_type is WallType.VERTICAL:
        for k in range(1, samples + 1):
            yield w.x_A, y_sq_A * Fraction(k * k, samples * samples)
        return
    geo = w.geodesic
    c, R = geo.center, abs(w.x_E - w.alpha_E) / 2
    # base is the left end when alpha_E < x_E; parameter s = tan of the half angle
    # measured from the base, so x = c -+ R (1 - s^2)/(1 + s^2), y = 2Rs/(1 + s^2).
    sign = -1 if w.alpha_E < w.x_E else 1
    s_sq_A = y_sq_A / (R + sign * (w.x_A - c)) ** 2
    s_top = floor_sqrt(s_sq_A)
    for k in range(1, samples + 1):
        s = s_top * Fraction(k, samples)
        den = 1 + s * s
        x = c + sign * R * (1 - s * s) / den
        y = 2 * R * s / den
        yield x, y * y
    yield w.x_A, y_sq_A


def wall_certified(w: WallDescriptor, region: RegionR, ctx: K3Context) -> bool:
    """Exact proof that the whole segment base -> p(A) lies in ``region``.

    Type I and vertical segments rise monotonically to p(A), whose height is
    at most the strip top.  Type II circles must sit inside one of the disks.
    """
    if w.wall_type is not WallType.TYPE_II:
        return w.p_A.t <= region.strip_top_t
    c, R = w.geodesic.center, abs(w.x_E - w.alpha_E) / 2
    half = region.half_diameter
    return any(abs(c - dc) + R <= half for dc in region.disk_centers())


@dataclass
class ContainmentReport:
    v0: MukaiVector
    d: int
    B_used: Fraction
    B_derived: Fraction
    B_printed: Fraction
    population: int = 0
    samples_checked: int = 0
    certified: int = 0
    violations: list = field(default_factory=list)

    @property
    def printed_B_smaller(self) -> bool:
        return self.B_printed < self.B_derived

    def to_json(self) -> dict:
        return {
            "v0": self.v0.to_json(),
            "d": self.d,
            "B_used": format_rational(self.B_used),
            "B_derived": format_rational(self.B_derived),
            "B_printed": format_rational(self.B_printed),
            "printed_B_smaller": self.printed_B_smaller,
            "population": self.population,
            "samples_checked": self.samples_checked,
            "certified": self.certified,
            "violations": self.violations,
        }


def wall_containment_check(
    v0: MukaiVector,
    ctx: K3Context,
    r_A_max: int,
    samples: int = 64,
    paper_printed_B: bool = False,
    window=None,
) -> ContainmentReport:
    """Sample every wall segment p(A) -> p(T_A(v0)) and test membership in R.

    ``window`` bounds n_A/r_A; by default it is x_E +- (B + 1), which
    contains every type-II wall (those have |a - x_E| < 1/sqrt(d)).
    """
    region = region_R(v0, ctx, paper_printed_B)
    B_der = derived_B(v0.r, ctx)
    rep = ContainmentReport(v0, ctx.d, region.B, B_der, printed_B(v0.r, ctx))
    x_E = Fraction(v0.n, v0.r)
    if window is None:
        width = max(B_der, region.B) + 1
        window = (x_E - width, x_E + width)
    for sc in enumerate_spherical(ctx, r_A_max, *window):
        w = wall(sc.delta, v0, ctx)
        rep.population += 1
        if wall_certified(w, region, ctx):
            rep.certified += 1
        bad = None
        for x, y_sq in _segment_samples(w, ctx, samples):
            rep.samples_checked += 1
            if not region.contains_sq(x, y_sq):
                bad = (x, y_sq)
                break
        if bad is not None:
            rep.violations.append({
                "A": sc.delta.to_json(),
                "type": w.wall_type.value,
                "x": format_rational(bad[0]),
                "y_sq": format_rational(bad[1]),
            })
    return rep


@dataclass(frozen=True)
class LargeVolumePath:
    base: HPoint
    ray_x: Fraction
    ray_t_min: Fraction
    certificate: bool
    region: RegionR

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "ray": {"x": format_rational(self.ray_x), "t_min": format_rational(self.ray_t_min)},
            "certificate": self.certificate,
            "region": self.region.to_json(),
        }


def large_volume_path(v0: MukaiVector, ctx: K3Context) -> LargeVolumePath:
    """Base point left of ``n/r - B`` at height t = 2, and a disjointness proof.

    The vertical ray above the base misses the strip (t > 1) and both disks
    (its horizontal distance to each disk center exceeds B/2), for every t.
    """
    region = region_R(v0, ctx)
    cutoff = region.center_x - region.B
    a = Fraction(math.ceil(cutoff) - 1)
    base = HPoint(a, 2)
    half_sq = region.half_diameter**2
    clear_of_disks = all((a - c) ** 2 > half_sq for c in region.disk_centers())
    above_strip = base.t > region.strip_top_t
    cert = clear_of_disks and above_strip and a < cutoff and in_V(ctx, base)
    return LargeVolumePath(base, a, base.t, cert, region)


# -- the disks D_A ------------------------------------------------------------

@dataclass(frozen=True)
class DiskD:
    """Open disk tangent to the real axis at ``tangent_x`` with top height ``top_t``.

    In (x, y) coordinates: center (tangent_x, y_top/2), radius y_top/2, where
    y_top = top_t/sqrt(d).
    """

    d: int
    tangent_x: Fraction
    top_t: Fraction

    def _power(self, x, t) -> Fraction:
        half = self.top_t / 2
        return (x - self.tangent_x) ** 2 + ((t - half) ** 2 - half * half) / self.d

    def contains(self, p: HPoint) -> bool:
        return self._power(p.x, p.t) < 0

    def on_boundary(self, p: HPoint) -> bool:
        return self._power(p.x, p.t) == 0

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "tangent_x": format_rational(self.tangent_x),
            "top_t": format_rational(self.top_t),
        }


def _circle_through(pts, d: int):
    """``(cx, ct, rho)`` with (x - cx)^2 + (t - ct)^2/d = rho through three points."""
    (x1, t1), (x2, t2), (x3, t3) = pts

    def row(xa, ta, xb, tb):
        # difference of the two circle equations is linear in (cx, ct)
        return (2 * (xb - xa), 2 * (tb - ta) / d, xb * xb - xa * xa + (tb * tb - ta * ta) / d)

    a1, b1, c1 = row(x1, t1, x2, t2)
    a2, b2, c2 = row(x1, t1, x3, t3)
    det = a1 * b2 - a2 * b1
    if det == 0:
        raise ValueError("points are collinear")
    cx = (c1 * b2 - c2 * b1) / det
    ct = (a1 * c2 - a2 * c1) / det
    rho = (x1 - cx) ** 2 + (t1 - ct) ** 2 / d
    return cx, ct, rho


def twist_image_of_line(m: MoebiusMap, ctx: K3Context):
    """Circle ``(cx, ct, rho)`` through the images of three points of t = 1."""
    pts = [apply(m, HPoint(x, 1), ctx) for x in (0, 1, 2)]
    return _circle_through([(p.x, p.t) for p in pts], ctx.d)


def disk_D(A: MukaiVector, ctx: K3Context) -> DiskD:
    """D_A as the image of {t > 1} under the twist map of A."""
    if not is_spherical(A, ctx):
        raise NonSpherical(f"{A} is not spherical for d={ctx.d}")
    A = A.normalized()
    m = twist_moebius(A, ctx)
    cx, ct, rho = twist_image_of_line(m, ctx)
    if ct * ct / ctx.d != rho:
        raise AssertionError("twist image of t = 1 is not tangent to the real axis")
    disk = DiskD(ctx.d, cx, 2 * ct)
    assert disk.contains(apply(m, HPoint(cx, 2), ctx))
    return disk


def printed_disk(A: MukaiVector, ctx: K3Context) -> DiskD:
    """The disk with radius^2 = 1/(4 d r_A^2), top at t = 1/r_A."""
    if not is_spherical(A, ctx):
        raise NonSpherical(f"{A} is not spherical for d={ctx.d}")
    A = A.normalized()
    return DiskD(ctx.d, Fraction(A.n, A.r), Fraction(1, A.r))


class DiskRegion(enum.Enum):
    IN_D = "in_D"
    IN_D_PLUS = "in_D_plus"
    IN_D_PLUS_DUAL = "in_D_plus_dual"
    OUTSIDE = "outside"


def disk_membership(A: MukaiVector, p: HPoint, ctx: K3Context, paper_printed_disk: bool = False) -> DiskRegion:
    disk = printed_disk(A, ctx) if paper_printed_disk else disk_D(A, ctx)
    a = disk.tangent_x
    if disk.contains(p):
        if p.x < a and in_V(ctx, p):
            return DiskRegion.IN_D_PLUS
        return DiskRegion.IN_D
    if p.t > 1 and p.x > a:
        return DiskRegion.IN_D_PLUS_DUAL
    return DiskRegion.OUTSIDE


@dataclass
class DiskScan:
    A: MukaiVector
    disk: DiskD
    r_bound: int
    scanned: int = 0
    inside: list = field(default_factory=list)
    on_boundary: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.inside

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "disk": self.disk.to_json(),
            "r_bound": self.r_bound,
            "scanned": self.scanned,
            "inside": [v.to_json() for v in self.inside],
            "on_boundary": [v.to_json() for v in self.on_boundary],
            "no_spherical_inside": self.ok,
        }


def scan_disk(A: MukaiVector, ctx: K3Context, r_bound: int, paper_printed_disk: bool = False) -> DiskScan:
    """Spherical points of rank <= r_bound inside / on the boundary of the disk."""
    disk = printed_disk(A, ctx) if paper_printed_disk else disk_D(A, ctx)
    scan = DiskScan(A.normalized(), disk, r_bound)
    # the disk's x-extent is top_t/(2 sqrt(d)) <= top_t on each side
    lo, hi = disk.tangent_x - disk.top_t, disk.tangent_x + disk.top_t
    for sc in enumerate_spherical(ctx, r_bound, lo, hi):
        scan.scanned += 1
        if disk.contains(sc.point):
            scan.inside.append(sc.delta)
        elif disk.on_boundary(sc.point):
            scan.on_boundary.append(sc.delta)
    return scan


def no_spherical_inside(A: MukaiVector, ctx: K3Context, r_bound: int, paper_printed_disk: bool = False) -> bool:
    return scan_disk(A, ctx, r_bound, paper_printed_disk).ok


def wall_population(ctx: K3Context, r_A_max: int, r_E_max: int, n_E_max: int, reach=2):
    """Pairs (A, E): E primitive isotropic in the box, A spherical with
    ``|n_A/r_A - x_E| <= reach``.  Every type-II pair has gap below 1."""
    from .spherical import enumerate_isotropic

    for E in enumerate_isotropic(ctx, r_E_max, n_E_max):
        x_E = Fraction(E.n, E.r)
        for sc in enumerate_spherical(ctx, r_A_max, x_E - reach, x_E + reach):
            yield sc.delta, E
