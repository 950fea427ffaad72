"""Independent reference computations for the tests.

None of these call into the library's algorithms; they use brute force,
floating point, or sympy instead.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy


def brute_spherical(d: int, r_max: int, lo, hi) -> list[tuple[int, int, int]]:
    """Every (r, n, s) with r s = d n^2 + 1, 1 <= r <= r_max, lo <= n/r <= hi."""
    out = []
    for r in range(1, r_max + 1):
        for n in range(math.floor(lo * r) - 1, math.ceil(hi * r) + 2):
            if not (lo <= Fraction(n, r) <= hi):
                continue
            num = d * n * n + 1
            if num % r == 0:
                out.append((r, n, num // r))
    return sorted(out)


def brute_in_V(d: int, x: Fraction, t: Fraction, r_bound: int) -> bool:
    """x + it/sqrt(d) avoids every closed segment {n/r} x (0, 1/r] with r <= r_bound."""
    for r in range(1, r_bound + 1):
        n = x * r
        if n.denominator != 1:
            continue
        n = int(n)
        if (d * n * n + 1) % r == 0 and t <= Fraction(1, r):
            return False
    return True


def float_point(x, t, d: int) -> complex:
    return complex(float(x), float(t) / math.sqrt(d))


def float_central_charge(z: complex, v, d: int) -> complex:
    r, n, s = v
    return 2 * d * n * z - s - d * r * z * z


def float_reflection_image(delta, z: complex, d: int) -> complex:
    """Push exp(zL) = (1, z, d z^2) through v -> v + <v, delta> delta, read n'/r'."""
    r, n, s = delta
    e = (1, z, d * z * z)
    pair = 2 * d * e[1] * n - e[0] * s - r * e[2]
    img = (e[0] + pair * r, e[1] + pair * n)
    return img[1] / img[0]


def float_moebius(entries, z: complex) -> complex:
    a, b, c, e = (float(v) for v in entries)
    return (a * z + b) / (c * z + e)


def float_hyp_distance(z: complex, w: complex) -> float:
    return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def float_cross_ratio(z1, z2, z3, z4) -> complex:
    return ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3))


_x, _y = sympy.symbols("x y", real=True)


def sympy_wall_poly(vi, vj, d: int) -> dict[tuple[int, int], Fraction]:
    """Coefficients of Im(Z(v_i) conj Z(v_j)) / y as a polynomial in x, y."""
    z = _x + sympy.I * _y

    def charge(v):
        r, n, s = v
        return 2 * d * n * z - s - d * r * z**2

    expr = sympy.expand(sympy.im(sympy.expand(charge(vi) * sympy.conjugate(charge(vj)))) / _y)
    poly = sympy.Poly(expr, _x, _y)
    return {k: Fraction(int(c.p), int(c.q)) for k, c in poly.terms() if c != 0}


def wall_offset_points(A, E, d: int):
    """alpha_E, alpha_A from the four-point formulas, computed from scratch."""
    rA, nA, _ = A
    rE, nE, _ = E
    a, xE = Fraction(nA, rA), Fraction(nE, rE)
    gap = xE - a
    shift = Fraction(1) / (d * rA * rA * gap)
    return a - shift, xE - shift


def naive_reduce(letters):
    """Free reduction by expanding into unit letters and cancelling x x^-1 pairs."""
    units = []
    for gen, e in letters:
        units.extend([(gen, 1 if e > 0 else -1)] * abs(e))
    changed = True
    while changed:
        changed = False
        for i in range(len(units) - 1):
            if units[i][0] == units[i + 1][0] and units[i][1] == -units[i + 1][1]:
                del units[i:i + 2]
                changed = True
                break
    out = []
    for gen, e in units:
        if out and out[-1][0] == gen:
            out[-1] = (gen, out[-1][1] + e)
        else:
            out.append((gen, e))
    return tuple(out)


def float_arc_samples(center: float, radius: float, x_from: float, x_to: float, count: int):
    """Points on the upper semicircle strictly between two abscissae."""
    th0 = math.acos(max(-1.0, min(1.0, (x_from - center) / radius)))
    th1 = math.acos(max(-1.0, min(1.0, (x_to - center) / radius)))
    for k in range(1, count + 1):
        th = th0 + (th1 - th0) * k / count
        yield center + radius * math.cos(th), radius * math.sin(th)


def float_in_region(x: float, y: float, d: int, center_x: float, B: float, slack: float = 1e-9) -> bool:
    if y * y <= 1 / d + slack:
        return True
    return any(math.hypot(x - c, y) <= B / 2 + slack for c in (center_x - B / 2, center_x + B / 2))
