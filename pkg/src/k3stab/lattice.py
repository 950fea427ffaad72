"""Arithmetic in the numerical lattice N(X) = Z + ZL + Z with the Mukai pairing.

A vector ``(r, n, s)`` stands for ``r + nL + s``.  With ``L^2 = 2d`` the
pairing is ``<u, v> = 2d*n_u*n_v - r_u*s_v - r_v*s_u``.  Vectors carry no
degree; anything that needs the pairing takes a :class:`K3Context`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import NonSphericalReflection
from .exact import ModelComplex
from .model import HPoint, K3Context

__all__ = [
    "K3Context",
    "MukaiVector",
    "ComplexClass",
    "LatticeMap",
    "pairing",
    "square",
    "is_spherical",
    "is_isotropic",
    "is_primitive",
    "reflect",
    "twist_on_skyscraper",
    "exp_class",
    "complex_pairing",
    "central_charge",
    "central_charge_key",
    "SKYSCRAPER",
]


@dataclass(frozen=True, order=True)
class MukaiVector:
    r: int
    n: int
    s: int

    def __post_init__(self):
        for name in ("r", "n", "s"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int):
                raise TypeError(f"MukaiVector.{name} must be an int, got {val!r}")

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.n + other.n, self.s + other.s)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.n - other.n, self.s - other.s)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, -self.n, -self.s)

    def scale(self, k: int) -> "MukaiVector":
        return MukaiVector(k * self.r, k * self.n, k * self.s)

    def normalized(self) -> "MukaiVector":
        """Sign-normalize so that the rank is positive (p(delta) = p(-delta))."""
        return -self if self.r < 0 else self

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.n, self.s)

    def to_json(self) -> list[int]:
        return [self.r, self.n, self.s]

    @classmethod
    def parse(cls, text: str) -> "MukaiVector":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise ValueError(f"expected 'r,n,s', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self):
        return f"({self.r},{self.n},{self.s})"


SKYSCRAPER = MukaiVector(0, 0, 1)

Scalar = Union[ModelComplex, complex, Fraction, int]


@dataclass(frozen=True)
class ComplexClass:
    """A complexified Mukai vector.

    Components are :class:`ModelComplex` when the class lives in the rational
    model; otherwise they are Python complex numbers and ``exact`` is False.
    """

    r: Scalar
    n: Scalar
    s: Scalar

    @property
    def exact(self) -> bool:
        return all(not isinstance(c, (complex, float)) for c in (self.r, self.n, self.s))

    def conjugate(self) -> "ComplexClass":
        return ComplexClass(*(c.conjugate() for c in (self.r, self.n, self.s)))


def pairing(u, v, ctx: K3Context):
    """Mukai pairing; works for integer vectors and complexified classes alike."""
    return 2 * ctx.d * u.n * v.n - u.r * v.s - v.r * u.s


complex_pairing = pairing


def square(v: MukaiVector, ctx: K3Context) -> int:
    return pairing(v, v, ctx)


def is_spherical(v: MukaiVector, ctx: K3Context) -> bool:
    return v.r * v.s == ctx.d * v.n * v.n + 1


def is_isotropic(v: MukaiVector, ctx: K3Context) -> bool:
    return v.r * v.s == ctx.d * v.n * v.n


def is_primitive(v: MukaiVector) -> bool:
    return math.gcd(v.r, v.n, v.s) == 1


def _require_spherical(delta: MukaiVector, ctx: K3Context) -> None:
    if not is_spherical(delta, ctx):
        raise NonSphericalReflection(
            f"{delta} has square {square(delta, ctx)} != -2 for d={ctx.d}"
        )


def reflect(v: MukaiVector, delta: MukaiVector, ctx: K3Context) -> MukaiVector:
    """Cohomological action of the spherical twist: ``v + <v, delta> delta``."""
    _require_spherical(delta, ctx)
    return v + delta.scale(pairing(v, delta, ctx))


def twist_on_skyscraper(delta: MukaiVector, ctx: K3Context) -> MukaiVector:
    """Mukai vector of T_A(O_x), i.e. ``(0,0,1) - r*delta``."""
    _require_spherical(delta, ctx)
    r, n, s = delta.as_tuple()
    out = MukaiVector(-r * r, -r * n, 1 - r * s)
    assert is_isotropic(out, ctx), out
    return out


def _as_scalar(z, ctx: K3Context):
    if isinstance(z, HPoint):
        return z.as_complex(ctx)
    if isinstance(z, ModelComplex):
        if z.d != ctx.d:
            raise ValueError(f"point built for d={z.d}, context has d={ctx.d}")
        return z
    if isinstance(z, (complex, float, int)):
        return complex(z)
    raise TypeError(f"cannot use {type(z).__name__} as a point of H")


def exp_class(z, ctx: K3Context) -> ComplexClass:
    """``exp(zL) = 1 + zL + z^2 L^2/2``, i.e. the triple ``(1, z, d z^2)``."""
    w = _as_scalar(z, ctx)
    one = ModelComplex(1, 0, ctx.d) if isinstance(w, ModelComplex) else complex(1)
    return ComplexClass(one, w, ctx.d * w * w)


def central_charge(z, v: MukaiVector, ctx: K3Context):
    """Z(v) = <exp(zL), v> = 2d n z - s - d r z^2."""
    return pairing(exp_class(z, ctx), v, ctx)


def central_charge_key(z, v: MukaiVector, ctx: K3Context):
    """Central charge via the completed-square form, valid for r != 0:

        Z = v^2/(2r) + r*d*(y + i(n/r - x))^2,    z = x + iy.
    """
    if v.r == 0:
        raise ValueError("completed-square form needs nonzero rank")
    w = _as_scalar(z, ctx)
    lam = Fraction(v.n, v.r) - (w.re if isinstance(w, ModelComplex) else 0)
    head = Fraction(square(v, ctx), 2 * v.r)
    if isinstance(w, ModelComplex):
        # (y + i*lam)^2 = (y^2 - lam^2) + 2*i*y*lam and y = t/sqrt(d); the
        # imaginary part 2*lam*t/sqrt(d) is the coefficient 2*lam*t of i/sqrt(d).
        t = w.im_t
        sq = ModelComplex(t * t / ctx.d - lam * lam, 2 * lam * t, ctx.d)
        return head + v.r * ctx.d * sq
    lam_f = v.n / v.r - w.real
    return head + v.r * ctx.d * complex(w.imag, lam_f) ** 2


@dataclass(frozen=True)
class LatticeMap:
    """Z-linear self-map of N(X), given by the images of (1,0,0), (0,1,0), (0,0,1)."""

    e_r: MukaiVector
    e_n: MukaiVector
    e_s: MukaiVector

    def __call__(self, v):
        imgs = (self.e_r, self.e_n, self.e_s)
        coeffs = (v.r, v.n, v.s)
        if isinstance(v, MukaiVector):
            out = MukaiVector(0, 0, 0)
            for c, img in zip(coeffs, imgs):
                out = out + img.scale(c)
            return out
        comps = []
        for attr in ("r", "n", "s"):
            comps.append(sum(c * getattr(img, attr) for c, img in zip(coeffs, imgs)))
        return ComplexClass(*comps)

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        """``(f @ g)(v) = f(g(v))``."""
        return LatticeMap(self(other.e_r), self(other.e_n), self(other.e_s))

    def is_isometry(self, ctx: K3Context) -> bool:
        basis = (MukaiVector(1, 0, 0), MukaiVector(0, 1, 0), SKYSCRAPER)
        imgs = (self.e_r, self.e_n, self.e_s)
        for i in range(3):
            for j in range(i, 3):
                if pairing(imgs[i], imgs[j], ctx) != pairing(basis[i], basis[j], ctx):
                    return False
        return True

    @classmethod
    def identity(cls) -> "LatticeMap":
        return cls(MukaiVector(1, 0, 0), MukaiVector(0, 1, 0), SKYSCRAPER)

    @classmethod
    def from_function(cls, f) -> "LatticeMap":
        return cls(f(MukaiVector(1, 0, 0)), f(MukaiVector(0, 1, 0)), f(SKYSCRAPER))

    @classmethod
    def reflection(cls, delta: MukaiVector, ctx: K3Context) -> "LatticeMap":
        _require_spherical(delta, ctx)
        return cls.from_function(lambda v: reflect(v, delta, ctx))

    @classmethod
    def tensor_line(cls, k: int, ctx: K3Context) -> "LatticeMap":
        """Multiplication by exp(kL): the action of tensoring with L^k."""
        d = ctx.d
        return cls.from_function(
            lambda v: MukaiVector(v.r, v.n + k * v.r, v.s + 2 * d * k * v.n + d * k * k * v.r)
        )

    @classmethod
    def shift(cls) -> "LatticeMap":
        """The shift [1] acts by -1."""
        return cls(MukaiVector(-1, 0, 0), MukaiVector(0, -1, 0), -SKYSCRAPER)
