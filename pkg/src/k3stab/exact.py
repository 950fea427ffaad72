"""Exact numbers for the rational model.

Points of the upper half plane are written ``x + i*t/sqrt(d)`` with ``x`` and
``t`` rational.  Every quantity we need (central charges, Moebius images,
cross ratios) stays inside the field Q(i/sqrt(d)), so :class:`ModelComplex`
implements that field directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

RationalLike = Union[int, Fraction, str]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`.

    Floats are refused: silently rounding would break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(c in text for c in ".eE"):
        raise ValueError(f"{text!r} is not of the form p or p/q")
    return Fraction(text)


def format_rational(q) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers); inverse of :func:`parse_rational`."""
    q = as_fraction(q)
    return str(q)


def floor_sqrt(q: Fraction, bits: int = 40) -> Fraction:
    """Largest dyadic ``k / 2**bits`` whose square does not exceed ``q``."""
    if q < 0:
        raise ValueError("negative radicand")
    scale = 1 << (2 * bits)
    k = math.isqrt(q.numerator * scale // q.denominator)
    return Fraction(k, 1 << bits)


class ModelComplex:
    """Element ``re + im_t * i/sqrt(d)`` of Q(i/sqrt(d)).

    ``im_t`` is the coefficient of ``w = i/sqrt(d)``; note ``w*w = -1/d``.
    The actual imaginary part is ``im_t / sqrt(d)``.
    """

    __slots__ = ("re", "im_t", "d")

    def __init__(self, re, im_t, d: int):
        self.re = as_fraction(re)
        self.im_t = as_fraction(im_t)
        self.d = int(d)

    def _coerce(self, other) -> "ModelComplex":
        if isinstance(other, ModelComplex):
            if other.d != self.d:
                raise ValueError(f"mixing degrees d={self.d} and d={other.d}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ModelComplex(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModelComplex(self.re + o.re, self.im_t + o.im_t, self.d)

    __radd__ = __add__

    def __neg__(self):
        return ModelComplex(-self.re, -self.im_t, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModelComplex(self.re - o.re, self.im_t - o.im_t, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        re = self.re * o.re - self.im_t * o.im_t / self.d
        im = self.re * o.im_t + self.im_t * o.re
        return ModelComplex(re, im, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "ModelComplex":
        return ModelComplex(self.re, -self.im_t, self.d)

    def norm(self) -> Fraction:
        """|z|^2, always rational."""
        return self.re * self.re + self.im_t * self.im_t / self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i/sqrt(d))")
        num = self * o.conjugate()
        return ModelComplex(num.re / n, num.im_t / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ModelComplex(1, 0, self.d) / (self ** (-k))
        out = ModelComplex(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ModelComplex):
            return (self.d, self.re, self.im_t) == (other.d, other.re, other.im_t)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im_t == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.d, self.re, self.im_t))

    def __complex__(self):
        return complex(float(self.re), float(self.im_t) / math.sqrt(self.d))

    @property
    def imag(self) -> float:
        return float(self.im_t) / math.sqrt(self.d)

    def __repr__(self):
        return f"ModelComplex({self.re}, {self.im_t}, d={self.d})"
