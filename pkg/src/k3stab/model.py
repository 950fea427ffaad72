"""Shared value types: the degree context and half-plane points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import ModelComplex, as_fraction, format_rational


@dataclass(frozen=True)
class K3Context:
    """Degree data of a Picard-rank-one K3 surface with NS = ZL, L^2 = 2d."""

    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise TypeError("d must be an int")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")

    @property
    def L2(self) -> int:
        return 2 * self.d


@dataclass(frozen=True)
class HPoint:
    """The point ``x + i*t/sqrt(d)`` of the upper half plane.

    ``t`` is the rational-model height; the Euclidean height is
    ``y = t/sqrt(d)`` and depends on the context the point is used in.
    """

    x: Fraction
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "t", as_fraction(self.t))
        if self.t <= 0:
            raise ValueError(f"HPoint needs t > 0, got t={self.t}")

    def as_complex(self, ctx: K3Context) -> ModelComplex:
        return ModelComplex(self.x, self.t, ctx.d)

    @classmethod
    def from_complex(cls, z: ModelComplex) -> "HPoint":
        return cls(z.re, z.im_t)

    def y_squared(self, ctx: K3Context) -> Fraction:
        return self.t * self.t / ctx.d

    def to_json(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.t)]

    def __str__(self):
        return f"({self.x}, {self.t})"
