"""Exact computations on the upper half plane attached to a Picard-rank-one
K3 surface: Mukai lattice arithmetic, spherical points, Moebius maps induced
by spherical twists, walls, and the deck-group word calculus."""

from .errors import K3StabError
from .exact import ModelComplex, format_rational, parse_rational
from .lattice import LatticeMap, MukaiVector, pairing, reflect, twist_on_skyscraper
from .model import HPoint, K3Context

__all__ = [
    "HPoint",
    "K3Context",
    "K3StabError",
    "LatticeMap",
    "ModelComplex",
    "MukaiVector",
    "format_rational",
    "pairing",
    "parse_rational",
    "reflect",
    "twist_on_skyscraper",
]
