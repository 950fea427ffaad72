"""Loop words in the free product of Z*l_delta (one factor per spherical
class) times the central Z*g, and their images T_delta^2, [2] in the deck
group model.

The model is free: no relations between the T_delta^2 are imposed or
checked.  Letters are normalized spherical vectors (positive rank).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import NonSpherical
from .halfplane import MoebiusMap, twist_moebius
from .lattice import LatticeMap, MukaiVector, is_spherical
from .model import K3Context


class _G:
    """The central loop g around the origin."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "G"


G = _G()

Generator = Union[MukaiVector, _G]


def _free_reduce(letters: Iterable[tuple[MukaiVector, int]]) -> tuple[tuple[MukaiVector, int], ...]:
    stack: list[tuple[MukaiVector, int]] = []
    for gen, e in letters:
        if e == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + e
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, e))
    return tuple(stack)


def _check_letter(gen) -> MukaiVector:
    if not isinstance(gen, MukaiVector):
        raise TypeError(f"letter must be a MukaiVector or G, got {gen!r}")
    return gen.normalized()


@dataclass(frozen=True)
class LoopWord:
    """Reduced word ``l_1^e_1 ... l_k^e_k * g^g_exp``."""

    letters: tuple[tuple[MukaiVector, int], ...] = ()
    g_exp: int = 0

    @classmethod
    def from_letters(cls, seq: Iterable[tuple[Generator, int]]) -> "LoopWord":
        """Build from any sequence of (generator, exponent); G may appear anywhere."""
        free, g = [], 0
        for gen, e in seq:
            if gen is G:
                g += e
            else:
                free.append((_check_letter(gen), e))
        return reduce(cls(tuple(free), g))

    @classmethod
    def identity(cls) -> "LoopWord":
        return cls()

    def is_identity(self) -> bool:
        return not self.letters and self.g_exp == 0

    def __mul__(self, other: "LoopWord") -> "LoopWord":
        return reduce(LoopWord(self.letters + other.letters, self.g_exp + other.g_exp))

    def inverse(self) -> "LoopWord":
        return LoopWord(tuple((gen, -e) for gen, e in reversed(self.letters)), -self.g_exp)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters) + abs(self.g_exp)

    def to_json(self) -> dict:
        return {"letters": [[gen.to_json(), e] for gen, e in self.letters], "g": self.g_exp}

    def __str__(self):
        parts = [f"l{gen}^{e}" for gen, e in self.letters]
        if self.g_exp:
            parts.append(f"g^{self.g_exp}")
        return " ".join(parts) or "1"


def reduce(w: LoopWord) -> LoopWord:
    """Free reduction of the letters; g is central and kept as one exponent."""
    return LoopWord(_free_reduce(w.letters), w.g_exp)


@dataclass(frozen=True)
class DeckWord:
    """``T_1^(2 e_1) ... T_k^(2 e_k) [2]^shift2``; exponents count squares."""

    letters: tuple[tuple[MukaiVector, int], ...] = ()
    shift2: int = 0

    @classmethod
    def from_letters(cls, seq: Iterable[tuple[MukaiVector, int]], shift2: int = 0) -> "DeckWord":
        return cls(_free_reduce((_check_letter(gen), e) for gen, e in seq), shift2)

    def is_identity(self) -> bool:
        return not self.letters and self.shift2 == 0

    def __mul__(self, other: "DeckWord") -> "DeckWord":
        return DeckWord(_free_reduce(self.letters + other.letters), self.shift2 + other.shift2)

    def inverse(self) -> "DeckWord":
        return DeckWord(tuple((gen, -e) for gen, e in reversed(self.letters)), -self.shift2)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def to_json(self) -> dict:
        return {"letters": [[gen.to_json(), e] for gen, e in self.letters], "shift2": self.shift2}

    def __str__(self):
        parts = [f"T{gen}^{2 * e}" for gen, e in self.letters]
        if self.shift2:
            parts.append(f"[{2 * self.shift2}]")
        return " ".join(parts) or "id"


def monodromy(w: LoopWord) -> DeckWord:
    """Letterwise l_delta -> T_delta^2, g -> [2]."""
    return DeckWord(_free_reduce(w.letters), w.g_exp)


def _require(delta: MukaiVector, ctx: K3Context) -> None:
    if not is_spherical(delta, ctx):
        raise NonSpherical(f"{delta} is not spherical for d={ctx.d}")


def letter_lattice_map(delta: MukaiVector, e: int, ctx: K3Context) -> LatticeMap:
    """Cohomological action of T_delta^(2e): the reflection applied 2|e| times."""
    _require(delta, ctx)
    refl = LatticeMap.reflection(delta, ctx)
    out = LatticeMap.identity()
    for _ in range(2 * abs(e)):
        out = refl @ out
    return out


def lattice_action(dw: DeckWord, ctx: K3Context) -> LatticeMap:
    out = LatticeMap.identity()
    for delta, e in dw.letters:
        out = out @ letter_lattice_map(delta, e, ctx)
    shift = LatticeMap.shift()
    for _ in range(2 * abs(dw.shift2)):
        out = out @ shift
    return out


def cohomology_action(dw: DeckWord, v: MukaiVector, ctx: K3Context) -> MukaiVector:
    """Image of ``v`` under the word, applying the rightmost letter first."""
    out = v
    for _ in range(2 * abs(dw.shift2)):
        out = LatticeMap.shift()(out)
    for delta, e in reversed(dw.letters):
        out = letter_lattice_map(delta, e, ctx)(out)
    return out


def halfplane_action(dw: DeckWord, ctx: K3Context) -> MoebiusMap:
    """Composition of the induced maps; [2] acts trivially on the half plane."""
    out = MoebiusMap.identity()
    for delta, e in dw.letters:
        _require(delta, ctx)
        out = out @ twist_moebius(delta, ctx) ** (2 * e)
    return out


# -- textual words for the command line -------------------------------------

def load_alphabet(source) -> tuple[int, dict[str, MukaiVector]]:
    """Parse ``{"label": [d, r, n, s], ...}`` from a path or a mapping.

    All entries must share one d and be spherical for it.
    """
    if isinstance(source, dict):
        raw = source
    else:
        with open(source, encoding="utf-8") as fh:
            raw = json.load(fh)
    if not isinstance(raw, dict) or not raw:
        raise ValueError("alphabet must be a non-empty JSON object")
    ds, out = set(), {}
    for label, entry in raw.items():
        if label.lower() == "g":
            raise ValueError("label 'g' is reserved for the central loop")
        if not (isinstance(entry, list) and len(entry) == 4 and all(isinstance(c, int) for c in entry)):
            raise ValueError(f"alphabet entry {label!r} must be [d, r, n, s]")
        d, r, n, s = entry
        ctx = K3Context(d)
        v = MukaiVector(r, n, s)
        _require(v, ctx)
        ds.add(d)
        out[label] = v.normalized()
    if len(ds) != 1:
        raise ValueError(f"alphabet mixes degrees {sorted(ds)}")
    return ds.pop(), out


def parse_word(text: str, alphabet: dict[str, MukaiVector]) -> LoopWord:
    """Parse ``"A:1 g:1 A:-1"``; a bare label means exponent 1."""
    seq = []
    for token in text.split():
        label, _, exp = token.partition(":")
        e = int(exp) if exp else 1
        if label.lower() == "g":
            seq.append((G, e))
        elif label in alphabet:
            seq.append((alphabet[label], e))
        else:
            raise ValueError(f"unknown label {label!r}")
    return LoopWord.from_letters(seq)


def format_word(w: Union[LoopWord, DeckWord], alphabet: dict[str, MukaiVector]) -> str:
    names = {v: k for k, v in alphabet.items()}
    parts = [f"{names.get(gen, str(gen))}:{e}" for gen, e in w.letters]
    tail = w.g_exp if isinstance(w, LoopWord) else w.shift2
    if tail:
        parts.append(f"g:{tail}" if isinstance(w, LoopWord) else f"[2]:{tail}")
    return " ".join(parts)
