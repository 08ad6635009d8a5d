"""The Goldman bracket on conjugacy classes, as integer term maps."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from . import engine
from .engine import DEFAULT_RADIUS, Crossing, NonPrimitive
from .surface import SurfaceSpec
from .words import CyclicWord, canonical_class, is_power, parse_word, power, to_text


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class BracketResult:
    """A finite integer combination of classes; zero coefficients are never stored."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {c: int(k) for c, k in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key) if k}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[CyclicWord, int]]) -> "BracketResult":
        acc: dict = defaultdict(int)
        for c, k in pairs:
            acc[c] += k
        return cls(dict(acc))

    @classmethod
    def single(cls, c: CyclicWord, k: int = 1) -> "BracketResult":
        return cls({c: k})

    def __iter__(self) -> Iterator[CyclicWord]:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, c: CyclicWord) -> int:
        return self.terms.get(c, 0)

    def __eq__(self, other):
        if not isinstance(other, BracketResult):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __neg__(self) -> "BracketResult":
        return BracketResult({c: -k for c, k in self.terms.items()})

    def __add__(self, other: "BracketResult") -> "BracketResult":
        return BracketResult.from_pairs([*self.terms.items(), *other.terms.items()])

    def __sub__(self, other: "BracketResult") -> "BracketResult":
        return self + (-other)

    def scaled(self, k: int) -> "BracketResult":
        return BracketResult({c: k * v for c, v in self.terms.items()})

    def to_dict(self) -> dict[str, int]:
        return {str(c): k for c, k in sorted(self.terms.items(), key=lambda kv: str(kv[0]))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "BracketResult":
        return cls.from_pairs((canonical_class(parse_word(k)), int(v)) for k, v in data.items())

    def __repr__(self):
        return f"BracketResult({self.to_dict()})"


def _as_class(c) -> CyclicWord:
    if isinstance(c, CyclicWord):
        return c
    return canonical_class(parse_word(c) if isinstance(c, str) else c)


def term_of(cr: Crossing) -> tuple[CyclicWord, int]:
    return engine.loop_product_class(cr), engine.sign_at(cr)


def result_from_crossings(crs: Iterable[Crossing]) -> BracketResult:
    return BracketResult.from_pairs(term_of(cr) for cr in crs)


def bracket_crossings(s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS) -> list[Crossing]:
    """The crossings that contribute to [x, y]; empty when x == y."""
    x, y = _as_class(x), _as_class(y)
    if x == y:
        return []
    return engine.crossings(s, x, y, radius)


def bracket(s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS) -> BracketResult:
    return result_from_crossings(bracket_crossings(s, x, y, radius))


def _require_primitive(x: CyclicWord) -> None:
    if is_power(x)[1] != 1:
        raise NonPrimitive(f"{x} is a proper power")


def power_partner(x, n: int) -> CyclicWord:
    if n < 2:
        raise ValueError("power mode needs n >= 2")
    x = _as_class(x)
    _require_primitive(x)
    return canonical_class(power(x.letters, n))


def bar_partner(x) -> CyclicWord:
    x = _as_class(x)
    _require_primitive(x)
    return x.inverse()


def bracket_power(s: SurfaceSpec, x, n: int, radius: int = DEFAULT_RADIUS) -> BracketResult:
    return bracket(s, x, power_partner(x, n), radius)


def bracket_bar(s: SurfaceSpec, x, radius: int = DEFAULT_RADIUS) -> BracketResult:
    return bracket(s, x, bar_partner(x), radius)


Mode = Union[str, int]


def partner(x, mode: Mode) -> CyclicWord:
    """The second argument for a simplicity test: ``"bar"`` or a power n >= 2."""
    if mode == "bar":
        return bar_partner(x)
    if isinstance(mode, int):
        return power_partner(x, mode)
    raise ValueError(f"unknown mode {mode!r}")


def is_simple(s: SurfaceSpec, x, radius: int = DEFAULT_RADIUS, mode: Mode = "bar") -> bool:
    """Whether the bracket of the chosen mode vanishes.

    The verdict is checked against the self-intersection count and a
    ConsistencyError is raised if the two disagree.
    """
    x = _as_class(x)
    empty = not bracket(s, x, partner(x, mode), radius)
    sl = engine.self_intersection_number(s, x, radius)
    if empty != (sl == 0):
        raise ConsistencyError(f"{x}: bracket {'empty' if empty else 'nonzero'} but SL = {sl}")
    return empty


def canceling_pairs(
    s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS, crs: Optional[list[Crossing]] = None
) -> list[tuple[Crossing, Crossing]]:
    """Greedy matching of crossings with equal term class and opposite sign.

    Crossings are scanned by increasing parameter and each is matched to the
    earliest still-unmatched crossing of the opposite sign in its class.
    """
    if crs is None:
        crs = bracket_crossings(s, x, y, radius)
    open_: dict = defaultdict(list)
    pairs = []
    for cr in sorted(crs, key=lambda c: c.t):
        cls, sign = term_of(cr)
        waiting = open_[(cls, -sign)]
        if waiting:
            pairs.append((waiting.pop(0), cr))
        else:
            open_[(cls, sign)].append(cr)
    return pairs


def term_count(r: BracketResult) -> int:
    return sum(abs(k) for k in r.terms.values())


def bracket_linear(
    s: SurfaceSpec, a: BracketResult, b: BracketResult, radius: int = DEFAULT_RADIUS
) -> BracketResult:
    """The bracket extended bilinearly to formal sums."""
    total = BracketResult()
    for x, i in a.items():
        for y, j in b.items():
            total = total + bracket(s, x, y, radius).scaled(i * j)
    return total


def jacobi_sum(s: SurfaceSpec, x, y, z, radius: int = DEFAULT_RADIUS) -> BracketResult:
    """[x,[y,z]] + [y,[z,x]] + [z,[x,y]], which should vanish."""
    x, y, z = (BracketResult.single(_as_class(c)) for c in (x, y, z))
    out = BracketResult()
    for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
        out = out + bracket_linear(s, p, bracket_linear(s, q, r, radius), radius)
    return out


def describe(r: BracketResult) -> str:
    if not r:
        return "0"
    parts = []
    for c, k in r.items():
        sign = "-" if k < 0 else "+"
        mag = "" if abs(k) == 1 else f"{abs(k)}"
        parts.append(f"{sign} {mag}<{to_text(c.letters)}>")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text
