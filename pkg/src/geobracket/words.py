"""Free group words.

A letter is a nonzero int: ``i + 1`` is generator ``i`` and ``-(i + 1)`` its
inverse.  Words are tuples of letters.  Letters are ordered
``g0 < g0^-1 < g1 < g1^-1 < ...``; cyclic words are stored in their least
rotation under that order.

Text syntax: ``a``-``z`` are generators 0-25, ``A``-``Z`` their inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

Word = tuple


class WordError(ValueError):
    pass


class IdentityClass(WordError):
    pass


def letter(index: int, sign: int = 1) -> int:
    return (index + 1) * (1 if sign > 0 else -1)


def letter_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


def reduce(raw: Iterable[int]) -> Word:
    out: list[int] = []
    for x in raw:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], n: int) -> Word:
    base = reduce(w) if n >= 0 else invert(reduce(w))
    return multiply(*([base] * abs(n)))


def conjugate(g: Sequence[int], w: Sequence[int]) -> Word:
    """g w g^-1, reduced."""
    return multiply(g, w, invert(g))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1]


def least_rotation(w: Sequence[int]) -> Word:
    if not w:
        return ()
    keys = [letter_key(x) for x in w]
    n = len(w)
    best = min(range(n), key=lambda i: keys[i:] + keys[:i])
    return tuple(w[best:]) + tuple(w[:best])


@dataclass(frozen=True)
class CyclicWord:
    """A nontrivial conjugacy class, as its canonical cyclic word."""

    letters: Word

    def __post_init__(self):
        if not self.letters:
            raise IdentityClass("the identity class is not allowed")

    @cached_property
    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __lt__(self, other: "CyclicWord") -> bool:
        return self.sort_key < other.sort_key

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return to_text(self.letters)

    def __repr__(self):
        return f"CyclicWord({to_text(self.letters)!r})"

    @property
    def word(self) -> Word:
        """The canonical rotation read as a based word."""
        return self.letters

    def inverse(self) -> "CyclicWord":
        return canonical_class(invert(self.letters))

    def rank(self) -> int:
        return max(abs(x) for x in self.letters)


def canonical_class(w: Sequence[int]) -> CyclicWord:
    c = cyclic_reduce(w)
    if not c:
        raise IdentityClass("word reduces to the identity")
    return CyclicWord(least_rotation(c))


def is_power(c: CyclicWord) -> tuple[CyclicWord, int]:
    w = c.letters
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[p:] + w[:p] == w:
            return CyclicWord(w[:p]), n // p
    raise AssertionError("unreachable")


def is_primitive_class(c: CyclicWord) -> bool:
    return is_power(c)[1] == 1


def are_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    return least_rotation(cu) == least_rotation(cv)


def conjugator(u: Sequence[int], v: Sequence[int]) -> Word:
    """Some k with k u k^-1 == v (both reduced, conjugate, nontrivial)."""
    u, v = reduce(u), reduce(v)

    def split(w):
        # w = p c p^-1 with c cyclically reduced
        c = cyclic_reduce(w)
        k = (len(w) - len(c)) // 2
        return w[:k], c

    pu, cu = split(u)
    pv, cv = split(v)
    n = len(cu)
    for i in range(n):
        if cu[i:] + cu[:i] == cv:
            # cv = r^-1 cu r with r = cu[:i]
            k = multiply(pv, invert(cu[:i]), invert(pu))
            if multiply(k, u, invert(k)) == v:
                return k
    raise WordError("words are not conjugate")


def reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """All reduced words of length <= max_len, by length then BFS order."""
    alphabet = [x for i in range(rank) for x in (i + 1, -(i + 1))]
    level: list[Word] = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in level:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        level = nxt


def conjugates_up_to(w: Sequence[int], max_len: int, rank: int) -> set[Word]:
    w = reduce(w)
    return {conjugate(g, w) for g in reduced_words(rank, max_len)}


def cyclic_classes(rank: int, max_len: int, primitive_only: bool = True) -> list[CyclicWord]:
    """All nontrivial classes of cyclic length <= max_len, in canonical order."""
    alphabet = [x for i in range(rank) for x in (i + 1, -(i + 1))]
    found: set[CyclicWord] = set()
    for n in range(1, max_len + 1):
        for w in product(alphabet, repeat=n):
            if reduce(w) != w or (n > 1 and w[0] == -w[-1]):
                continue
            c = CyclicWord(least_rotation(w))
            if primitive_only and not is_primitive_class(c):
                continue
            found.add(c)
    return sorted(found)


def is_commutator_class(c: CyclicWord) -> bool:
    """Whether the class contains a commutator u v u^-1 v^-1.

    Wicks' criterion: a cyclically reduced word is conjugate to a commutator
    iff some rotation of it is literally x y z x^-1 y^-1 z^-1.
    """
    w = c.letters
    n = len(w)
    if n % 2:
        return False
    half = n // 2
    for r in range(n):
        rot = w[r:] + w[:r]
        for i in range(half + 1):
            for j in range(half - i + 1):
                x, y, z = rot[:i], rot[i : i + j], rot[i + j : half]
                if rot[half:] == invert(x) + invert(y) + invert(z):
                    return True
    return False


_LOWER = "abcdefghijklmnopqrstuvwxyz"


def parse_word(text: str) -> Word:
    """Parse e.g. ``abA`` into (1, 2, -1).  The result is not reduced."""
    out = []
    for ch in text:
        if ch in _LOWER:
            out.append(_LOWER.index(ch) + 1)
        elif ch.lower() in _LOWER and ch.isupper():
            out.append(-(_LOWER.index(ch.lower()) + 1))
        else:
            raise WordError(f"bad letter {ch!r} in {text!r}")
    return tuple(out)


def to_text(w: Sequence[int]) -> str:
    chars = []
    for x in w:
        ch = _LOWER[abs(x) - 1]
        chars.append(ch if x > 0 else ch.upper())
    return "".join(chars)
