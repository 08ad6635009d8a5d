from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geobracket import words as W
from geobracket.words import CyclicWord, canonical_class, parse_word, to_text

letters = st.sampled_from([1, -1, 2, -2])
raw_words = st.lists(letters, max_size=12).map(tuple)
reduced = raw_words.map(W.reduce)


def nontrivial_cyclic(w):
    return bool(W.cyclic_reduce(w))


def test_reduce_cancels_adjacent_pairs():
    assert W.reduce(parse_word("abBA")) == ()
    assert W.reduce(parse_word("aAb")) == parse_word("b")
    assert W.reduce(parse_word("abBc")) == parse_word("ac")


def test_parse_and_print():
    assert parse_word("aB") == (1, -2)
    assert to_text((1, -2, 3)) == "aBc"
    with pytest.raises(W.WordError):
        parse_word("a1")


@given(raw_words)
def test_text_roundtrip(w):
    assert parse_word(to_text(w)) == w


@given(raw_words)
def test_reduce_is_idempotent_and_reduced(w):
    r = W.reduce(w)
    assert W.reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(reduced, reduced, reduced)
def test_multiplication_is_associative(u, v, w):
    assert W.multiply(W.multiply(u, v), w) == W.multiply(u, W.multiply(v, w))


@given(reduced)
def test_inverse(w):
    assert W.multiply(w, W.invert(w)) == ()
    assert W.invert(W.invert(w)) == w


@given(reduced, st.integers(-4, 4))
def test_power_lengths_of_cyclically_reduced(w, n):
    c = W.cyclic_reduce(w)
    assert len(W.power(c, n)) == abs(n) * len(c)


def test_identity_class_rejected():
    with pytest.raises(W.IdentityClass):
        canonical_class(parse_word("abBA"))
    with pytest.raises(W.IdentityClass):
        CyclicWord(())


@given(reduced, reduced)
def test_class_is_conjugation_invariant(g, w):
    if not nontrivial_cyclic(w):
        return
    assert canonical_class(W.conjugate(g, w)) == canonical_class(w)
    assert W.are_conjugate(W.conjugate(g, w), w)


@given(reduced, reduced)
def test_conjugator_conjugates(g, w):
    if not nontrivial_cyclic(w):
        return
    v = W.conjugate(g, w)
    k = W.conjugator(w, v)
    assert W.conjugate(k, w) == v


def test_conjugator_rejects_non_conjugates():
    with pytest.raises(W.WordError):
        W.conjugator(parse_word("a"), parse_word("b"))


def test_canonical_rotation_order():
    # letters sort a < A < b < B
    assert str(canonical_class(parse_word("Ba"))) == "aB"
    assert str(canonical_class(parse_word("bA"))) == "Ab"
    assert canonical_class(parse_word("ab")).inverse() == canonical_class(parse_word("AB"))


def test_is_power():
    root, n = W.is_power(canonical_class(parse_word("abab")))
    assert (str(root), n) == ("ab", 2)
    assert W.is_primitive_class(canonical_class(parse_word("aab")))
    assert not W.is_primitive_class(canonical_class(parse_word("aaa")))


def _naive_classes(length):
    """Primitive classes of exact length, by brute force over rotation sets."""
    seen = set()
    alphabet = [1, -1, 2, -2]
    for w in product(alphabet, repeat=length):
        cyc = w + w[:1]
        if any(cyc[i] == -cyc[i + 1] for i in range(length)):
            continue
        rots = frozenset(w[i:] + w[:i] for i in range(length))
        if len(rots) < length:
            continue  # a rotation repeats exactly when w is a proper power
        seen.add(rots)
    return len(seen)


@pytest.mark.parametrize("length,count", [(1, 4), (2, 4), (3, 8), (4, 18), (5, 48)])
def test_primitive_class_counts(length, count):
    assert _naive_classes(length) == count
    got = [c for c in W.cyclic_classes(2, length) if len(c) == length]
    assert len(got) == count


def test_cyclic_classes_are_sorted_and_unique():
    cs = W.cyclic_classes(2, 4)
    assert cs == sorted(set(cs))
    assert len(W.cyclic_classes(2, 4, primitive_only=False)) > len(cs)


@pytest.mark.parametrize("text", ["abAB", "aBAb", "abcABC", "aabAAB", "abAcBC"])
def test_commutator_classes(text):
    assert W.is_commutator_class(canonical_class(parse_word(text)))


@pytest.mark.parametrize("text", ["a", "ab", "aabb", "aaBB", "abab"])
def test_non_commutator_classes(text):
    assert not W.is_commutator_class(canonical_class(parse_word(text)))


@given(reduced, reduced)
def test_every_commutator_passes(u, v):
    c = W.multiply(u, v, W.invert(u), W.invert(v))
    if nontrivial_cyclic(c):
        assert W.is_commutator_class(canonical_class(c))


def test_reduced_words_counts():
    counts = [0] * 4
    for w in W.reduced_words(2, 3):
        counts[len(w)] += 1
    assert counts == [1, 4, 12, 36]
