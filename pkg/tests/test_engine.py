import math

import pytest

from geobracket import engine
from geobracket import hyperbolic as hyp
from geobracket.surface import word_length, word_to_matrix
from geobracket.verify import half_length_check
from geobracket.words import (
    canonical_class,
    conjugates_up_to,
    cyclic_classes,
    parse_word,
    reduced_words,
)


def C(text):
    return canonical_class(parse_word(text))


def test_generator_length_matches_matrix(surface):
    for i, g in enumerate(surface.generators):
        geo = engine.geodesic_of(surface, canonical_class((i + 1,)))
        assert geo.length == pytest.approx(hyp.translation_length(g), abs=1e-10)
        assert geo.mat.projectively_close(g, 1e-9)


def test_geodesic_invariants(surface):
    for c in cyclic_classes(2, 4):
        geo = engine.geodesic_of(surface, c)
        m = word_to_matrix(surface, geo.rep)
        assert geo.rep == c.letters
        assert abs(geo.length - hyp.translation_length(m)) < 1e-10
        assert hyp.axis(m).start == pytest.approx(geo.ax.start, abs=1e-8)
        assert hyp.axis(m).end == pytest.approx(geo.ax.end, abs=1e-8)


def test_length_of_square_doubles(surface):
    a = engine.geodesic_of(surface, C("a"))
    assert engine.geodesic_of(surface, C("aa")).length == pytest.approx(2 * a.length)


def test_long_powers_stay_accurate(pants):
    root = engine.geodesic_of(pants, C("aB"))
    for n in (2, 3, 5):
        g = engine.geodesic_of(pants, C("aB" * n))
        assert g.length == pytest.approx(n * root.length)
        assert hyp.translation_length(g.mat) == pytest.approx(n * root.length, rel=1e-9)


def test_every_short_word_is_hyperbolic(surface):
    for w in reduced_words(2, 6):
        if w:
            assert hyp.classify(word_to_matrix(surface, w)) is hyp.Kind.HYPERBOLIC


def test_length_is_a_class_function(surface):
    for text in ("b", "aB", "aab"):
        w = parse_word(text)
        ell = engine.geodesic_of(surface, C(text)).length
        for v in conjugates_up_to(w, 4, 2):
            assert word_length(surface, v) == pytest.approx(ell, abs=1e-9)


def test_rounded_matrix_agrees_with_exact_length_on_short_words(surface):
    for w in reduced_words(2, 5):
        if w:
            m = word_to_matrix(surface, w)
            assert hyp.translation_length(m) == pytest.approx(word_length(surface, w), abs=1e-9)


def test_generators_on_pants_are_disjoint(pants):
    assert engine.crossings(pants, C("a"), C("b"), 8) == []
    assert engine.intersection_number(pants, C("a"), C("b")) == 0


def test_generators_on_torus_cross_once(torus):
    crs = engine.crossings(torus, C("a"), C("b"), 8)
    assert len(crs) == 1
    assert str(engine.loop_product_class(crs[0])) == "ab"


def test_generators_are_simple(surface):
    assert engine.crossings(surface, C("a"), C("a"), 8) == []
    assert engine.self_intersection_number(surface, C("b")) == 0


@pytest.mark.parametrize(
    "text,sl_pants,sl_torus",
    [("aB", 1, 0), ("aaB", 2, 0), ("aab", 1, 0), ("aabb", 2, 1), ("abAB", 3, 0)],
)
def test_self_intersection_numbers(pants, torus, text, sl_pants, sl_torus):
    assert engine.self_intersection_number(pants, C(text)) == sl_pants
    assert engine.self_intersection_number(torus, C(text)) == sl_torus


def test_self_intersection_needs_primitive(pants):
    with pytest.raises(engine.NonPrimitive):
        engine.self_intersection_number(pants, C("abab"))


def test_self_crossing_counts_are_even(surface):
    for c in cyclic_classes(2, 4):
        assert len(engine.crossings(surface, c, c)) % 2 == 0


def test_crossing_record_invariants(surface):
    for x, y in [("aB", "aB"), ("aab", "aB"), ("ab", "aB"), ("aabb", "ab")]:
        crs = engine.crossings(surface, C(x), C(y))
        ts = [cr.t for cr in crs]
        assert ts == sorted(ts)
        for cr in crs:
            assert 0 <= cr.t < cr.base.length
            assert 0 < cr.angle < math.pi
            assert cr.base.ax.contains(cr.point, 1e-7)
            assert cr.lift.contains(cr.point, 1e-7)
            h = word_to_matrix(surface, cr.other)
            assert not h.projectively_close(cr.base.mat, 1e-9)
            assert not h.projectively_close(cr.base.mat.inverse(), 1e-9)
            # the lift really is the axis of the labelled element
            ax = hyp.axis(h)
            assert hyp.intersect(cr.base.ax, ax) is not None
            assert cr.sign == hyp.orientation_sign(cr.base.ax, cr.lift, cr.point)


def test_swapping_strands_flips_signs(torus):
    (p,) = engine.crossings(torus, C("a"), C("b"))
    (q,) = engine.crossings(torus, C("b"), C("a"))
    assert engine.sign_at(p) == -engine.sign_at(q)
    assert engine.sign_at(p, x_first=False) == -engine.sign_at(p)


def test_reversing_a_strand_flips_sign(torus):
    (p,) = engine.crossings(torus, C("a"), C("b"))
    (q,) = engine.crossings(torus, C("a"), C("B"))
    assert p.sign == -q.sign
    assert p.angle == pytest.approx(math.pi - q.angle)


def test_tangent_crossings_abort(torus):
    import dataclasses

    (p,) = engine.crossings(torus, C("a"), C("b"))
    flat = dataclasses.replace(p, angle=1e-12)
    with pytest.raises(engine.TangentDegenerate):
        engine.sign_at(flat)


@pytest.mark.parametrize("x,y", [("aB", "aB"), ("aab", "ab"), ("aabb", "ab"), ("aB", "aaB")])
def test_term_length_follows_the_length_formula(surface, x, y):
    for cr in engine.crossings(surface, C(x), C(y)):
        term = engine.geodesic_of(surface, engine.loop_product_class(cr))
        ly = engine.geodesic_of(surface, C(y)).length
        alpha = math.pi - cr.angle
        assert term.length == pytest.approx(hyp.beardon_length(cr.base.length, ly, alpha), abs=1e-7)


@pytest.mark.parametrize("x,y", [("aB", "Ab"), ("aab", "ab"), ("aabb", "abAB"), ("aB", "aBaB")])
def test_half_length_points_sit_on_the_term_axis(surface, x, y):
    rep = half_length_check(surface, C(x), C(y))
    assert rep.passed, rep.failures


def test_midpoint_halves_the_geodesic(pants):
    for cr in engine.crossings(pants, C("aab"), C("aab")):
        g = cr.base
        m = engine.midpoint_wrt(g, cr)
        assert g.ax.contains(m, 1e-8)
        d = (g.param_of(m) - cr.t) % g.length
        assert d == pytest.approx(g.length / 2)
        # the next lift of the crossing gives the same point one period later
        assert hyp.dist(g.mat(cr.point), m) == pytest.approx(g.length / 2, abs=1e-7)


def test_midpoint_requires_a_point_on_the_axis(pants):
    crs = engine.crossings(pants, C("aB"), C("aB"))
    other = engine.geodesic_of(pants, C("a"))
    with pytest.raises(engine.PointNotOnAxis):
        engine.midpoint_wrt(other, crs[0])


def test_results_are_deterministic(pants):
    a = engine.crossings(pants, C("aaB"), C("aB"), 8)
    engine.lift_of.cache_clear()
    engine.word_axis.cache_clear()
    b = engine.crossings(pants, C("aaB"), C("aB"), 8)
    assert [(c.other, c.sign) for c in a] == [(c.other, c.sign) for c in b]
    assert [c.t for c in a] == pytest.approx([c.t for c in b])
