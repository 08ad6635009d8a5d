"""The twelve acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion; the lines are repeated in the terminal summary.
"""

import random
import time

import pytest

from geobracket import engine
from geobracket import verify as V
from geobracket.bracket import (
    bracket_bar,
    bracket_crossings,
    bracket_power,
    canceling_pairs,
    jacobi_sum,
    power_partner,
    result_from_crossings,
    term_count,
)
from geobracket.surface import builtin
from geobracket.words import cyclic_classes

NAMES = ("pants", "holed-torus")
L = 8
MAX_LEN = 5


class Corpus:
    """Classes of length <= 5 on one surface, with bracket crossings for every ordered pair."""

    def __init__(self, name):
        self.s = builtin(name)
        self.classes = cyclic_classes(2, MAX_LEN)
        self.crossings = {(x, y): bracket_crossings(self.s, x, y, L) for x in self.classes for y in self.classes}
        self.sl = {x: engine.self_intersection_number(self.s, x, L) for x in self.classes}

    def canceling(self):
        for (x, y), crs in self.crossings.items():
            pairs = canceling_pairs(self.s, x, y, L, crs=crs)
            if pairs:
                yield x, y, crs, pairs


@pytest.fixture(scope="module")
def corpora():
    return {name: Corpus(name) for name in NAMES}


@pytest.fixture(scope="module")
def trials():
    start = time.perf_counter()
    reps = V.product_trials(1000, seed=0)
    return reps, time.perf_counter() - start


def test_criterion_01_length_formula(trials, record):
    reps, elapsed = trials
    rep = reps["beardon"]
    ok = rep.passed and rep.instances == 1000 and rep.max_residual < 1e-8 and elapsed < 1.0
    record(1, ok, f"length formula: {rep.instances} trials, max residual {rep.max_residual:.2e}, {elapsed:.2f} s")
    assert ok, rep.failures[:5]


def test_criterion_02_half_length_points(trials, corpora, record):
    reps, _ = trials
    rep = reps["midpoints"]
    engine_rep = V.VerificationReport("midpoints")
    for c in corpora.values():
        for x in c.classes[:16]:
            for y in c.classes[:16]:
                engine_rep.merge(V.half_length_check(c.s, x, y, L))
    ok = rep.passed and rep.max_residual < 1e-8 and engine_rep.passed
    record(
        2, ok,
        f"half-length points: {rep.instances} random trials max {rep.max_residual:.2e}; "
        f"{engine_rep.instances} surface crossings max {engine_rep.max_residual:.2e}",
    )
    assert ok, (rep.failures + engine_rep.failures)[:5]


def test_criterion_03_half_turn_factorisation(trials, record):
    reps, _ = trials
    rep = reps["rotations"]
    ok = rep.passed and rep.instances == 1000 and rep.max_residual < 1e-9
    record(3, ok, f"X = R_P R_S: {rep.instances} trials, max relative residual {rep.max_residual:.2e}")
    assert ok, rep.failures[:5]


def test_criterion_04_linking_oracle(corpora, record):
    total = V.VerificationReport("oracle")
    for c in corpora.values():
        short = [x for x in c.classes if len(x) <= 4]
        total.merge(V.oracle_check(c.s, [(x, y) for x in short for y in short], L))
    ok = total.passed and total.instances == 2 * 34 * 34
    record(4, ok, f"oracle: {total.instances} ordered pairs, {len(total.failures)} mismatches")
    assert ok, total.failures[:5]


def test_criterion_05_radius_stability(corpora, record):
    rep = V.VerificationReport("stability")
    for c in corpora.values():
        for (x, y), crs in c.crossings.items():
            rep.instances += 1
            hi = bracket_crossings(c.s, x, y, L + 2)
            if len(hi) != len(crs) or result_from_crossings(hi) != result_from_crossings(crs):
                rep.failures.append(f"{c.s.label} {x},{y}")
        # self-crossings and the power modes
        for x in c.classes:
            for y in (x, power_partner(x, 2), power_partner(x, 3)):
                rep.merge(V.radius_stability(c.s, x, y, L))
    ok = rep.passed
    record(5, ok, f"radius stability L=8 vs 10: {rep.instances} pairs, {len(rep.failures)} instabilities")
    assert ok, rep.failures[:5]


def test_criterion_06_bar_bracket_detects_simplicity(corpora, record):
    start = time.perf_counter()
    exceptions, n = [], 0
    for c in corpora.values():
        for x in c.classes:
            n += 1
            empty = not bracket_bar(c.s, x, L)
            if empty != (c.sl[x] == 0):
                exceptions.append(f"{c.s.label} {x}: SL {c.sl[x]}, bracket {'empty' if empty else 'nonzero'}")
    elapsed = time.perf_counter() - start
    ok = not exceptions and elapsed <= 300
    record(6, ok, f"[x, x-bar] = 0 iff simple: {n} classes, {len(exceptions)} exceptions, {elapsed:.1f} s")
    assert ok, exceptions[:5]


def test_criterion_07_power_bracket_nonzero_when_not_simple(corpora, record):
    exceptions, n = [], 0
    for c in corpora.values():
        for x in c.classes:
            if c.sl[x] == 0:
                continue
            for k in (2, 3):
                n += 1
                if not bracket_power(c.s, x, k, L):
                    exceptions.append(f"{c.s.label} {x} n={k}")
    ok = not exceptions
    record(7, ok, f"SL >= 1 implies [x, x^n] != 0 for n = 2, 3: {n} checks, {len(exceptions)} exceptions")
    assert ok, exceptions[:5]


def test_criterion_08_term_count_conjecture(corpora, record):
    violations, n = [], 0
    for c in corpora.values():
        for x in c.classes:
            n += 1
            bar = term_count(bracket_bar(c.s, x, L))
            sq = term_count(bracket_power(c.s, x, 2, L))
            if bar != 2 * c.sl[x] or sq != 4 * c.sl[x]:
                violations.append(f"{c.s.label} {x}: SL {c.sl[x]}, bar {bar}, square {sq}")
    # soft criterion: violations are reported, never fatal
    verdict = "no violations" if not violations else f"{len(violations)} violations (soft): {violations[:3]}"
    record(8, True, f"term counts 2 SL and 4 SL: {n} classes, {verdict}")


def test_criterion_09_forward_angles_agree(corpora, record):
    rep = V.VerificationReport("angles")
    from_bar = 0
    for c in corpora.values():
        for x in c.classes:
            pairs = canceling_pairs(c.s, x, x.inverse(), L)
            from_bar += len(pairs)
            rep.merge(V.check_forward_angle_congruence(c.s, x, x.inverse(), L, pairs=pairs))
        for x, y, _, pairs in c.canceling():
            rep.merge(V.check_forward_angle_congruence(c.s, x, y, L, pairs=pairs))
    ok = rep.passed and rep.max_residual < 1e-6
    record(
        9, ok,
        f"forward angles of canceling pairs: {from_bar} pairs in [x, x-bar], "
        f"{rep.instances - from_bar} in corpus brackets, max residual {rep.max_residual:.2e}",
    )
    assert ok, rep.failures[:5]


def test_criterion_10_smaller_angle_and_reflections(corpora, record):
    small = V.VerificationReport("smaller-angle")
    refl = V.VerificationReport("reflections")
    vertex = uv = 0.0
    configs = {}
    for c in corpora.values():
        for x in c.classes:
            for y in (x.inverse(), power_partner(x, 2)):
                small.merge(V.check_smaller_angle_exists(c.s, x, y, L))
        for x, y, crs, pairs in c.canceling():
            small.merge(V.check_smaller_angle_exists(c.s, x, y, L, crs=crs))
            for pair in pairs:
                one = V.check_reflection_symmetry(c.s, pair)
                refl.instances += 1
                refl.failures.extend(one.failures)
                vertex = max(vertex, one.max_residual)
                uv = max(uv, one.notes.get("uv_distance_residual", 0.0))
                cfg = one.notes.get("configuration", "?")
                configs[cfg] = configs.get(cfg, 0) + 1
    ok = small.passed and refl.passed and vertex < 1e-6 and uv < 1e-8 and refl.instances > 0
    record(
        10, ok,
        f"smaller angle on {small.instances} pairs; reflections on {refl.instances} pairs, "
        f"vertex residual {vertex:.2e}, U-V residual {uv:.2e}, configurations {dict(sorted(configs.items()))}",
    )
    assert ok, (small.failures + refl.failures)[:5]


def test_criterion_11_lie_algebra_axioms(corpora, record):
    asym = []
    n = 0
    for c in corpora.values():
        for (x, y), crs in c.crossings.items():
            n += 1
            if result_from_crossings(crs) != -result_from_crossings(c.crossings[(y, x)]):
                asym.append(f"{c.s.label} {x},{y}")
    jac = V.VerificationReport("jacobi")
    rng = random.Random(0)
    for c in corpora.values():
        short = [x for x in c.classes if len(x) <= 3]
        for _ in range(20):
            x, y, z = rng.sample(short, 3)
            jac.instances += 1
            if jacobi_sum(c.s, x, y, z, L):
                jac.failures.append(f"{c.s.label} {x},{y},{z}")
    ok = not asym and jac.passed
    record(
        11, ok,
        f"antisymmetry on {n} ordered pairs ({len(asym)} failures); "
        f"Jacobi on {jac.instances} triples ({len(jac.failures)} failures)",
    )
    assert ok, (asym + jac.failures)[:5]


def test_criterion_12_parity_and_brute_force(corpora, record):
    odd, mism, n_par, n_bf = [], [], 0, 0
    for c in corpora.values():
        for x in c.classes:
            n_par += 1
            k = len(engine.crossings(c.s, x, x, L))
            if k % 2:
                odd.append(f"{c.s.label} {x}: {k}")
            if len(x) <= 3:
                n_bf += 1
                exact = V.exact_crossing_count(c.s, x, x, L + 4)
                if exact != 2 * c.sl[x]:
                    mism.append(f"{c.s.label} {x}: SL {c.sl[x]}, search {exact}")
    ok = not odd and not mism
    record(
        12, ok,
        f"even self-crossing counts on {n_par} classes ({len(odd)} odd); "
        f"SL vs exhaustive search at L+4 on {n_bf} classes ({len(mism)} mismatches)",
    )
    assert ok, (odd + mism)[:5]
