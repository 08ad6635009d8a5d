"""Closed geodesics, their lifts, and their crossings.

Lifts of a closed geodesic y are the axes g(A_Y) for conjugators g; each is
labelled by the exact reduced word g Y g^-1.  A crossing of x and y is an
orbit of pairs (A_X, lift of y) under the stabiliser of A_X; we keep the
representative whose crossing parameter lies in [0, l_x).

The crossing parameter is arclength along A_X measured from the projection of
i onto A_X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import hyperbolic as hyp
from .hyperbolic import DirectedGeodesic, Isometry
from .surface import SurfaceSpec, word_length, word_to_matrix
from .words import (
    CyclicWord,
    IdentityClass,
    Word,
    canonical_class,
    conjugate,
    cyclic_reduce,
    invert,
    is_power,
    letter_key,
    multiply,
    power,
    to_text,
)

DEFAULT_RADIUS = 8
ANGLE_TOL = 1e-9
CROSSING_WINDOW = 25.0


class EngineError(RuntimeError):
    pass


class NonPrimitive(ValueError):
    pass


class OddCount(EngineError):
    pass


class TangentDegenerate(EngineError):
    pass


class PointNotOnAxis(hyp.GeometryError):
    pass


@dataclass(frozen=True)
class ClosedGeodesic:
    cls: CyclicWord
    rep: Word
    ax: DirectedGeodesic
    length: float
    root: Word
    exponent: int

    @property
    def mat(self) -> Isometry:
        """Matrix of rep, built as a power of the root matrix."""
        return self.root_mat**self.exponent

    @property
    def root_mat(self) -> Isometry:
        return hyp.hyperbolic_element(self.ax.start, self.ax.end, self.root_length)

    @property
    def root_length(self) -> float:
        return self.length / self.exponent

    @property
    def origin(self) -> float:
        """Axis coordinate of the point where t = 0."""
        return self.ax.param(1j)

    def point_at(self, t: float) -> complex:
        return self.ax.point_at(self.origin + t)

    def param_of(self, z: complex) -> float:
        return self.ax.param(z) - self.origin


@dataclass(frozen=True)
class Crossing:
    base: ClosedGeodesic
    other: Word
    point: complex
    t: float
    sign: int
    angle: float
    lift: DirectedGeodesic
    conjugator: Word
    other_class: CyclicWord
    sheet: int = 0


def apply_word(s: SurfaceSpec, w: Word, p):
    """w(p) for a boundary point, applying letters right to left.

    When w . p is an infinite reduced word every step maps into a nested
    Schottky disk, so this is accurate where the product matrix is not.
    """
    for x in reversed(w):
        g = s.generators[abs(x) - 1]
        p = (g if x > 0 else g.inverse())(p)
    return p


@lru_cache(maxsize=16384)
def word_axis(s: SurfaceSpec, w: Word) -> DirectedGeodesic:
    """Axis of a cyclically reduced word, polished by iterating the word pointwise."""
    ax = hyp.axis(word_to_matrix(s, w))
    if ax.start is hyp.INFINITY or ax.end is hyp.INFINITY:
        raise EngineError("surface axes must have finite endpoints")
    att, rep = ax.end, ax.start
    inv = invert(w)
    for _ in range(3):
        att = apply_word(s, w, att)
        rep = apply_word(s, inv, rep)
    return DirectedGeodesic(rep, att)


def geodesic_of(s: SurfaceSpec, c: CyclicWord) -> ClosedGeodesic:
    if not isinstance(c, CyclicWord):
        c = canonical_class(c)
    root, n = is_power(c)
    ell = word_length(s, root.letters)
    return ClosedGeodesic(c, c.letters, word_axis(s, root.letters), n * ell, root.letters, n)


def split_conjugate(h: Word) -> tuple[Word, Word]:
    """Write a reduced word as u . core . u^-1 with core cyclically reduced."""
    core = cyclic_reduce(h)
    k = (len(h) - len(core)) // 2
    return h[:k], core


def _period(w: Word) -> Word:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[p:] + w[:p] == w:
            return w[:p]
    return w


@lru_cache(maxsize=65536)
def lift_of(s: SurfaceSpec, h: Word) -> DirectedGeodesic:
    """Axis of the reduced word h, computed stably as u(axis of core)."""
    u, core = split_conjugate(h)
    ax = word_axis(s, _period(core))
    return DirectedGeodesic(apply_word(s, u, ax.start), apply_word(s, u, ax.end))


@lru_cache(maxsize=512)
def _lift_endpoints(s: SurfaceSpec, root: Word, radius: int):
    """All lifts g(A_root) with |g| <= radius, as (labels, starts, ends).

    A lift is labelled by its reduced element u . r . u^-1 where r is a
    rotation of root and the product is reduced as written; the shortest
    conjugator of that lift has length |u| + min(i, n - i) for the rotation
    by i.  The u are grown on the left so each level is one Mobius map
    applied to the previous level's endpoints.
    """
    letters = [x for i in range(s.rank) for x in (i + 1, -(i + 1))]
    maps = {}
    for i, g in enumerate(s.generators):
        maps[i + 1] = g.entries()
        maps[-(i + 1)] = g.inverse().entries()
    n = len(root)
    labels: list[Word] = []
    starts, ends = [], []
    for i in range(n):
        rot = root[i:] + root[:i]
        budget = radius - min(i, n - i)
        if budget < 0:
            continue
        ax = word_axis(s, rot)
        labels.append(rot)
        starts.append(np.array([ax.start]))
        ends.append(np.array([ax.end]))
        level_u = [(x,) for x in letters if x != -rot[0] and x != rot[-1]]
        level_first = np.array([u[0] for u in level_u])
        if not level_u or budget == 0:
            continue
        level_start = np.array([(maps[u[0]][0] * ax.start + maps[u[0]][1]) / (maps[u[0]][2] * ax.start + maps[u[0]][3]) for u in level_u])
        level_end = np.array([(maps[u[0]][0] * ax.end + maps[u[0]][1]) / (maps[u[0]][2] * ax.end + maps[u[0]][3]) for u in level_u])
        for depth in range(1, budget + 1):
            labels.extend(u + rot + invert(u) for u in level_u)
            starts.append(level_start)
            ends.append(level_end)
            if depth == budget:
                break
            new_u, new_first, new_start, new_end = [], [], [], []
            for x in letters:
                idx = np.nonzero(level_first != -x)[0]
                a, b, c, d = maps[x]
                ps, pe = level_start[idx], level_end[idx]
                new_start.append((a * ps + b) / (c * ps + d))
                new_end.append((a * pe + b) / (c * pe + d))
                new_first.append(np.full(len(idx), x))
                new_u.extend((x,) + level_u[j] for j in idx)
            level_u = new_u
            level_first = np.concatenate(new_first)
            level_start = np.concatenate(new_start)
            level_end = np.concatenate(new_end)
    return labels, np.concatenate(starts), np.concatenate(ends)


def _apply(m: Isometry, arrays):
    a, b, c, d = m.entries()
    return [(a * x + b) / (c * x + d) for x in arrays]


def linked_lifts(s: SurfaceSpec, gx: ClosedGeodesic, root_y: Word, radius: int):
    """Lifts of root_y (within radius) that link A_X, as (label, axis coordinate).

    Lifts crossing A_X more than CROSSING_WINDOW from the base segment are
    pruned: near the ends of A_X they are too small to resolve in double
    precision, and each crossing orbit has members all along A_X anyway.
    """
    labels, start, end = _lift_endpoints(s, root_y, radius)
    f = gx.ax.standard_map()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u, v = _apply(f, (start, end))
        prod = u * v
        hits = np.nonzero(np.isfinite(prod) & (prod < 0))[0]
        tau = 0.5 * np.log(-prod[hits])
    lo = gx.origin - CROSSING_WINDOW
    hi = gx.origin + gx.root_length + CROSSING_WINDOW
    keep = (tau >= lo) & (tau <= hi)
    return [(labels[i], float(t)) for i, t in zip(hits[keep], tau[keep])]


def _same_axis(u: Word, v: Word) -> bool:
    return multiply(u, v) == multiply(v, u)


def crossings(
    s: SurfaceSpec, x: CyclicWord, y: CyclicWord, radius: int = DEFAULT_RADIUS
) -> list[Crossing]:
    """One record per intersection point of the geodesics of x and y.

    Every linked lift is moved into the base period by a power of the root of
    x, so a crossing is found as soon as any member of its orbit lies within
    the enumeration radius.  Powers are handled through their roots: a base
    class x = x0^k contributes k translates of each crossing of x0 (parameters
    in [0, l_x)), and an other class y = y0^m contributes m sheets at each
    crossing lift.
    """
    gx = geodesic_of(s, x)
    gy = geodesic_of(s, y)
    x0, k = gx.root, gx.exponent
    y0, m = gy.root, gy.exponent
    ell0 = gx.root_length
    origin = gx.origin

    # detections far along A_X are imprecise, so each orbit representative is
    # re-tested with a stably computed lift before it is accepted
    candidates = set()
    for h0, tau in linked_lifts(s, gx, y0, radius):
        if _same_axis(h0, x0):
            continue
        j = math.floor((tau - origin) / ell0)
        candidates.add(conjugate(power(x0, -j), h0))
    f = gx.ax.standard_map()
    orbits: dict[Word, float] = {}
    for label in sorted(candidates, key=lambda w: (len(w), [letter_key(z) for z in w])):
        for _ in range(3):
            lift = lift_of(s, label)
            u, v = f(lift.start), f(lift.end)
            if u is hyp.INFINITY or v is hyp.INFINITY or u * v >= 0:
                label = None
                break
            tau = 0.5 * math.log(-u * v)
            j = math.floor((tau - origin) / ell0)
            if j == 0:
                break
            label = conjugate(power(x0, -j), label)
        else:
            label = None
        if label is not None:
            orbits.setdefault(label, tau)
    # at the period boundary two translates of one orbit can both pass
    for label in sorted(orbits, key=orbits.get):
        if label in orbits:
            nxt = conjugate(x0, label)
            if nxt != label:
                orbits.pop(nxt, None)

    out = []
    for label in orbits:
        for jj in range(k):
            h0 = conjugate(power(x0, jj), label)
            lift = lift_of(s, h0)
            frame = hyp.crossing_frame(gx.ax, lift)
            if frame is None:
                raise EngineError(f"linked lift {to_text(h0)} failed to intersect")
            tau, angle, sign = frame
            t = min(max(tau - origin, 0.0), math.nextafter(gx.length, 0.0))
            point = gx.ax.point_at(tau)
            u, _ = split_conjugate(h0)
            other = power(h0, m)
            for sheet in range(m):
                out.append(Crossing(gx, other, point, t, sign, angle, lift, u, gy.cls, sheet))
    out.sort(key=lambda cr: (cr.t, [letter_key(z) for z in cr.other], cr.sheet))
    return out


def self_intersection_number(s: SurfaceSpec, x: CyclicWord, radius: int = DEFAULT_RADIUS) -> int:
    if is_power(x)[1] != 1:
        raise NonPrimitive(f"{x} is a proper power")
    n = len(crossings(s, x, x, radius))
    if n % 2:
        raise OddCount(f"odd self-crossing count {n} for {x}")
    return n // 2


def intersection_number(s: SurfaceSpec, x: CyclicWord, y: CyclicWord, radius: int = DEFAULT_RADIUS) -> int:
    return len(crossings(s, x, y, radius))


def sign_at(cr: Crossing, x_first: bool = True) -> int:
    if cr.angle < ANGLE_TOL or math.pi - cr.angle < ANGLE_TOL:
        raise TangentDegenerate(f"angle {cr.angle} at {cr.point}")
    return cr.sign if x_first else -cr.sign


def loop_product_word(cr: Crossing) -> Word:
    return multiply(cr.base.rep, cr.other)


def loop_product_class(cr: Crossing) -> CyclicWord:
    try:
        return canonical_class(loop_product_word(cr))
    except IdentityClass:
        raise EngineError("loop product reduced to the identity") from None


def term_matrix(s: SurfaceSpec, cr: Crossing) -> Isometry:
    """Matrix of the term whose axis passes through both half-length points.

    This is h . X as matrices (X applied first); it is conjugate to X . h.
    """
    return word_to_matrix(s, multiply(cr.other, cr.base.rep))


def term_axis(s: SurfaceSpec, cr: Crossing) -> DirectedGeodesic:
    """Axis of term_matrix, computed pointwise rather than from the product matrix."""
    return lift_of(s, multiply(cr.other, cr.base.rep))


def half_length_points(s: SurfaceSpec, cr: Crossing) -> tuple[complex, complex]:
    """S on A_X half of l_x behind the crossing, T on the lift half of l_y ahead."""
    lx = cr.base.length
    ly = word_length(s, cyclic_reduce(cr.other))
    S = cr.base.point_at(cr.t - lx / 2)
    T = cr.lift.point_at(cr.lift.param(cr.point) + ly / 2)
    return S, T


def crossing_chart(s: SurfaceSpec, cr: Crossing) -> tuple[complex, complex, DirectedGeodesic]:
    """half_length_points and term_axis in a well-conditioned chart.

    The configuration is first pulled back by the conjugator u of the lift
    (h = u core u^-1), so that both axes are lifts of short words, and then
    moved so that the base runs 0 -> inf through the crossing at i.  Far along
    a lift the plane coordinates otherwise sit within 1e-9 of the boundary,
    where float rounding alone is worth 1e-8 in distance.
    """
    u, core = split_conjugate(cr.other)
    ui = invert(u)
    base = lift_of(s, multiply(ui, cr.base.rep, u))
    lift = lift_of(s, core)
    term = lift_of(s, multiply(core, ui, cr.base.rep, u))
    f = base.standard_map()
    lift = DirectedGeodesic(f(lift.start), f(lift.end))
    term = DirectedGeodesic(f(term.start), f(term.end))
    scale = math.exp(-0.5 * math.log(-lift.start * lift.end))
    lift = DirectedGeodesic(lift.start * scale, lift.end * scale)
    term = DirectedGeodesic(term.start * scale, term.end * scale)
    base = DirectedGeodesic(0.0, hyp.INFINITY)
    P = hyp.intersect(base, lift)
    ly = word_length(s, cyclic_reduce(cr.other))
    S = base.point_at(base.param(P) - cr.base.length / 2)
    T = lift.point_at(lift.param(P) + ly / 2)
    return S, T, term


def midpoint_wrt(g: ClosedGeodesic, cr: Crossing) -> complex:
    """Lift of the point halving g from the crossing, at parameter t + l/2 mod l."""
    if not g.ax.contains(cr.point):
        raise PointNotOnAxis(f"{cr.point} is not on the axis of {g.cls}")
    t = g.param_of(cr.point)
    return g.point_at(math.fmod(t + g.length / 2, g.length))
