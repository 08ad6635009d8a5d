"""Independent checks of the engine and of the geometry behind cancellation.

The linking oracle decides crossings from the circular order of boundary
points alone and groups lifts into crossing orbits by exact word
conjugation, so it shares nothing with the engine except the enumeration of
conjugates.  The remaining checks test properties of canceling pairs of
bracket terms: congruent forward angles, the reflection symmetry of the two
zigzags, and the existence of a crossing with a smaller forward angle.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import engine
from . import hyperbolic as hyp
from .bracket import BracketResult, bracket_crossings, canceling_pairs, result_from_crossings
from .engine import DEFAULT_RADIUS, Crossing
from .hyperbolic import DirectedGeodesic
from .surface import SurfaceSpec, word_length, word_to_matrix
from .words import (
    CyclicWord,
    Word,
    WordError,
    canonical_class,
    conjugate,
    conjugator,
    cyclic_reduce,
    invert,
    is_power,
    multiply,
    power,
    to_text,
)

VERTEX_TOL = 1e-6
ANGLE_TOL = 1e-6
DISTANCE_TOL = 1e-8
STRICT_MARGIN = 1e-9


class VertexMismatch(AssertionError):
    pass


@dataclass
class VerificationReport:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)
    max_residual: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def residual(self, r: float) -> None:
        if r > self.max_residual:
            self.max_residual = r

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.instances += other.instances
        self.failures.extend(other.failures)
        self.residual(other.max_residual)
        for k, v in other.notes.items():
            if isinstance(v, int) and isinstance(self.notes.get(k, 0), int):
                self.notes[k] = self.notes.get(k, 0) + v
            else:
                self.notes[k] = v
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.name}: {self.instances} instances, "
            f"{len(self.failures)} failures, max residual {self.max_residual:.3g}"
        )


# ---------------------------------------------------------------- linking oracle


def _between(a: float, b: float, p: float) -> bool:
    lo, hi = (a, b) if a < b else (b, a)
    return lo < p < hi


ORDER_TOL = 1e-10


def linked(a0: float, a1: float, b0: float, b1: float) -> bool:
    """Whether the pairs {a0, a1} and {b0, b1} alternate on the boundary circle.

    All four points are finite reals here, so the circle order is the order
    on the line.
    """
    return _between(a0, a1, b0) != _between(a0, a1, b1)


def decidable(a0: float, a1: float, b0: float, b1: float) -> bool:
    """Whether the endpoints are far enough apart for their order to be trusted.

    Lifts squeezed against an endpoint of the base axis are translates of
    lifts near its middle, so skipping them loses no crossing orbit.
    """
    scale = ORDER_TOL * (1.0 + abs(a0) + abs(a1))
    return min(abs(a0 - b0), abs(a0 - b1), abs(a1 - b0), abs(a1 - b1)) > scale


def _orbits(labels: Iterable[Word], x0: Word, reach: int) -> int:
    """Number of classes of labels under conjugation by powers of x0."""
    labels = list(labels)
    index = {w: i for i, w in enumerate(labels)}
    parent = list(range(len(labels)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for w, i in index.items():
        for j in range(1, reach + 1):
            other = index.get(conjugate(power(x0, j), w))
            if other is not None:
                parent[find(i)] = find(other)
    return len({find(i) for i in range(len(labels))})


def linking_oracle_count(s: SurfaceSpec, x: CyclicWord, y: CyclicWord, radius: int = DEFAULT_RADIUS) -> int:
    """Crossing count of x and y from boundary order and word algebra only."""
    x0, k = is_power(x)
    y0, m = is_power(y)
    x0, y0 = x0.letters, y0.letters
    base = engine.word_axis(s, x0)
    a0, a1 = base.start, base.end
    labels, starts, ends = engine._lift_endpoints(s, y0, radius)
    lo, hi = min(a0, a1), max(a0, a1)
    inside0 = (lo < starts) & (starts < hi)
    inside1 = (lo < ends) & (ends < hi)
    scale = ORDER_TOL * (1.0 + abs(a0) + abs(a1))
    gap = np.minimum.reduce([np.abs(starts - a0), np.abs(starts - a1), np.abs(ends - a0), np.abs(ends - a1)])
    hits = []
    for i in np.nonzero((inside0 != inside1) & (gap > scale))[0]:
        w = labels[i]
        if multiply(w, x0) != multiply(x0, w):
            hits.append(w)
    reach = 2 * (radius + len(y0)) // len(x0) + 2
    return _orbits(hits, x0, reach) * k * m


def oracle_check(s: SurfaceSpec, pairs, radius: int = DEFAULT_RADIUS) -> VerificationReport:
    rep = VerificationReport("oracle")
    for x, y in pairs:
        rep.instances += 1
        a = len(engine.crossings(s, x, y, radius))
        b = linking_oracle_count(s, x, y, radius)
        if a != b:
            rep.failures.append(f"{s.label} {x},{y}: engine {a} oracle {b}")
    return rep


# ---------------------------------------------------------------- exact boundary order


class BoundaryOrder:
    """Circular order of limit points given as infinite reduced words.

    A point whose word starts with letter l lies in the Schottky disk that
    generator l maps into, and each generator carries the complement of the
    opposite disk onto its own disk preserving orientation.  So the circular
    order of two points is decided by the order of the disks at the first
    letter where their words differ; no coordinates are involved.
    """

    def __init__(self, s: SurfaceSpec):
        if s.disks is None:
            raise ValueError("exact boundary order needs the Schottky disks")
        centres = {}
        for i, pair in enumerate(s.disks):
            centres[i + 1] = pair.target.center
            centres[-(i + 1)] = pair.source.center
        order = sorted(centres, key=centres.get)
        self.pos = {x: k for k, x in enumerate(order)}
        self.n = len(order)

    @staticmethod
    def _letter(w, i: int) -> int:
        prefix, period = w
        return prefix[i] if i < len(prefix) else period[(i - len(prefix)) % len(period)]

    def _horizon(self, *ws) -> int:
        return sum(len(p) for p, _ in ws) + 2 * math.prod(len(q) for _, q in ws) + 2

    def _rel(self, x: int, z: int) -> int:
        return (self.pos[x] - self.pos[z]) % self.n

    def _less_after(self, p, q, start: int, z: int) -> bool:
        """p < q in the arc that follows the disk of z, reading letters from start."""
        for i in range(start, start + self._horizon(p, q)):
            a, b = self._letter(p, i), self._letter(q, i)
            if a != b:
                return self._rel(a, z) < self._rel(b, z)
            z = -a
        raise ValueError("points coincide")

    def ccw(self, p, q, r) -> bool:
        """Whether p, q, r occur counterclockwise (increasing along the line)."""
        for i in range(self._horizon(p, q, r)):
            a, b, c = (self._letter(w, i) for w in (p, q, r))
            if a == b == c:
                continue
            if a != b and b != c and a != c:
                return (self.pos[b] - self.pos[a]) % self.n < (self.pos[c] - self.pos[a]) % self.n
            # two share the letter: the third lies outside their disk
            if a == b:
                return self._less_after(p, q, i + 1, -a)
            if b == c:
                return self._less_after(q, r, i + 1, -b)
            return self._less_after(r, p, i + 1, -c)
        raise ValueError("points coincide")

    def linked(self, a0, a1, b0, b1) -> bool:
        return self.ccw(a0, a1, b0) != self.ccw(a0, a1, b1)


def exact_crossing_count(s: SurfaceSpec, x: CyclicWord, y: CyclicWord, radius: int) -> int:
    """Crossings of x and y by exhaustive conjugator search with exact boundary order.

    Lifts of y are the reduced words u r u^-1 with r a rotation of the root of
    y.  Both endpoints of such a lift start with u, so it can only link the
    axis of x when u is a prefix of x^inf or x^-inf; all such u up to the
    radius are searched.  Lifts are grouped into crossing orbits by exact
    conjugation under the root of x.
    """
    order = BoundaryOrder(s)
    x0, k = is_power(x)
    y0, m = is_power(y)
    x0, y0 = x0.letters, y0.letters
    ends = (((), x0), ((), invert(x0)))
    prefixes = {()}
    for w in (x0, invert(x0)):
        long = w * (radius // len(w) + 1)
        prefixes.update(long[:i] for i in range(1, radius + 1))
    n = len(y0)
    hits = []
    for u in prefixes:
        for i in range(n):
            r = y0[i:] + y0[:i]
            if u and (u[-1] == -r[0] or u[-1] == r[-1]):
                continue
            h = u + r + invert(u)
            if multiply(h, x0) == multiply(x0, h):
                continue
            if order.linked(*ends, (u, r), (u, invert(r))):
                hits.append(h)
    reach = 2 * radius // len(x0) + 2
    return _orbits(set(hits), x0, reach) * k * m


# ---------------------------------------------------------------- radius gate


def radius_stability(
    s: SurfaceSpec, x: CyclicWord, y: CyclicWord, radius: int = DEFAULT_RADIUS, step: int = 2
) -> VerificationReport:
    rep = VerificationReport("stability", instances=1)
    lo = bracket_crossings(s, x, y, radius) if x != y else engine.crossings(s, x, y, radius)
    hi = bracket_crossings(s, x, y, radius + step) if x != y else engine.crossings(s, x, y, radius + step)
    if len(lo) != len(hi):
        rep.failures.append(f"{s.label} {x},{y}: {len(lo)} crossings at L={radius}, {len(hi)} at L={radius + step}")
    elif x != y and result_from_crossings(lo) != result_from_crossings(hi):
        rep.failures.append(f"{s.label} {x},{y}: term map changed between L={radius} and L={radius + step}")
    return rep


# ---------------------------------------------------------------- canceling pairs


def check_forward_angle_congruence(
    s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS, pairs=None
) -> VerificationReport:
    rep = VerificationReport("angles")
    if pairs is None:
        pairs = canceling_pairs(s, x, y, radius)
    for p, q in pairs:
        rep.instances += 1
        r = abs(p.angle - q.angle)
        rep.residual(r)
        if r >= ANGLE_TOL:
            rep.failures.append(f"{s.label} {x},{y}: angles {p.angle} and {q.angle} at t={p.t}, {q.t}")
    return rep


def _self_angles(s: SurfaceSpec, c: CyclicWord, radius: int) -> list[float]:
    root, _ = is_power(c)
    return sorted(cr.angle for cr in engine.crossings(s, root, root, radius))


def check_smaller_angle_exists(
    s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS, crs: Optional[list[Crossing]] = None
) -> VerificationReport:
    """Every canceling pair of [x, y] is undercut by a smaller forward angle.

    With equal lengths there must be self-crossings of x and of y with one
    common angle below the pair's angle; otherwise some crossing of x with y,
    or some self-crossing of x or of y, has a smaller angle.
    """
    rep = VerificationReport("smaller-angle")
    x = x if isinstance(x, CyclicWord) else canonical_class(x)
    y = y if isinstance(y, CyclicWord) else canonical_class(y)
    if crs is None:
        crs = bracket_crossings(s, x, y, radius)
    pairs = canceling_pairs(s, x, y, radius, crs=crs)
    if not pairs:
        return rep
    gx, gy = engine.geodesic_of(s, x), engine.geodesic_of(s, y)
    ax, ay = _self_angles(s, x, radius), _self_angles(s, y, radius)
    equal = abs(gx.length - gy.length) < 1e-9 * max(1.0, gx.length)
    mixed = sorted(cr.angle for cr in crs)
    for p, q in pairs:
        rep.instances += 1
        theta = min(p.angle, q.angle)
        if equal:
            common = [u for u in ax if u < theta - STRICT_MARGIN and any(abs(u - v) < ANGLE_TOL for v in ay)]
            ok = bool(common)
            if ok:
                rep.residual(min(abs(common[0] - v) for v in ay))
        else:
            ok = any(a < theta - STRICT_MARGIN for a in (*ax[:1], *ay[:1], *mixed[:1]))
        if not ok:
            rep.failures.append(f"{s.label} {x},{y}: no smaller angle below {theta} (t={p.t}, {q.t})")
    # a pair at the globally smallest angle cannot cancel
    if y.letters and is_power(y)[0] == x and ax:
        smallest = ax[0]
        for p, q in pairs:
            if abs(p.angle - smallest) < ANGLE_TOL:
                rep.failures.append(f"{s.label} {x}: minimal self-crossing angle {smallest} cancels")
    return rep


# ---------------------------------------------------------------- reflections


@dataclass(frozen=True)
class Vertex:
    tau: float
    offset: float
    kind: str  # "a": x-segment arrives, "b": y-segment arrives
    lap: int


@dataclass(frozen=True)
class TermFrame:
    """Coordinates along the axis of a cyclically reduced term word."""

    core: Word
    frame: hyp.Isometry
    length: float

    @classmethod
    def of(cls, s: SurfaceSpec, core: Word) -> "TermFrame":
        ax = engine.word_axis(s, engine._period(core))
        ell = word_length(s, core)
        return cls(core, ax.standard_map(), ell)


def _corner(s: SurfaceSpec, tf: TermFrame, g1: Word, g2: Word, kind: str) -> Vertex:
    """Where the axes of g1 and g2 meet, in term-axis coordinates.

    Powers of the core translate along the term axis and preserve the zigzag,
    so the corner is replaced by its copy nearest the top of the axis, where
    plane coordinates of the two lifts are accurate.
    """
    f = tf.frame
    for _ in range(4):
        l1, l2 = engine.lift_of(s, g1), engine.lift_of(s, g2)
        z = hyp.intersect(DirectedGeodesic(f(l1.start), f(l1.end)), DirectedGeodesic(f(l2.start), f(l2.end)))
        if z is None:
            raise VertexMismatch(f"zigzag lines {to_text(g1)} and {to_text(g2)} do not cross")
        tau = math.log(abs(z))
        j = round(tau / tf.length)
        if j == 0:
            break
        c = power(tf.core, -j)
        g1, g2 = conjugate(c, g1), conjugate(c, g2)
    return Vertex(tau, math.asinh(z.real / z.imag), kind, 0)


def zigzag(s: SurfaceSpec, cr: Crossing, tf: TermFrame, k: Word = (), laps=range(-1, 3)) -> list[Vertex]:
    """Corners of the piecewise lift through a crossing, in a term-axis frame.

    The path leaves the crossing along the y-lift for l_y, then follows the
    next x-lift for l_x, and so on.  Its corners are M^j P and M^j h P with
    M = h X the term element.  Each corner is where two lifts with known labels
    meet; k conjugates M onto the frame's core word, and the remaining laps
    are exact translations along the frame axis.
    """
    xw, h = cr.base.rep, cr.other
    a = _corner(s, tf, conjugate(k, xw), conjugate(k, h), "a")
    b = _corner(s, tf, conjugate(k, h), conjugate(multiply(k, h), xw), "b")
    out = []
    for v in (a, b):
        for j in laps:
            out.append(Vertex(v.tau + j * tf.length, v.offset, v.kind, j))
    return out


def _vertex_point(v: Vertex) -> complex:
    # the point at height e^tau and signed distance offset from the axis
    return math.exp(v.tau) * complex(math.tanh(v.offset), 1 / math.cosh(v.offset))


def _segment_kind(zz: list[Vertex], tau: float) -> str:
    pts = sorted(zz, key=lambda v: v.tau)
    for v in pts:
        if abs(v.tau - tau) < 1e-7:
            return "vertex"
    for v, w in zip(pts, pts[1:]):
        if v.tau < tau < w.tau:
            return "y" if (v.kind, w.kind) == ("a", "b") else "x"
    return "outside"


def _match(ps: list[Vertex], qs: list[Vertex], c: float) -> float:
    """Largest distance from a P corner reflected in the perpendicular at c to the nearest Q corner."""
    rho = hyp.reflection_about(DirectedGeodesic(-math.exp(c), math.exp(c)))
    targets = [_vertex_point(q) for q in qs]
    worst = 0.0
    for p in ps:
        z = hyp.apply_reflection(rho, _vertex_point(p))
        worst = max(worst, min(hyp.dist(z, t) for t in targets))
    return worst


def _fail(rep: VerificationReport, msg: str, strict: bool) -> VerificationReport:
    rep.failures.append(msg)
    if strict:
        raise VertexMismatch(msg)
    return rep


def pair_zigzags(s: SurfaceSpec, pair: tuple[Crossing, Crossing]):
    """Both zigzags of a pair of crossings with conjugate terms, on the axis of P's term."""
    p, q = pair
    mp = multiply(p.other, p.base.rep)
    mq = multiply(q.other, q.base.rep)
    up, core = engine.split_conjugate(mp)
    kq = conjugator(mq, core)
    tf = TermFrame.of(s, core)
    return tf, zigzag(s, p, tf, invert(up)), zigzag(s, q, tf, kq, laps=range(-6, 8))


def check_reflection_symmetry(
    s: SurfaceSpec, pair: tuple[Crossing, Crossing], strict: bool = False
) -> VerificationReport:
    """The two zigzags of a canceling pair are mirror images across two perpendiculars.

    The perpendicular U to the term axis sits halfway between a P corner and a
    Q corner on the same side; V sits half a term length before U.  Every
    corner of P over a period must reflect onto a corner of Q in both lines.
    """
    p, q = pair
    rep = VerificationReport("reflections", instances=1)
    label = f"{s.label} {to_text(multiply(p.other, p.base.rep))}/{to_text(multiply(q.other, q.base.rep))}"
    try:
        tf, zp, zq = pair_zigzags(s, pair)
    except WordError:
        return _fail(rep, f"{label}: terms are not conjugate", strict)

    # the corners lie on lifts of x and y at the right spacing
    a0 = next(v for v in zp if v.kind == "a" and v.lap == 0)
    b0 = next(v for v in zp if v.kind == "b" and v.lap == 0)
    lx = p.base.length
    ly = word_length(s, cyclic_reduce(p.other))
    bs = [v for v in zp if v.kind == "b"]
    seg_y = min(abs(hyp.dist(_vertex_point(a0), _vertex_point(v)) - ly) for v in bs)
    seg_x = min(abs(hyp.dist(_vertex_point(b0), _vertex_point(v)) - lx) for v in zp if v.kind == "a")
    rep.notes["segment_residual"] = max(seg_x, seg_y)
    if max(seg_x, seg_y) >= VERTEX_TOL:
        _fail(rep, f"{label}: zigzag segments off by {max(seg_x, seg_y):.3g}", strict)

    ell = tf.length
    same_side = [v for v in zq if (v.offset > 0) == (a0.offset > 0)]
    candidates = sorted({(a0.tau + v.tau) / 2 for v in same_side})
    scored = [(c, _match(zp, zq, c)) for c in candidates]
    good = [(c, r) for c, r in scored if r < VERTEX_TOL]
    if not good:
        best = min((r for _, r in scored), default=float("inf"))
        return _fail(rep, f"{label}: no perpendicular swaps the zigzags (best residual {best:.3g})", strict)
    u, ru = min(good, key=lambda cr_: abs(cr_[0] - (a0.tau + ell / 4)))
    rep.residual(ru)
    target = u - ell / 2
    rv = _match(zp, zq, target)
    rep.residual(rv)
    if rv >= VERTEX_TOL:
        _fail(rep, f"{label}: the second perpendicular misses by {rv:.3g}", strict)
    # locate V independently among the swapping perpendiculars
    near = [c for c, _ in good if abs(c - u) > 1e-6]
    if near:
        v = min(near, key=lambda c: abs(c - target))
        gap = abs(hyp.dist(1j * math.exp(u), 1j * math.exp(v)) - ell / 2)
        rep.notes["uv_distance_residual"] = gap
        if gap >= DISTANCE_TOL:
            _fail(rep, f"{label}: perpendiculars {abs(u - v)} apart, expected {ell / 2}", strict)
    rep.notes["u_tau"] = u
    rep.notes["v_tau"] = target
    rep.notes["configuration"] = "/".join(sorted((_segment_kind(zp, u), _segment_kind(zp, target))))
    return rep


def pair_figure(s: SurfaceSpec, pair: tuple[Crossing, Crossing], model: str = "half-plane"):
    """Picture of a canceling pair in its term-axis frame: zigzags, axis, U and V."""
    from .svg import Figure

    rep = check_reflection_symmetry(s, pair)
    tf, zp, zq = pair_zigzags(s, pair)
    fig = Figure(f"{s.label}: canceling pair at t={pair[0].t:.6f}, {pair[1].t:.6f}", model=model)
    fig.line(DirectedGeodesic(0.0, hyp.INFINITY), "black", 1.0, dash=True, label="term axis")
    lo, hi = min(v.tau for v in zp), max(v.tau for v in zp)
    for zz, color in ((zp, "#1f4e9e"), (zq, "#c0392b")):
        pts = sorted((v for v in zz if lo - 1e-9 <= v.tau <= hi + 1e-9), key=lambda v: v.tau)
        for v, w in zip(pts, pts[1:]):
            fig.segment(_vertex_point(v), _vertex_point(w), color)
    for key, color in (("u_tau", "#2e8b57"), ("v_tau", "#8e44ad")):
        if key in rep.notes:
            r = math.exp(rep.notes[key])
            fig.line(DirectedGeodesic(-r, r), color, 1.5, label=key[0].upper())
    return fig


def reflection_check_all(s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS, pairs=None) -> VerificationReport:
    rep = VerificationReport("reflections")
    if pairs is None:
        pairs = canceling_pairs(s, x, y, radius)
    configs: dict = {}
    for pair in pairs:
        one = check_reflection_symmetry(s, pair)
        rep.instances += 1
        rep.failures.extend(one.failures)
        rep.residual(one.max_residual)
        rep.residual(one.notes.get("uv_distance_residual", 0.0))
        cfg = one.notes.get("configuration")
        if cfg:
            configs[cfg] = configs.get(cfg, 0) + 1
    rep.notes.update(configs)
    return rep


# ---------------------------------------------------------------- random pairs


def random_linked_pair(rng: random.Random, max_length: float = 4.0):
    """Two hyperbolic isometries with crossing axes and random lengths."""
    pts = sorted(rng.uniform(-5.0, 5.0) for _ in range(4))
    a0, b0, a1, b1 = pts
    if rng.random() < 0.5:
        a0, a1 = a1, a0
    if rng.random() < 0.5:
        b0, b1 = b1, b0
    lx = rng.uniform(0.1, max_length)
    ly = rng.uniform(0.1, max_length)
    return hyp.hyperbolic_element(a0, a1, lx), hyp.hyperbolic_element(b0, b1, ly), lx, ly


def product_trials(trials: int = 1000, seed: int = 0) -> dict[str, VerificationReport]:
    """Length formula, half-length points and half-turn factorisation on random pairs."""
    rng = random.Random(seed)
    length = VerificationReport("beardon")
    mids = VerificationReport("midpoints")
    turns = VerificationReport("rotations")
    for _ in range(trials):
        X, Y, lx, ly = random_linked_pair(rng)
        ax, ay = hyp.axis(X), hyp.axis(Y)
        p = hyp.intersect(ax, ay)
        alpha = math.pi - hyp.forward_angle(ax, ay, p)
        lxy = hyp.translation_length(Y @ X)

        length.instances += 1
        r = abs(hyp.translation_length(X @ Y) - hyp.beardon_length(lx, ly, alpha))
        length.residual(r)
        if r >= 1e-8:
            length.failures.append(f"lx={lx} ly={ly} alpha={alpha}: residual {r}")

        mids.instances += 1
        S = ax.point_at(ax.param(p) - lx / 2)
        T = ay.point_at(ay.param(p) + ly / 2)
        term = hyp.axis(Y @ X)
        r = max(term.distance_to(S), term.distance_to(T), abs(2 * hyp.dist(S, T) - lxy))
        mids.residual(r)
        if r >= 1e-8:
            mids.failures.append(f"lx={lx} ly={ly} alpha={alpha}: residual {r}")

        turns.instances += 1
        behind = ax.point_at(ax.param(p) - lx / 2)
        diff = X.projectively_close(hyp.rotation_pi(p) @ hyp.rotation_pi(behind), 1e-9)
        if not diff:
            turns.failures.append(f"lx={lx}: X is not R_P R_S")
        e1 = X.entries()
        e2 = (hyp.rotation_pi(p) @ hyp.rotation_pi(behind)).entries()
        sgn = 1 if sum(u * v for u, v in zip(e1, e2)) >= 0 else -1
        turns.residual(max(abs(u - sgn * v) for u, v in zip(e1, e2)) / max(1.0, *map(abs, e1)))
    return {"beardon": length, "midpoints": mids, "rotations": turns}


def half_length_check(s: SurfaceSpec, x, y, radius: int = DEFAULT_RADIUS) -> VerificationReport:
    """Half-length points of every crossing lie on the term axis."""
    rep = VerificationReport("midpoints")
    for cr in bracket_crossings(s, x, y, radius):
        rep.instances += 1
        S, T, term = engine.crossing_chart(s, cr)
        r = max(term.distance_to(S), term.distance_to(T))
        rep.residual(r)
        if r >= 1e-8:
            rep.failures.append(f"{s.label} {x},{y} t={cr.t}: residual {r}")
    return rep


def jacobi_check(s: SurfaceSpec, triples, radius: int = DEFAULT_RADIUS) -> VerificationReport:
    from .bracket import jacobi_sum

    rep = VerificationReport("jacobi")
    for x, y, z in triples:
        rep.instances += 1
        j = jacobi_sum(s, x, y, z, radius)
        if j:
            rep.failures.append(f"{s.label} {x},{y},{z}: {j.to_json()}")
    return rep
