"""Upper half-plane geometry.

Interior points are Python ``complex`` numbers with positive imaginary part.
Boundary points are real floats or the :data:`INFINITY` sentinel.  Orientation
preserving isometries are unimodular real matrices (:class:`Isometry`);
reflections are real matrices of determinant -1 acting on the conjugate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

GEOM_TOL = 1e-9
TRACE_TOL = 1e-10
DET_TOL = 1e-12


class GeometryError(ValueError):
    pass


class NotHyperbolic(GeometryError):
    pass


class CoincidentLines(GeometryError):
    pass


class PointNotOnLine(GeometryError):
    pass


class DegenerateProduct(GeometryError):
    pass


class _Infinity(enum.Enum):
    INFINITY = "inf"

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"


INFINITY = _Infinity.INFINITY
BoundaryPoint = Union[float, _Infinity]


def is_infinity(p) -> bool:
    return p is INFINITY


def check_point(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 1e-300:
        raise GeometryError(f"{z} is not in the upper half-plane")
    return z


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True, eq=False)
class Isometry:
    """The Mobius map z -> (a z + b) / (c z + d) with ad - bc = 1.

    Equality is projective: M and -M are the same isometry.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        ad, bc = self.a * self.d, self.b * self.c
        det = ad - bc
        # for large entries ad - bc carries rounding noise of order eps * |ad|;
        # renormalising on that noise would corrupt an exact unit determinant
        if abs(det - 1) < max(DET_TOL, 1e-14 * max(abs(ad), abs(bc))):
            return
        if det <= 0:
            raise GeometryError(f"determinant {det} is not positive")
        s = math.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) / s)

    def _signed(self) -> tuple[float, float, float, float]:
        e = self.entries()
        lead = next((x for x in e if x != 0), 1.0)
        return e if lead > 0 else tuple(-x for x in e)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self._signed() == other._signed()

    def __hash__(self):
        return hash(self._signed())

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Isometry":
        base = self if n >= 0 else self.inverse()
        out = Isometry.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def __call__(self, z):
        """Act on an interior point (complex) or a boundary point."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if z is INFINITY:
            return INFINITY if c == 0 else a / c
        if isinstance(z, complex):
            return (a * z + b) / (c * z + d)
        den = c * z + d
        if den == 0:
            return INFINITY
        return (a * z + b) / den

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def projectively_close(self, other: "Isometry", tol: float = GEOM_TOL) -> bool:
        """Entrywise agreement up to sign, relative to the size of the entries."""
        mine = self.entries()
        theirs = other.entries()
        scale = max(1.0, *map(abs, mine), *map(abs, theirs))
        plus = max(abs(x - y) for x, y in zip(mine, theirs))
        minus = max(abs(x + y) for x, y in zip(mine, theirs))
        return min(plus, minus) < tol * scale

    def fixed_points(self) -> tuple[BoundaryPoint, BoundaryPoint]:
        """Return (repelling, attracting) fixed points of a hyperbolic map."""
        if classify(self) is not Kind.HYPERBOLIC:
            raise NotHyperbolic(f"trace {self.trace} is not hyperbolic")
        a, b, c, d = self.entries()
        if c == 0:
            finite = b / (d - a)
            return (finite, INFINITY) if abs(a) > abs(d) else (INFINITY, finite)
        # roots of c z^2 + (d - a) z - b = 0
        p = (a - d) / (2 * c)
        disc = math.sqrt(self.trace**2 - 4) / (2 * abs(c))
        roots = (p - disc, p + disc)
        # attracting iff |c z + d| > 1, i.e. derivative modulus < 1
        if abs(c * roots[0] + d) > 1:
            return roots[1], roots[0]
        return roots[0], roots[1]


def classify(m: Isometry) -> Kind:
    tr = abs(m.trace)
    if abs(tr - 2) <= TRACE_TOL:
        if max(abs(m.b), abs(m.c), abs(m.a - m.d)) <= TRACE_TOL:
            return Kind.IDENTITY
        return Kind.PARABOLIC
    return Kind.ELLIPTIC if tr < 2 else Kind.HYPERBOLIC


def translation_length(m: Isometry) -> float:
    tr = abs(m.trace)
    if tr <= 2 + TRACE_TOL:
        raise NotHyperbolic(f"|trace| = {tr} <= 2")
    return 2 * math.acosh(tr / 2)


def hyperbolic_element(start: BoundaryPoint, end: BoundaryPoint, length: float) -> Isometry:
    """The hyperbolic isometry translating by ``length`` along start -> end."""
    f = DirectedGeodesic(start, end).standard_map()
    s = math.exp(length / 2)
    return f.inverse() @ Isometry(s, 0.0, 0.0, 1 / s) @ f


@dataclass(frozen=True)
class DirectedGeodesic:
    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        if self.start is INFINITY and self.end is INFINITY:
            raise GeometryError("geodesic endpoints coincide")
        if self.start is not INFINITY and self.end is not INFINITY:
            if self.start == self.end:
                raise GeometryError("geodesic endpoints coincide")

    def reversed(self) -> "DirectedGeodesic":
        return DirectedGeodesic(self.end, self.start)

    def same_line(self, other: "DirectedGeodesic", tol: float = GEOM_TOL) -> bool:
        def close(p, q):
            if p is INFINITY or q is INFINITY:
                return p is q
            return abs(p - q) <= tol * max(1.0, abs(p), abs(q))

        return (close(self.start, other.start) and close(self.end, other.end)) or (
            close(self.start, other.end) and close(self.end, other.start)
        )

    def standard_map(self) -> Isometry:
        """Isometry sending start to 0 and end to infinity."""
        p, q = self.start, self.end
        if p is INFINITY:
            return Isometry(0.0, -1.0, 1.0, -q)
        if q is INFINITY:
            return Isometry(1.0, -p, 0.0, 1.0)
        if p > q:
            return Isometry(1.0, -p, 1.0, -q)
        return Isometry(-1.0, p, 1.0, -q)

    def param(self, z: complex) -> float:
        """Signed arclength coordinate of the projection of z to the line."""
        w = self.standard_map()(complex(z))
        return math.log(abs(w))

    def point_at(self, tau: float) -> complex:
        return self.standard_map().inverse()(1j * math.exp(tau))

    def distance_to(self, z: complex) -> float:
        w = self.standard_map()(check_point(z))
        return math.asinh(abs(w.real) / w.imag)

    def contains(self, z: complex, tol: float = GEOM_TOL) -> bool:
        return self.distance_to(z) < tol

    def tangent(self, z: complex) -> complex:
        """Euclidean unit tangent (as a complex number) in the forward direction."""
        p, q = self.start, self.end
        if p is INFINITY:
            return -1j
        if q is INFINITY:
            return 1j
        centre = (p + q) / 2
        radial = (z - centre) / abs(z - centre)
        return radial * (-1j if q > p else 1j)


def dist(p: complex, q: complex) -> float:
    p, q = check_point(p), check_point(q)
    return 2 * math.asinh(abs(p - q) / (2 * math.sqrt(p.imag * q.imag)))


def _to_i(p: complex) -> Isometry:
    """Isometry taking i to p."""
    s = math.sqrt(p.imag)
    return Isometry(s, p.real / s, 0.0, 1 / s)


def point_towards(p: complex, q: complex, s: float) -> complex:
    """Point at distance s from p along the geodesic ray through q."""
    p, q = check_point(p), check_point(q)
    if p == q:
        return p
    a = _to_i(p)
    w = a.inverse()(q)
    zeta = (w - 1j) / (w + 1j)
    zeta = math.tanh(s / 2) * zeta / abs(zeta)
    return a(1j * (1 + zeta) / (1 - zeta))


def geodesic_through(p: complex, q: complex) -> DirectedGeodesic:
    """The complete geodesic through p and q, directed from p to q."""
    p, q = check_point(p), check_point(q)
    if p == q:
        raise GeometryError("need two distinct points")
    a = _to_i(p)
    w = a.inverse()(q)
    u = (w - 1j) / (w + 1j)
    u = u / abs(u)

    def boundary(v):
        if v == 1:
            return INFINITY
        return a((1j * (1 + v) / (1 - v)).real)

    return DirectedGeodesic(boundary(-u), boundary(u))


def midpoint(p: complex, q: complex) -> complex:
    return point_towards(p, q, dist(p, q) / 2)


def intersect(g1: DirectedGeodesic, g2: DirectedGeodesic) -> Optional[complex]:
    f = g1.standard_map()
    u, v = f(g2.start), f(g2.end)
    if u is INFINITY or v is INFINITY:
        other = v if u is INFINITY else u
        if other is not INFINITY and abs(other) == 0:
            raise CoincidentLines("geodesics share both endpoints")
        return None
    if u == 0 or v == 0:
        return None
    if u * v > 0:
        return None
    return f.inverse()(1j * math.sqrt(-u * v))


def forward_angle(g1: DirectedGeodesic, g2: DirectedGeodesic, p: complex) -> float:
    p = check_point(p)
    for g in (g1, g2):
        if not g.contains(p):
            raise PointNotOnLine(f"{p} is not on {g}")
    t1, t2 = g1.tangent(p), g2.tangent(p)
    cos = t1.real * t2.real + t1.imag * t2.imag
    return math.acos(max(-1.0, min(1.0, cos)))


def orientation_sign(g1: DirectedGeodesic, g2: DirectedGeodesic, p: complex) -> int:
    """Sign of det(forward tangent of g1, forward tangent of g2) at p."""
    t1, t2 = g1.tangent(p), g2.tangent(p)
    cross = t1.real * t2.imag - t1.imag * t2.real
    return 1 if cross > 0 else -1


def crossing_frame(g1: DirectedGeodesic, g2: DirectedGeodesic) -> Optional[tuple[float, float, int]]:
    """(axis coordinate on g1, forward angle, sign) of a transversal crossing.

    Everything is read off in the frame where g1 runs from 0 to infinity, so
    it stays accurate for crossings far out along g1 where the plane
    coordinates of the point lose precision.
    """
    f = g1.standard_map()
    u, v = f(g2.start), f(g2.end)
    if u is INFINITY or v is INFINITY or u * v >= 0:
        return None
    c = (u + v) / 2
    R = abs(v - u) / 2
    cos = -c / R if v < u else c / R
    angle = math.acos(max(-1.0, min(1.0, cos)))
    return 0.5 * math.log(-u * v), angle, 1 if v < u else -1


def rotation_pi(u: complex) -> Isometry:
    a = _to_i(check_point(u))
    return a @ Isometry(0.0, 1.0, -1.0, 0.0) @ a.inverse()


def axis(m: Isometry) -> DirectedGeodesic:
    return DirectedGeodesic(*m.fixed_points())


def compose_rotations_check(x: Isometry, p: complex, s: complex, tol: float = GEOM_TOL) -> bool:
    """Whether x equals the half-turn about p composed after the half-turn about s."""
    ax = axis(x)
    for z in (p, s):
        if not ax.contains(z):
            raise PointNotOnLine(f"{z} is not on the axis")
    return x.projectively_close(rotation_pi(p) @ rotation_pi(s), tol)


def beardon_length(lx: float, ly: float, alpha: float) -> float:
    """Translation length of a product of two hyperbolics with crossing axes.

    ``alpha`` is the angle at the crossing between the backward direction of
    the first axis and the forward direction of the second, i.e. pi minus the
    forward angle of the two axes.
    """
    rhs = math.cosh(lx / 2) * math.cosh(ly / 2) - math.sinh(lx / 2) * math.sinh(ly / 2) * math.cos(alpha)
    if rhs <= 1 + TRACE_TOL:
        raise DegenerateProduct(f"cosh(l/2) = {rhs} <= 1")
    return 2 * math.acosh(rhs)


@dataclass(frozen=True)
class Reflection:
    """z -> (a conj(z) + b) / (c conj(z) + d) with ad - bc = -1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det >= 0:
            raise GeometryError(f"determinant {det} is not negative")
        if abs(det + 1) >= DET_TOL:
            s = math.sqrt(-det)
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) / s)

    def __call__(self, z):
        if z is INFINITY:
            return INFINITY if self.c == 0 else self.a / self.c
        if isinstance(z, complex):
            w = z.conjugate()
            return (self.a * w + self.b) / (self.c * w + self.d)
        den = self.c * z + self.d
        return INFINITY if den == 0 else (self.a * z + self.b) / den


def reflection_about(g: DirectedGeodesic) -> Reflection:
    f = g.standard_map()
    # f^-1 . diag(-1, 1) . f; f is real so it commutes with conjugation
    a, b, c, d = f.inverse().entries()
    fa, fb, fc, fd = f.entries()
    return Reflection(
        -a * fa + b * fc,
        -a * fb + b * fd,
        -c * fa + d * fc,
        -c * fb + d * fd,
    )


def apply_reflection(r: Reflection, z: complex) -> complex:
    return r(check_point(z))


def perpendicular_at(g: DirectedGeodesic, p: complex) -> DirectedGeodesic:
    """The geodesic through p perpendicular to g, crossing it from right to left."""
    if not g.contains(p):
        raise PointNotOnLine(f"{p} is not on {g}")
    f = g.standard_map()
    r = abs(f(complex(p)))
    finv = f.inverse()
    return DirectedGeodesic(finv(r), finv(-r))


