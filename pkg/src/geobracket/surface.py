"""Hyperbolic surfaces with geodesic boundary as Schottky groups.

Generator ``i`` maps the exterior of its source disk onto the interior of its
target disk.  Disks are Euclidean disks centred on the real line, i.e.
half-planes bounded by geodesics.  When the 2 * rank closed disks are pairwise
disjoint this ping-pong configuration certifies a free, discrete, purely
hyperbolic group whose convex core is a compact surface with geodesic
boundary.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .hyperbolic import (
    GEOM_TOL,
    TRACE_TOL,
    NotHyperbolic,
    INFINITY,
    Isometry,
    Kind,
    axis,
    classify,
    intersect,
    translation_length,
)
from .words import to_text


class InvalidSurface(ValueError):
    pass


class UnknownSurface(KeyError):
    pass


@dataclass(frozen=True)
class Disk:
    center: float
    radius: float

    def contains(self, x: float, tol: float = GEOM_TOL) -> bool:
        return abs(x - self.center) <= self.radius + tol

    def disjoint(self, other: "Disk") -> bool:
        return abs(self.center - other.center) > self.radius + other.radius


@dataclass(frozen=True)
class DiskPair:
    source: Disk
    target: Disk


@dataclass(frozen=True)
class SurfaceSpec:
    rank: int
    generators: tuple[Isometry, ...]
    label: str = "custom"
    disks: Optional[tuple[DiskPair, ...]] = None

    def __post_init__(self):
        if self.rank < 2:
            raise InvalidSurface("rank must be at least 2")
        if len(self.generators) != self.rank:
            raise InvalidSurface("need one generator per rank")
        if self.disks is not None and len(self.disks) != self.rank:
            raise InvalidSurface("need one disk pair per generator")

    def word_to_matrix(self, w: Sequence[int]) -> Isometry:
        return word_to_matrix(self, w)


@dataclass
class ValidationReport:
    label: str
    hyperbolic: list[bool]
    ping_pong: bool
    lengths: list[float]
    axis_crossings: dict[str, bool] = field(default_factory=dict)

    @property
    def topology(self) -> str:
        if self.axis_crossings and all(not v for v in self.axis_crossings.values()):
            return "pants" if len(self.lengths) == 2 else "planar"
        if self.axis_crossings and all(self.axis_crossings.values()):
            return "holed-torus" if len(self.lengths) == 2 else "mixed"
        return "mixed"


def schottky_generator(source: Disk, target: Disk) -> Isometry:
    """The map z -> c2 - r1 r2 / (z - c1), exterior of source onto interior of target."""
    c1, r1 = source.center, source.radius
    c2, r2 = target.center, target.radius
    return Isometry(c2, -c1 * c2 - r1 * r2, 1.0, -c1)


def _exact_product(s: SurfaceSpec, w: Sequence[int]) -> tuple:
    a, b, c, d = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
    for x in w:
        p, q, r, t = map(Fraction, s.generators[abs(x) - 1].entries())
        if x < 0:
            p, q, r, t = t, -q, -r, p
        a, b, c, d = a * p + b * r, a * q + b * t, c * p + d * r, c * q + d * t
    return a, b, c, d


def word_to_matrix(s: SurfaceSpec, w: Sequence[int]) -> Isometry:
    """Product of generator matrices, left to right, rounded once at the end."""
    if len(w) == 1:
        g = s.generators[abs(w[0]) - 1]
        return g if w[0] > 0 else g.inverse()
    return Isometry(*map(float, _exact_product(s, w)))


def word_length(s: SurfaceSpec, w: Sequence[int]) -> float:
    """Translation length of the element w.

    The trace is taken before rounding.  For a long conjugate g u g^-1 the
    matrix entries are far larger than the trace, so the trace of the rounded
    matrix would lose most of its digits.
    """
    a, _, _, d = _exact_product(s, w)
    scale = Fraction(1)
    for x in w:
        g = s.generators[abs(x) - 1]
        scale *= Fraction(g.a) * Fraction(g.d) - Fraction(g.b) * Fraction(g.c)
    tr = abs(float(a + d) / math.sqrt(float(scale)))
    if tr <= 2 + TRACE_TOL:
        raise NotHyperbolic(f"|trace| = {tr} <= 2")
    return 2 * math.acosh(tr / 2)


def _check_ping_pong(s: SurfaceSpec, samples: int = 64) -> Optional[str]:
    disks = [d for pair in s.disks for d in (pair.source, pair.target)]
    for i, d1 in enumerate(disks):
        for d2 in disks[i + 1 :]:
            if not d1.disjoint(d2):
                return f"disks {d1} and {d2} overlap"
    for i, (g, pair) in enumerate(zip(s.generators, s.disks)):
        src, tgt = pair.source, pair.target
        # circle of the source goes onto the circle of the target
        for k in range(samples):
            theta = math.pi * (k + 0.5) / samples
            z = complex(src.center + src.radius * math.cos(theta), src.radius * math.sin(theta))
            w = g(z)
            if abs(abs(w - tgt.center) - tgt.radius) > GEOM_TOL * max(1.0, tgt.radius):
                return f"generator {to_text((i + 1,))} does not pair its disks"
        # exterior boundary points land inside the target
        probes = [INFINITY]
        for k in range(1, samples):
            spread = (src.radius + 1.0) * math.tan(math.pi * k / (2 * samples))
            probes.append(src.center + src.radius + spread)
            probes.append(src.center - src.radius - spread)
        for x in probes:
            y = g(x)
            if y is INFINITY or not tgt.contains(y):
                return f"generator {to_text((i + 1,))} fails ping-pong at {x}"
    return None


def validate(s: SurfaceSpec) -> ValidationReport:
    kinds = [classify(g) for g in s.generators]
    for i, k in enumerate(kinds):
        if k is not Kind.HYPERBOLIC:
            raise InvalidSurface(f"NotHyperbolic: generator {to_text((i + 1,))} is {k.value}")
    ping_pong = False
    if s.disks is not None:
        problem = _check_ping_pong(s)
        if problem:
            raise InvalidSurface(f"PingPong: {problem}")
        ping_pong = True
    lengths = [translation_length(g) for g in s.generators]
    crossings = {}
    for i in range(s.rank):
        for j in range(i + 1, s.rank):
            p = intersect(axis(s.generators[i]), axis(s.generators[j]))
            crossings[to_text((i + 1,)) + to_text((j + 1,))] = p is not None
    return ValidationReport(s.label, [True] * s.rank, ping_pong, lengths, crossings)


def _from_lengths(label: str, centers, lengths) -> SurfaceSpec:
    pairs = []
    gens = []
    for (c1, c2), ell in zip(centers, lengths):
        r = abs(c2 - c1) / (2 * math.cosh(ell / 2))
        pair = DiskPair(Disk(c1, r), Disk(c2, r))
        pairs.append(pair)
        gens.append(schottky_generator(pair.source, pair.target))
    return SurfaceSpec(len(gens), tuple(gens), label, tuple(pairs))


# (source centre, target centre) per generator and default generator lengths.
# Pants: the four disks come in the order a-, a+, b-, b+ along the line.
# Holed torus: interleaved order a-, b-, a+, b+ so the generator axes cross.
_BUILTINS = {
    "pants": (((-3.2, -1.0), (1.1, 3.0)), (2.5, 2.8)),
    "holed-torus": (((-3.0, 0.95), (-1.05, 3.1)), (3.2, 3.5)),
}


def builtin(name: str, scale: float = 1.0) -> SurfaceSpec:
    """A shipped surface; ``scale`` multiplies the generator translation lengths."""
    try:
        centers, lengths = _BUILTINS[name]
    except KeyError:
        raise UnknownSurface(name) from None
    s = _from_lengths(name, centers, [scale * ell for ell in lengths])
    validate(s)
    return s


BUILTIN_NAMES = tuple(_BUILTINS)

_CONFIG_FIELDS = {"rank", "generators", "disks", "label"}


def surface_from_dict(data: dict) -> SurfaceSpec:
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise InvalidSurface(f"unknown fields: {sorted(unknown)}")
    for key in ("rank", "generators"):
        if key not in data:
            raise InvalidSurface(f"missing field {key!r}")
    rank = int(data["rank"])
    gens = []
    for row in data["generators"]:
        if len(row) != 4:
            raise InvalidSurface("generators are row-major 2x2 matrices [a, b, c, d]")
        try:
            gens.append(Isometry(*map(float, row)))
        except ValueError as exc:
            raise InvalidSurface(str(exc)) from None
    disks = None
    if data.get("disks") is not None:
        disks = []
        for entry in data["disks"]:
            if set(entry) != {"source", "target"}:
                raise InvalidSurface("each disk pair needs exactly 'source' and 'target'")
            pair = []
            for key in ("source", "target"):
                d = entry[key]
                if set(d) != {"center", "radius"}:
                    raise InvalidSurface("a disk is {'center': x, 'radius': r}")
                pair.append(Disk(float(d["center"]), float(d["radius"])))
            disks.append(DiskPair(*pair))
        disks = tuple(disks)
    s = SurfaceSpec(rank, tuple(gens), str(data.get("label", "custom")), disks)
    validate(s)
    return s


def surface_to_dict(s: SurfaceSpec) -> dict:
    out = {
        "rank": s.rank,
        "label": s.label,
        "generators": [list(g.entries()) for g in s.generators],
    }
    if s.disks is not None:
        out["disks"] = [
            {
                "source": {"center": p.source.center, "radius": p.source.radius},
                "target": {"center": p.target.center, "radius": p.target.radius},
            }
            for p in s.disks
        ]
    return out


def load_surface(ref: str) -> SurfaceSpec:
    """A builtin name or the path of a JSON config file."""
    if ref in _BUILTINS:
        return builtin(ref)
    path = Path(ref)
    if not path.exists():
        raise UnknownSurface(ref)
    return surface_from_dict(json.loads(path.read_text()))
