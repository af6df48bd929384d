"""Exact planar primitives: extended-plane points, chordal metric, cross ratios,
Mobius and anti-Mobius maps, Jordan regions, relative distance.

Points of the extended plane are Python complex numbers plus the tagged value
``INF``.  Infinity is never encoded as a large float; every operation states
how it treats it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    DegenerateMobius,
    DegenerateQuadruple,
    DegenerateSet,
    InfinityNotSupported,
    InvalidScene,
    NotSimplePolygon,
)


class _Infinity:
    """The point at infinity of the extended plane (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("qcpair-INF")


INF = _Infinity()

ExtPoint = Union[complex, _Infinity]


def is_inf(z: ExtPoint) -> bool:
    return isinstance(z, _Infinity)


def as_complex(z: ExtPoint) -> complex:
    if is_inf(z):
        raise InfinityNotSupported("finite point required")
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise InvalidScene(f"non-finite coordinates: {z}")
    return z


def chordal_distance(z: ExtPoint, w: ExtPoint) -> float:
    """Chordal metric chi(z, w) = 2|z-w| / (sqrt(1+|z|^2) sqrt(1+|w|^2)),
    with chi(z, INF) = 2 / sqrt(1+|z|^2).  Symmetric, range [0, 2]."""
    if is_inf(z) and is_inf(w):
        return 0.0
    if is_inf(z):
        return 2.0 / np.sqrt(1.0 + abs(complex(w)) ** 2)
    if is_inf(w):
        return 2.0 / np.sqrt(1.0 + abs(complex(z)) ** 2)
    z, w = complex(z), complex(w)
    return 2.0 * abs(z - w) / (np.sqrt(1.0 + abs(z) ** 2) * np.sqrt(1.0 + abs(w) ** 2))


def _pair_dist(z: ExtPoint, w: ExtPoint, metric: str):
    """Distance factor for cross ratios; None marks an omitted factor at INF."""
    if metric == "chordal":
        return chordal_distance(z, w)
    if is_inf(z) or is_inf(w):
        return None
    return abs(complex(z) - complex(w))


def cross_ratio(a: ExtPoint, b: ExtPoint, c: ExtPoint, d: ExtPoint,
                metric: str = "euclidean") -> float:
    """[a,b,c,d] = d(a,c) d(b,d) / (d(a,d) d(b,c)).

    With the Euclidean metric, factors containing INF are omitted, e.g.
    [a,b,c,INF] = |a-c| / |b-c|.  Finite quadruples give the same value in
    either metric because the chordal normalizations cancel.
    """
    pts = (a, b, c, d)
    for i in range(4):
        for j in range(i + 1, 4):
            zi, zj = pts[i], pts[j]
            if (is_inf(zi) and is_inf(zj)) or (
                    not is_inf(zi) and not is_inf(zj) and complex(zi) == complex(zj)):
                raise DegenerateQuadruple(f"coinciding points at positions {i},{j}")
    num, den = 1.0, 1.0
    for z, w in ((a, c), (b, d)):
        f = _pair_dist(z, w, metric)
        if f is not None:
            num *= f
    for z, w in ((a, d), (b, c)):
        f = _pair_dist(z, w, metric)
        if f is not None:
            den *= f
    return num / den


@dataclass(frozen=True)
class MobiusMap:
    """z -> (az+b)/(cz+d), optionally precomposed with conjugation (anti-Mobius).

    Nondegeneracy requires |ad-bc| > 1e-12 * max(|a|,|b|,|c|,|d|)^2.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    conjugate_first: bool = False

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if abs(det) <= 1e-12 * scale ** 2:
            raise DegenerateMobius(f"ad-bc = {det} below tolerance")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def inversion_conj(cls) -> "MobiusMap":
        """The anti-Mobius involution z -> 1/conj(z)."""
        return cls(0, 1, 1, 0, conjugate_first=True)

    @classmethod
    def similarity(cls, scale: complex, shift: complex = 0) -> "MobiusMap":
        return cls(scale, shift, 0, 1)

    def __call__(self, z: ExtPoint) -> ExtPoint:
        return apply_mobius(self, z)


def apply_mobius(T: MobiusMap, z: ExtPoint) -> ExtPoint:
    """Evaluate T at z.  The pole -d/c maps to INF; INF maps to a/c
    (INF again when c = 0)."""
    if is_inf(z):
        if T.c == 0:
            return INF
        return T.a / T.c
    z = complex(z)
    if T.conjugate_first:
        z = z.conjugate()
    den = T.c * z + T.d
    if den == 0:
        return INF
    return (T.a * z + T.b) / den


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """A Jordan region of the extended plane.  ``complemented`` selects the
    complementary side of the same boundary; the two share their boundary,
    so boundary_dist is insensitive to the flag."""

    complemented: bool = False

    def contains(self, z):
        raise NotImplementedError

    def boundary_dist(self, z):
        raise NotImplementedError

    def complement(self) -> "Region":
        raise NotImplementedError

    def contains_infinity(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class HalfPlane(Region):
    """{z : Re(conj(normal) z) > offset}; the unit normal points into the region.
    INF is a boundary point in the spherical picture, counted as not contained."""

    normal: complex = 1j
    offset: float = 0.0

    def __post_init__(self):
        n = complex(self.normal)
        if n == 0:
            raise InvalidScene("zero normal")
        object.__setattr__(self, "normal", n / abs(n))

    def _coord(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.conj(self.normal) * z).real

    def contains(self, z):
        c = self._coord(z) - self.offset
        return c < 0 if self.complemented else c > 0

    def boundary_dist(self, z):
        return np.abs(self._coord(z) - self.offset)

    def complement(self) -> "HalfPlane":
        return HalfPlane(normal=self.normal, offset=self.offset,
                         complemented=not self.complemented)

    def contains_infinity(self) -> bool:
        return False


@dataclass(frozen=True)
class Disk(Region):
    """Euclidean disk; complemented selects the exterior (which contains INF)."""

    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidScene(f"disk radius {self.radius} must be positive")

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z - self.center)
        return r > self.radius if self.complemented else r < self.radius

    def boundary_dist(self, z):
        z = np.asarray(z, dtype=complex)
        return np.abs(np.abs(z - self.center) - self.radius)

    def complement(self) -> "Disk":
        return Disk(center=self.center, radius=self.radius,
                    complemented=not self.complemented)

    def contains_infinity(self) -> bool:
        return self.complemented


def _segments_intersect(p1, p2, q1, q2) -> bool:
    """Proper or improper intersection of closed segments, exact sign tests."""

    def orient(a, b, c):
        v = ((b - a).conjugate() * (c - a)).imag
        return 0 if v == 0 else (1 if v > 0 else -1)

    def on_seg(a, b, c):
        return (min(a.real, b.real) <= c.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= c.imag <= max(a.imag, b.imag))

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_seg(p1, p2, q1):
        return True
    if o2 == 0 and on_seg(p1, p2, q2):
        return True
    if o3 == 0 and on_seg(q1, q2, p1):
        return True
    if o4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


@dataclass(frozen=True)
class PolyJordan(Region):
    """Simple closed polygon (vertex list, implicitly closed).  Validation runs
    an O(n^2) segment intersection sweep; downstream metrics assume a Jordan
    curve.  complemented selects the unbounded side."""

    vertices: tuple = ()
    positive: bool = True

    def __post_init__(self):
        v = tuple(complex(p) for p in self.vertices)
        if len(v) < 3:
            raise NotSimplePolygon("need at least 3 vertices")
        n = len(v)
        for i in range(n):
            a1, a2 = v[i], v[(i + 1) % n]
            if a1 == a2:
                raise NotSimplePolygon(f"zero-length edge at {i}")
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                b1, b2 = v[j], v[(j + 1) % n]
                if _segments_intersect(a1, a2, b1, b2):
                    raise NotSimplePolygon(f"edges {i} and {j} intersect")
        area2 = sum((v[i].real * v[(i + 1) % n].imag - v[(i + 1) % n].real * v[i].imag)
                    for i in range(n))
        if (area2 > 0) != self.positive:
            v = tuple(reversed(v))
        object.__setattr__(self, "vertices", v)

    def _va(self):
        return np.asarray(self.vertices, dtype=complex)

    def _chunked(self, z, fn):
        """Evaluate fn over flat chunks to bound the nodes x edges memory."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        n_edges = len(self.vertices)
        chunk = max(int(2e6 / max(n_edges, 1)), 1)
        parts = [fn(flat[i:i + chunk]) for i in range(0, flat.size, chunk)]
        return np.concatenate(parts).reshape(z.shape)

    def contains(self, z):
        v = self._va()
        a, b = v, np.roll(v, -1)
        safe = b.imag - a.imag + np.where(b.imag == a.imag, 1e-300, 0.0)

        def crossings(zz):
            zz = zz[:, None]
            cond = (a.imag <= zz.imag) != (b.imag <= zz.imag)
            t = (zz.imag - a.imag) / safe
            xint = a.real + t * (b.real - a.real)
            return np.sum(cond & (xint > zz.real), axis=-1) % 2 == 1

        inside = self._chunked(z, crossings)
        if self.complemented:
            inside = ~inside
        return bool(inside) if np.ndim(z) == 0 else inside

    def boundary_dist(self, z):
        v = self._va()
        a, b = v, np.roll(v, -1)
        ab = b - a
        ab2 = np.abs(ab) ** 2

        def dist(zz):
            zz = zz[:, None]
            t = np.clip(((zz - a) * np.conj(ab)).real / ab2, 0.0, 1.0)
            return np.abs(zz - (a + t * ab)).min(axis=-1)

        return self._chunked(z, dist)

    def complement(self) -> "PolyJordan":
        return PolyJordan(vertices=self.vertices, positive=self.positive,
                          complemented=not self.complemented)

    def contains_infinity(self) -> bool:
        return self.complemented


def boundary_distance(region: Region, z: ExtPoint):
    """Euclidean distance from a finite point to the region boundary.
    Raises InfinityNotSupported for z = INF."""
    if is_inf(z):
        raise InfinityNotSupported("boundary_distance needs a finite point")
    return region.boundary_dist(z) if isinstance(z, np.ndarray) else float(region.boundary_dist(z))


# ---------------------------------------------------------------------------
# relative distance of point sets


def _cloud(points) -> np.ndarray:
    pts = np.asarray([complex(p) for p in points], dtype=complex)
    if pts.size == 0:
        raise DegenerateSet("empty point set")
    return pts


def relative_distance(E: Sequence[ExtPoint], F: Sequence[ExtPoint],
                      metric: str = "euclidean") -> float:
    """dist(E, F) / min(diam E, diam F) for finite point clouds.  A cloud of
    zero diameter raises DegenerateSet."""
    if metric == "chordal":
        Ep, Fp = list(E), list(F)
        dEF = min(chordal_distance(z, w) for z in Ep for w in Fp)
        dE = max(chordal_distance(z, w) for z in Ep for w in Ep)
        dF = max(chordal_distance(z, w) for z in Fp for w in Fp)
    else:
        Ep, Fp = _cloud(E), _cloud(F)
        dEF = np.abs(Ep[:, None] - Fp[None, :]).min()
        dE = np.abs(Ep[:, None] - Ep[None, :]).max()
        dF = np.abs(Fp[:, None] - Fp[None, :]).max()
    m = min(dE, dF)
    if m <= 0:
        raise DegenerateSet("zero-diameter cloud")
    return float(dEF / m)


# ---------------------------------------------------------------------------
# scenes


@dataclass
class Scene:
    """Named regions plus named boundary sample sets, with free-form metadata.
    Sample points must lie on the named region's boundary (tolerance
    1e-9 times the scene diameter)."""

    regions: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)  # name -> (region_name, complex array)
    metadata: dict = field(default_factory=dict)

    def add_region(self, name: str, region: Region) -> "Scene":
        self.regions[name] = region
        return self

    def add_samples(self, name: str, region_name: str, points) -> "Scene":
        if region_name not in self.regions:
            raise InvalidScene(f"unknown region {region_name!r}")
        pts = np.asarray([complex(p) for p in points], dtype=complex)
        self.samples[name] = (region_name, pts)
        return self

    def diameter(self) -> float:
        pts = [p for _, arr in self.samples.values() for p in arr]
        for r in self.regions.values():
            if isinstance(r, Disk):
                pts += [r.center - r.radius, r.center + r.radius]
            elif isinstance(r, PolyJordan):
                pts += list(r.vertices)
        if len(pts) < 2:
            return 1.0
        arr = np.asarray(pts, dtype=complex)
        return float(np.abs(arr[:, None] - arr[None, :]).max())

    def validate(self) -> None:
        tol = 1e-9 * max(self.diameter(), 1.0)
        for name, (rname, pts) in self.samples.items():
            region = self.regions[rname]
            d = np.asarray(region.boundary_dist(pts))
            if d.size and d.max() > tol:
                raise InvalidScene(
                    f"sample set {name!r}: point off the boundary of {rname!r} "
                    f"by {d.max():.3g}")
