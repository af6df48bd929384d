"""Explicit quasiconformal extension constructions: the dyadic piecewise-linear
strip extension, the trapezoid strip extension, the Beurling-Ahlfors integral,
circle lifts, annulus extensions through the exponential chart, and power
maps.  Every construction emits a triangulated PLMap (or a composite of PLMap
pieces and a power map) whose boundary rows reproduce the boundary data at the
mesh vertices exactly.

All extensions are windowed: callers give a finite parameter window, periodic
data wraps exactly, and aperiodic data continues with unit slope outside the
sampled range (a guard margin of two units is expected).  Boundary
homeomorphisms between samples are evaluated by monotone piecewise-linear
interpolation, so the meshes are exactly representable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    CellDistortionTooLarge,
    ImageInsideDisk,
    LogRatioViolation,
    NotAnchored,
    NotIncreasing,
    NotOrientationPreserving,
    OriginExcluded,
    PreconditionSpread,
    QuadratureRangeExceeded,
    RadiusOutOfRange,
    WrongSideOfLine,
)

_PARAM_GRID = 4096  # fixed grid for sup-norm estimates of circle maps


@dataclass(frozen=True)
class Line:
    level: float = 0.0


@dataclass(frozen=True)
class Circle:
    center: complex = 0j
    radius: float = 1.0


@dataclass
class BoundaryHomeo:
    """Sampled boundary homeomorphism with monotone PL interpolation.

    Line carrier: params are x positions, values are image positions on the
    target line; strictly increasing.  With ``period = N`` the map commutes
    with x -> x + N exactly (integer part handled separately so the identity
    h(x + N) = h(x) + N holds to the last bit).

    Circle carrier: params are angles in turns over one period, values are
    image points on the target circle, cyclically monotone.
    """

    carrier: Union[Line, Circle]
    params: np.ndarray
    values: np.ndarray
    period: Optional[int] = None

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        if isinstance(self.carrier, Line):
            self.values = np.asarray(self.values, dtype=float)
            if np.any(np.diff(self.params) <= 0) or np.any(np.diff(self.values) <= 0):
                raise NotIncreasing("line boundary data must be strictly increasing")
            if self.period is not None:
                span = self.params[-1] - self.params[0]
                if span > self.period + 1e-9:
                    raise NotIncreasing("periodic samples must cover at most one period")
        else:
            self.values = np.asarray(self.values, dtype=complex)
            r = np.abs(self.values - self.carrier.center)
            if r.size and (r.max() - r.min()) > 1e-9 * max(self.carrier.radius, 1.0):
                # target circle radius inferred from the data
                pass
            self._angles = _lift_angles(self.params, self.values, self.carrier)

    # -- line evaluation ----------------------------------------------------
    def __call__(self, x):
        if isinstance(self.carrier, Circle):
            return self.image_point(x)
        x = np.asarray(x, dtype=float)
        if self.period is not None:
            n = self.period
            k = np.floor((x - self.params[0]) / n)
            frac = x - k * n
            base = np.interp(frac, self.params, self.values)
            out = base + k * n
        else:
            out = np.interp(x, self.params, self.values)
            lo, hi = self.params[0], self.params[-1]
            out = np.where(x < lo, self.values[0] + (x - lo), out)
            out = np.where(x > hi, self.values[-1] + (x - hi), out)
        return out if out.ndim else float(out)

    def covers(self, lo: float, hi: float) -> bool:
        if self.period is not None:
            return True
        return self.params[0] <= lo and hi <= self.params[-1]

    # -- circle evaluation --------------------------------------------------
    def lift(self, theta):
        """Lifted angle map in turns: increasing, lift(t + 1) = lift(t) + 1."""
        if not isinstance(self.carrier, Circle):
            raise TypeError("lift applies to circle carriers")
        theta = np.asarray(theta, dtype=float)
        k = np.floor(theta - self.params[0])
        frac = theta - k
        ps = np.concatenate([self.params, [self.params[0] + 1.0]])
        vs = np.concatenate([self._angles, [self._angles[0] + 1.0]])
        out = np.interp(frac, ps, vs) + k
        return out if out.ndim else float(out)

    def image_point(self, theta):
        """Point on the target circle at source angle theta (turns)."""
        a = self.lift(theta)
        c = self.carrier.center
        rad = float(np.mean(np.abs(self.values - c)))
        return c + rad * np.exp(2j * np.pi * np.asarray(a))

    def target_radius(self) -> float:
        return float(np.mean(np.abs(self.values - np.asarray(self.carrier.center))))

    @classmethod
    def from_callable(cls, fn: Callable, lo: float, hi: float, n: int,
                      carrier=Line(0.0), period: Optional[int] = None) -> "BoundaryHomeo":
        xs = np.linspace(lo, hi, n)
        if isinstance(carrier, Line):
            return cls(carrier, xs, np.asarray([float(fn(x)) for x in xs]), period)
        return cls(carrier, xs, np.asarray([complex(fn(x)) for x in xs]), period)


def _lift_angles(params: np.ndarray, values: np.ndarray, carrier: Circle) -> np.ndarray:
    """Angles (turns) of circle images, unwrapped to an increasing sequence
    gaining exactly one turn per period."""
    ang = np.angle(np.asarray(values, dtype=complex) - carrier.center) / (2 * np.pi)
    out = [ang[0]]
    for a in ang[1:]:
        a0 = out[-1]
        step = a - a0
        step -= np.floor(step)
        out.append(a0 + step)
    out = np.asarray(out)
    total = out[-1] - out[0]
    if np.any(np.diff(out) <= 0) or total >= 1.0:
        raise NotOrientationPreserving("circle samples are not cyclically monotone")
    return out


# ---------------------------------------------------------------------------
# PL meshes


@dataclass
class PLMap:
    """Triangulated piecewise-linear map: source vertices, positively oriented
    triangles, and image vertices under the same indexing."""

    vertices: np.ndarray
    triangles: np.ndarray
    image_vertices: np.ndarray
    depth: int = 0
    period: Optional[int] = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=complex)
        self.image_vertices = np.asarray(self.image_vertices, dtype=complex)
        self.triangles = np.asarray(self.triangles, dtype=np.int64)
        a = _signed_areas(self.vertices, self.triangles)
        if np.any(a <= 0):
            raise NotIncreasing("source triangulation is degenerate or misoriented")

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def image_areas(self) -> np.ndarray:
        return _signed_areas(self.image_vertices, self.triangles)

    def min_angle_deg(self, side: str = "image") -> float:
        """Smallest triangle angle in degrees on the source or image side.
        No closed-form lower bound is claimed; this reports the measured one."""
        pts = self.image_vertices if side == "image" else self.vertices
        z = pts[self.triangles]
        worst = np.pi
        for i in range(3):
            a = z[:, i]
            b = z[:, (i + 1) % 3]
            c = z[:, (i + 2) % 3]
            u, v = b - a, c - a
            cosang = ((u * np.conj(v)).real / (np.abs(u) * np.abs(v)))
            worst = min(worst, float(np.arccos(np.clip(cosang, -1, 1)).min()))
        return float(np.degrees(worst))

    def evaluate(self, points) -> np.ndarray:
        """Barycentric evaluation of the PL map at points inside the mesh."""
        pts = np.asarray(points, dtype=complex).ravel()
        v, t, w = self.vertices, self.triangles, self.image_vertices
        out = np.full(pts.shape, np.nan + 0j)
        z1, z2, z3 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
        den = ((z2 - z1).conj() * (z3 - z1)).imag
        for i, p in enumerate(pts):
            l2 = ((p - z1).conj() * (z3 - z1)).imag / den
            l3 = ((z2 - z1).conj() * (p - z1)).imag / den
            l1 = 1.0 - l2 - l3
            tol = -1e-9
            inside = (l1 >= tol) & (l2 >= tol) & (l3 >= tol)
            if inside.any():
                k = int(np.argmax(inside))
                out[i] = (l1[k] * w[t[k, 0]] + l2[k] * w[t[k, 1]] + l3[k] * w[t[k, 2]])
        return out if np.ndim(points) else out[0]


def _signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    z1 = vertices[triangles[:, 0]]
    z2 = vertices[triangles[:, 1]]
    z3 = vertices[triangles[:, 2]]
    return 0.5 * ((z2 - z1).conjugate() * (z3 - z1)).imag


def mesh_overlap_free(m: PLMap, rel_tol: float = 1e-9) -> bool:
    """No two image triangles overlap in their interiors (pairwise test with a
    spatial index; shared edges are fine)."""
    from shapely import STRtree
    from shapely.geometry import Polygon

    w = m.image_vertices
    polys = [Polygon([(w[i].real, w[i].imag) for i in tri]) for tri in m.triangles]
    tree = STRtree(polys)
    scale = max(abs(w.real).max(), abs(w.imag).max(), 1.0)
    tol = rel_tol * scale ** 2
    for i, p in enumerate(polys):
        for j in tree.query(p):
            if j <= i:
                continue
            if p.intersection(polys[int(j)]).area > tol:
                return False
    return True


def refine_plmap(m: PLMap, rounds: int = 1) -> PLMap:
    """Split every triangle into four through its edge midpoints.  Midpoint
    images are edge-midpoint images, so the refined mesh represents the same
    piecewise-linear map exactly."""
    v = list(m.vertices)
    w = list(m.image_vertices)
    tris = [tuple(t) for t in m.triangles]
    for _ in range(rounds):
        mid = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            got = mid.get(key)
            if got is None:
                got = len(v)
                mid[key] = got
                v.append((v[i] + v[j]) / 2.0)
                w.append((w[i] + w[j]) / 2.0)
            return got

        out = []
        for i, j, k in tris:
            a, b, c = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            out += [(i, a, c), (a, j, b), (c, b, k), (a, b, c)]
        tris = out
    return PLMap(np.asarray(v), np.asarray(tris, dtype=np.int64), np.asarray(w),
                 depth=m.depth, period=m.period)


def glue_meshes(meshes: Sequence[PLMap], depth: int = 0,
                period: Optional[int] = None, decimals: int = 9) -> PLMap:
    """Concatenate meshes, identifying source vertices that agree to the given
    number of decimals (shared boundary polylines join by vertex identity)."""
    key_to_new = {}
    verts, imgs, tris = [], [], []
    for m in meshes:
        remap = np.empty(len(m.vertices), dtype=np.int64)
        for i, (z, w) in enumerate(zip(m.vertices, m.image_vertices)):
            key = (round(z.real, decimals), round(z.imag, decimals))
            if key not in key_to_new:
                key_to_new[key] = len(verts)
                verts.append(z)
                imgs.append(w)
            remap[i] = key_to_new[key]
        tris.append(remap[m.triangles])
    return PLMap(np.asarray(verts), np.concatenate(tris), np.asarray(imgs),
                 depth=depth, period=period)


# ---------------------------------------------------------------------------
# dyadic strip extension


def dyadic_pl_extend(h, m_max: int, window: tuple = (0, 1)) -> PLMap:
    """Piecewise-linear extension of an increasing line homeomorphism with
    h(n) = n to the strip R x [0, 1], identity on the top line.

    Vertices sit at (k 2^-m, 2^-m) and map to
    (h(k 2^-m), h((k+1) 2^-m) - h(k 2^-m)); each dyadic cell splits into a
    top triangle spanning the upper row and two side triangles.  Levels run to
    ``m_max`` and a final row at y = 0 carries the boundary values themselves,
    so the emitted mesh covers the window's full strip and restricts to h on
    the bottom row.  When h commutes with z -> z + N the mesh does too.
    """
    a, b = int(window[0]), int(window[1])
    if b <= a:
        raise ValueError("empty window")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    hv = h if callable(h) else np.asarray(h)
    for n in range(a, b + 1):
        if abs(float(hv(n)) - n) > 1e-9:
            raise NotAnchored(f"h({n}) = {float(hv(n))!r} is not {n}")
    period = getattr(h, "period", None)

    def h_at(x: float, step: Optional[float]):
        """(h(x), increment) with periodic data reduced to one period first,
        so vertex images commute with integer translations bit for bit."""
        if period is None:
            base = float(hv(x))
            return base, None if step is None else float(hv(x + step)) - base
        k = np.floor(x / period)
        xr = x - k * period
        base = float(hv(xr))
        inc = None if step is None else float(hv(xr + step)) - base
        return base + k * period, inc

    vid = {}
    verts, imgs = [], []
    scale = 2 ** (m_max + 2)

    def node(x: float, y: float, step: Optional[float]) -> int:
        key = (round(x * scale), y)
        got = vid.get(key)
        if got is not None:
            return got
        i = len(verts)
        vid[key] = i
        verts.append(x + 1j * y)
        base, inc = h_at(x, step)
        imgs.append(base + 0j if inc is None else base + 1j * inc)
        return i

    tris = []

    def cell(xl: float, xr: float, ytop: float, ybot: float, top_step: float,
             bot_step: Optional[float]):
        xm = 0.5 * (xl + xr)
        tl = node(xl, ytop, top_step)
        tr = node(xr, ytop, top_step)
        bl = node(xl, ybot, bot_step)
        bm = node(xm, ybot, bot_step)
        br = node(xr, ybot, bot_step)
        tris.append((tl, bm, tr))
        tris.append((tl, bl, bm))
        tris.append((bm, br, tr))

    for m in range(m_max):
        step = 2.0 ** -m
        for k in range(a * 2 ** m, b * 2 ** m):
            cell(k * step, (k + 1) * step, step, step / 2, step, step / 2)
    step = 2.0 ** -m_max
    for k in range(a * 2 ** m_max, b * 2 ** m_max):
        cell(k * step, (k + 1) * step, step, 0.0, step, None)

    mesh = PLMap(np.asarray(verts), np.asarray(tris, dtype=np.int64),
                 np.asarray(imgs), depth=m_max,
                 period=getattr(h, "period", None))
    if np.any(mesh.image_areas() <= 0):
        raise NotIncreasing("boundary data produced a degenerate image triangle")
    return mesh


# ---------------------------------------------------------------------------
# trapezoid strip extension


def _affine_from_triangles(src: Sequence[complex], dst: Sequence[complex]):
    """Complex-affine map z -> a z + b conj(z) + c sending src[i] to dst[i]."""
    z1, z2, z3 = src
    w1, w2, w3 = dst
    e2, e3 = z2 - z1, z3 - z1
    f2, f3 = w2 - w1, w3 - w1
    D = e2 * np.conj(e3) - e3 * np.conj(e2)
    a = (f2 * np.conj(e3) - f3 * np.conj(e2)) / D
    b = (e2 * f3 - e3 * f2) / D
    c = w1 - a * z1 - b * np.conj(z1)
    return a, b, c


def trapezoid_strip_extend(h0, h1, window: tuple = (0, 1), m_max: int = 6,
                           cell_bound: Optional[float] = None) -> PLMap:
    """Extension of a homeomorphism of the two lines y = 0 and y = 1 (bottom
    increasing onto y = 0, top onto y = 1) to the strip.

    Per unit cell the four image corners span a trapezoid; a piecewise-linear
    map straightens each trapezoid onto its unit square, splitting along
    the diagonal from the lower left to the upper right vertex.  The composed
    boundary maps anchor the integers, each half-strip is filled with the
    dyadic extension squeezed into R x [0, 1/2], and the straightening is
    undone on the glued mesh.  With ``cell_bound`` the four corner images of
    each cell must have mutual distances within [1/bound, bound].
    """
    a, b = int(window[0]), int(window[1])
    if b <= a:
        raise ValueError("empty window")
    bot = np.asarray([float(h0(n)) for n in range(a, b + 1)])
    top = np.asarray([float(h1(n)) for n in range(a, b + 1)])
    if np.any(np.diff(bot) <= 0) or np.any(np.diff(top) <= 0):
        raise NotIncreasing("boundary data must be increasing")
    if cell_bound is not None:
        for n in range(a, b):
            corners = np.asarray([bot[n - a], bot[n - a + 1],
                                  top[n - a] + 1j, top[n - a + 1] + 1j])
            d = np.abs(corners[:, None] - corners[None, :])
            d = d[np.triu_indices(4, 1)]
            if d.max() > cell_bound or d.min() < 1.0 / cell_bound:
                raise CellDistortionTooLarge(
                    f"cell [{n},{n + 1}]: corner distances in "
                    f"[{d.min():.3g}, {d.max():.3g}] exceed bound {cell_bound}")

    def _straighten(h):
        def omega(x):
            x = float(x)
            n = int(np.floor(x))
            lo, hi = float(h(n)), float(h(n + 1))
            return n + (float(h(x)) - lo) / (hi - lo)

        return omega

    omega0, omega1 = _straighten(h0), _straighten(h1)
    if getattr(h0, "period", None) is not None:
        omega0.period = h0.period  # type: ignore[attr-defined]
    if getattr(h1, "period", None) is not None:
        omega1.period = h1.period  # type: ignore[attr-defined]

    mesh_bot = dyadic_pl_extend(omega0, m_max, (a, b))
    mesh_top = dyadic_pl_extend(omega1, m_max, (a, b))
    # squeeze the bottom extension into R x [0, 1/2] and mirror the top one
    low = PLMap(mesh_bot.vertices.real + 0.5j * mesh_bot.vertices.imag,
                mesh_bot.triangles,
                mesh_bot.image_vertices.real + 0.5j * mesh_bot.image_vertices.imag,
                depth=m_max)
    up = PLMap(mesh_top.vertices.real + 1j * (1.0 - 0.5 * mesh_top.vertices.imag),
               mesh_top.triangles[:, ::-1],
               mesh_top.image_vertices.real + 1j * (1.0 - 0.5 * mesh_top.image_vertices.imag),
               depth=m_max)
    glued = glue_meshes([low, up], depth=m_max,
                        period=getattr(h0, "period", None))

    # undo the trapezoid straightening on the image vertices
    imgs = glued.image_vertices.copy()
    cell_maps = []
    for n in range(a, b):
        i = n - a
        p00, p10 = bot[i] + 0j, bot[i + 1] + 0j
        p01, p11 = top[i] + 1j, top[i + 1] + 1j
        lowmap = _affine_from_triangles([n, n + 1, n + 1 + 1j], [p00, p10, p11])
        upmap = _affine_from_triangles([n + 0j, n + 1 + 1j, n + 1j], [p00, p11, p01])
        cell_maps.append((lowmap, upmap))
    u, v = imgs.real, imgs.imag
    cells = np.clip(np.floor(u).astype(int), a, b - 1)
    out = np.empty_like(imgs)
    for i, (w, n) in enumerate(zip(imgs, cells)):
        lowmap, upmap = cell_maps[n - a]
        am, bm, cm = lowmap if (w.real - n) >= w.imag else upmap
        out[i] = am * w + bm * np.conj(w) + cm
    return PLMap(glued.vertices, glued.triangles, out, depth=m_max,
                 period=glued.period)


# ---------------------------------------------------------------------------
# Beurling-Ahlfors extension


def ba_extend(h, points, n_nodes: int = 129) -> np.ndarray:
    """Beurling-Ahlfors extension of an increasing line homeomorphism,
    sampled at the given points of the closed upper half-plane:

        u(x, y) = (1/2) int_0^1 [h(x + ty) + h(x - ty)] dt,
        v(x, y) = (1/2) int_0^1 [h(x + ty) - h(x - ty)] dt,

    by composite Simpson quadrature with a fixed odd node count.  Points on
    the real line return the boundary trace (h(x), 0)."""
    if n_nodes % 2 == 0:
        raise ValueError("Simpson rule needs an odd node count")
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if np.any(pts.imag < 0):
        raise WrongSideOfLine("evaluation points must satisfy Im z >= 0")
    if isinstance(h, BoundaryHomeo):
        lo = float((pts.real - pts.imag).min())
        hi = float((pts.real + pts.imag).max())
        if not h.covers(lo, hi):
            raise QuadratureRangeExceeded(
                f"boundary samples cover [{h.params[0]}, {h.params[-1]}], "
                f"need [{lo}, {hi}]")
    t = np.linspace(0.0, 1.0, n_nodes)
    w = np.ones(n_nodes)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    w *= (t[1] - t[0]) / 3.0
    out = np.empty(pts.shape, dtype=complex)
    for i, p in enumerate(pts):
        x, y = p.real, p.imag
        if y == 0.0:
            out[i] = complex(float(h(x)), 0.0)
            continue
        hp = np.asarray([float(h(x + tt * y)) for tt in t])
        hm = np.asarray([float(h(x - tt * y)) for tt in t])
        u = 0.5 * float(np.dot(w, hp + hm))
        v = 0.5 * float(np.dot(w, hp - hm))
        out[i] = complex(u, v)
    return out if np.ndim(points) else out[0]


# ---------------------------------------------------------------------------
# circle lifts


@dataclass
class LiftPair:
    """Lifts F, G of two circle homeomorphisms under theta -> e^{2 pi i theta},
    with G corrected by the integer minimizing the sup gap.  The gap obeys
    sup|F - G| <= (1/2) sup|f - g| on the circle."""

    F: Callable
    G: Callable
    sup_gap: float
    sup_norm_fg: float
    correction: int


def circle_lift_pair(f: BoundaryHomeo, g: BoundaryHomeo) -> LiftPair:
    """Lift two orientation-preserving circle homeomorphisms so their lifts
    stay uniformly close; sup norms are evaluated on a fixed 4096-point
    parameter grid."""
    for m in (f, g):
        if not isinstance(m.carrier, Circle):
            raise NotOrientationPreserving("circle carriers required")
    thetas = np.arange(_PARAM_GRID) / _PARAM_GRID
    F = f.lift(thetas)
    G = g.lift(thetas)
    D = F - G
    k = int(np.round((D.max() + D.min()) / 2.0))
    best_k, best = k, np.inf
    for kk in (k - 1, k, k + 1):
        gap = float(np.abs(D - kk).max())
        if gap < best:
            best_k, best = kk, gap
    fg = float(np.abs(f.image_point(thetas) - g.image_point(thetas)).max())
    kfix = best_k

    def Gc(t):
        return g.lift(t) + kfix

    return LiftPair(F=f.lift, G=Gc, sup_gap=best, sup_norm_fg=fg, correction=kfix)


# ---------------------------------------------------------------------------
# annulus extensions


@dataclass
class AnnulusExtension:
    """Result of an annulus extension: the descended mesh on the annulus and
    the periodic strip mesh it came from (exact in the log chart)."""

    annulus_mesh: PLMap
    strip_mesh: PLMap
    N: int
    strip_h_bot: Optional[Callable] = None
    strip_h_top: Optional[Callable] = None


def _descend_strip(strip: PLMap, N: int, h_bot: Callable, h_top: Callable,
                   src_post: Optional[Callable] = None,
                   img_post: Optional[Callable] = None) -> PLMap:
    """Map a periodic strip mesh through psi(z) = e^{-2 pi i z / N} (optionally
    post-composing radial reparametrizations on either side), refining until
    the straight-edge source triangulation is embedded.  Refined boundary rows
    re-sample the true boundary maps so the trace stays exact."""
    psi = lambda z: np.exp(-2j * np.pi * np.asarray(z) / N)
    first = max(0, int(np.ceil(np.log2(16.0 / N))))
    for rounds in range(first, first + 5):
        fine = refine_plmap(strip, rounds) if rounds else strip
        if rounds:
            imgs = fine.image_vertices.copy()
            bot = fine.vertices.imag == 0.0
            imgs[bot] = np.asarray([h_bot(x) for x in fine.vertices.real[bot]])
            top = fine.vertices.imag == 1.0
            imgs[top] = np.asarray([h_top(x) for x in fine.vertices.real[top]]) + 1j
        else:
            imgs = fine.image_vertices
        sv = psi(fine.vertices)
        iv = psi(imgs)
        if src_post is not None:
            sv = src_post(sv)
        if img_post is not None:
            iv = img_post(iv)
        if np.all(_signed_areas(sv, fine.triangles) > 0):
            return PLMap(sv, fine.triangles, iv, depth=strip.depth)
    raise NotIncreasing("annulus descent never produced an embedded mesh")


def _neg_lift(h: BoundaryHomeo) -> Callable:
    """Lift under z -> e^{-2 pi i z}: F(t) = -lift(-t)."""
    return lambda t: -np.asarray(h.lift(-np.asarray(t)))


def annulus_extend_unit(h_inner: BoundaryHomeo, h_outer: BoundaryHomeo,
                        N: int, m_max: int = 6,
                        spread_bound: Optional[float] = None) -> AnnulusExtension:
    """Extension of a homeomorphism of S(0,1) u S(0, e^{2 pi/N}) preserving
    each circle, via lifting under psi(z) = e^{-2 pi i z / N} to a periodic
    strip map and the trapezoid strip extension.  The resulting dilatation
    does not depend on N.

    With ``spread_bound`` the images of the four endpoints of each 1/N arc
    pair must have mutual distances within [1/(aN), a/N]."""
    if N < 2:
        raise RadiusOutOfRange("N must be at least 2")
    L = float(np.exp(2 * np.pi / N))
    if abs(h_outer.carrier.radius - L) > 1e-9 * L:
        raise RadiusOutOfRange(f"outer carrier radius {h_outer.carrier.radius} != e^(2 pi/N)")
    if spread_bound is not None:
        a = spread_bound
        for t in range(N):
            ths = np.asarray([t / N, (t + 1) / N])
            pts = np.concatenate([
                np.asarray(h_inner.image_point(ths)),
                np.asarray(h_outer.image_point(ths))])
            d = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(4, 1)]
            if d.max() > a / N or d.min() < 1.0 / (a * N):
                raise PreconditionSpread(
                    f"arc {t}: endpoint image distances in [{d.min():.3g}, {d.max():.3g}] "
                    f"violate [{1.0 / (a * N):.3g}, {a / N:.3g}]")

    F = _neg_lift(h_inner)
    # g(z) = L^{-1} h(L z) on the unit circle shares h_outer's lift
    G0 = _neg_lift(h_outer)
    thetas = np.arange(_PARAM_GRID) / _PARAM_GRID
    D = np.asarray(F(thetas)) - np.asarray(G0(thetas))
    k = int(np.round((D.max() + D.min()) / 2.0))
    gaps = {kk: float(np.abs(D - kk).max()) for kk in (k - 1, k, k + 1)}
    k = min(gaps, key=gaps.get)

    def h_bot(x):
        return float(N * np.asarray(F(np.asarray(x) / N)))

    def h_top(x):
        return float(N * (np.asarray(G0(np.asarray(x) / N)) + k))

    h_bot.period = N  # type: ignore[attr-defined]
    strip = trapezoid_strip_extend(h_bot, h_top, (0, N), m_max)
    strip.period = N
    annulus = _descend_strip(strip, N, h_bot, h_top)
    return AnnulusExtension(annulus_mesh=annulus, strip_mesh=strip, N=N,
                            strip_h_bot=h_bot, strip_h_top=h_top)


def radial_blend(L: float, N: int) -> Callable:
    """Radial interpolation between the identity on the unit circle and the
    scaling of S(0, L) onto S(0, e^{2 pi/N}):
    r e^{i theta} -> (1 + (e^{2 pi/N} - 1)/(L - 1) (r - 1)) e^{i theta}."""
    c = (np.exp(2 * np.pi / N) - 1.0) / (L - 1.0)

    def sigma(z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return (1.0 + c * (r - 1.0)) * z / r

    return sigma


def _radial_blend_inv(L: float, N: int) -> Callable:
    c = (np.exp(2 * np.pi / N) - 1.0) / (L - 1.0)

    def sigma_inv(z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return (1.0 + (r - 1.0) / c) * z / r

    return sigma_inv


def annulus_extend_general(h_inner: BoundaryHomeo, h_outer: BoundaryHomeo,
                           M: float, m_max: int = 6) -> AnnulusExtension:
    """Extension for boundary radii S(0,1) u S(0,L) -> S(0,1) u S(0,L') with
    L below a caller bound M: pick N with (M-1)/N <= L-1 < (M-1)/(N-1),
    conjugate by the radial interpolations onto the unit-modulus annulus of
    exponent N, extend there, and undo the conjugation."""
    L = float(h_outer.carrier.radius)
    Lp = h_outer.target_radius()
    if not 1.0 < L < M:
        raise RadiusOutOfRange(f"need 1 < L < M, got L = {L}, M = {M}")
    N = max(2, int(np.ceil((M - 1.0) / (L - 1.0))))
    Lu = float(np.exp(2 * np.pi / N))
    sigma_inv = _radial_blend_inv(L, N)
    tau_inv = _radial_blend_inv(Lp, N)
    # conjugated outer data lives on S(0, e^{2 pi/N}) and lands on it as well
    outer_c = BoundaryHomeo(Circle(0j, Lu), h_outer.params,
                            np.asarray(h_outer.values) * (Lu / Lp))
    ext = annulus_extend_unit(h_inner, outer_c, N, m_max)
    mesh = _descend_strip(ext.strip_mesh, N, ext.strip_h_bot, ext.strip_h_top,
                          src_post=sigma_inv, img_post=tau_inv)
    return AnnulusExtension(annulus_mesh=mesh, strip_mesh=ext.strip_mesh, N=N,
                            strip_h_bot=ext.strip_h_bot, strip_h_top=ext.strip_h_top)


@dataclass
class RingPowerMap:
    """Radial power map on a centered ring: r e^{i theta} -> R (r/R)^beta e^{i theta};
    it fixes S(0, R) pointwise and is max(beta, 1/beta)-quasiconformal."""

    R: float
    beta: float

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise OriginExcluded("power map is undefined at the origin")
        r = np.abs(z)
        out = self.R * (r / self.R) ** self.beta * z / r
        return out if out.ndim else complex(out)


def power_map(beta: float) -> Callable:
    """r e^{i theta} -> r^beta e^{i theta}; fixes the unit circle."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    return RingPowerMap(R=1.0, beta=beta)


@dataclass
class AnnulusCompositeMap:
    """Three-ring composite: collar extensions near both boundary circles and
    a radial power map on the middle ring, continuous across the seams."""

    inner: AnnulusExtension      # on A(0; 1, R)
    middle: RingPowerMap         # on A(0; R, L/R)
    outer: AnnulusExtension      # on A(0; L/R, L), already unscaled
    R: float
    L: float
    L_prime: float
    beta: float

    def __call__(self, z):
        z = complex(z)
        r = abs(z)
        if r <= self.R:
            return complex(self.inner.annulus_mesh.evaluate(z))
        if r < self.L / self.R:
            return self.middle(z)
        return complex(self.outer.annulus_mesh.evaluate(z))


def annulus_extend_large(h_inner: BoundaryHomeo, h_outer: BoundaryHomeo,
                         c0: float, m_max: int = 5):
    """Extension for large radius ratios under the log-ratio pinching
    1/c0 <= log L' / log L <= c0.  Splits the annulus into two collar rings,
    extended against the identity and a scaling, and a middle ring carried by
    the power map with exponent solving (L/R^2)^beta = L'/R^2.  Ratios L < 2
    delegate to the bounded-radius construction."""
    L = float(h_outer.carrier.radius)
    Lp = h_outer.target_radius()
    ratio = np.log(Lp) / np.log(L)
    if not (1.0 / c0 - 1e-12 <= ratio <= c0 + 1e-12):
        raise LogRatioViolation(f"log L'/log L = {ratio:.4g} outside [1/{c0}, {c0}]")
    if L < 2.0:
        return annulus_extend_general(h_inner, h_outer, M=2.0, m_max=m_max)
    R = 0.5 * (1.0 + min(2.0, Lp) ** 0.5)
    beta = float(np.log(Lp / R ** 2) / np.log(L / R ** 2))
    # inner collar A(0;1,R): h_inner on the unit circle, identity on S(0,R)
    ident_R = BoundaryHomeo(Circle(0j, R), h_inner.params,
                            R * np.exp(2j * np.pi * h_inner.params))
    inner_ext = annulus_extend_general(h_inner, ident_R, M=2.0, m_max=m_max)
    # outer collar A(0;L/R,L): scaling z -> (L'/L) z on the inner circle,
    # h_outer on S(0,L); conjugate by z -> z R/L to the unit picture
    params = h_outer.params
    ident_unit = BoundaryHomeo(Circle(0j, 1.0), params,
                               np.exp(2j * np.pi * params))
    outer_scaled = BoundaryHomeo(Circle(0j, R), params,
                                 np.asarray(h_outer.values) * (R / Lp))
    outer_ext = annulus_extend_general(ident_unit, outer_scaled, M=2.0, m_max=m_max)
    om = outer_ext.annulus_mesh
    unscaled = PLMap(om.vertices * (L / R), om.triangles,
                     om.image_vertices * (Lp / R), depth=m_max)
    outer_ext = AnnulusExtension(annulus_mesh=unscaled,
                                 strip_mesh=outer_ext.strip_mesh, N=outer_ext.N)
    return AnnulusCompositeMap(inner=inner_ext, middle=RingPowerMap(R=R, beta=beta),
                               outer=outer_ext, R=R, L=L, L_prime=Lp, beta=beta)


# ---------------------------------------------------------------------------
# embedding diagnostics


@dataclass
class StripBandReport:
    """Height band of the image of the top line for an embedding of the two
    lines that fixes the bottom one, with the empirical eta(1) and the flag
    for the band [1/eta(1), eta(1)]."""

    band: tuple
    eta1: float
    within_band: bool


def strip_bounds_check(params: np.ndarray, top_images: np.ndarray,
                       triple_budget: int = 40000, seed: int = 0) -> StripBandReport:
    """Given an embedding of R x {0, 1} sampled at ``params`` (identity on the
    bottom line, ``top_images`` for the top one), returns the [min, max]
    imaginary part of the top images and checks it against the band implied by
    the empirical distortion at ratio 1."""
    from .distortion import qs_profile

    params = np.asarray(params, dtype=float)
    top = np.asarray(top_images, dtype=complex)
    if np.any(top.imag <= 0):
        raise WrongSideOfLine("top images must lie in the open upper half-plane")
    band = (float(top.imag.min()), float(top.imag.max()))
    pairs = [(complex(x, 0.0), complex(x, 0.0)) for x in params]
    pairs += [(complex(x, 1.0), w) for x, w in zip(params, top)]
    prof = qs_profile(pairs, "euclidean", "euclidean", triple_budget, seed)
    eta1 = prof.eta1
    ok = bool(np.isfinite(eta1)) and (1.0 / eta1 <= band[0] + 1e-12) and (band[1] <= eta1 + 1e-12)
    return StripBandReport(band=band, eta1=float(eta1), within_band=ok)


def annuli_identity_check(outer_images, L: float):
    """For an embedding of S(0,1) u S(0,L) that fixes the unit circle and
    sends the outer circle outside the closed unit disk, returns
    (L', K_gap) with L' = min |f| over the outer images and
    K_gap = (max |f| - L') / (L' - 1)."""
    imgs = np.asarray(outer_images, dtype=complex)
    r = np.abs(imgs)
    if r.min() <= 1.0:
        raise ImageInsideDisk("outer image meets the closed unit disk")
    Lp = float(r.min())
    K_gap = float((r.max() - Lp) / (Lp - 1.0))
    return Lp, K_gap
