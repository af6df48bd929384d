"""Constructors for the worked configurations: parallel half-planes,
concentric circles, perturbed quasidisk variants, the wormhole pair,
relatively separated quasidisks, Lipschitz supergraphs, the cusp
straightening pipeline, and the two-squares family.  Each bundle carries its
analytic expectations as machine-checkable entries.

Unbounded configurations are truncated to the default window [-8, 8]^2; all
quasidisk perturbations are deterministic truncated trigonometric polylines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .distortion import increasing_qs_ratio, pair_verdict, quasicircle_constants
from .errors import AlphaOutOfRange, BadRadii, NotPositive
from .extend import ba_extend
from .geom import Disk, HalfPlane, PolyJordan, Scene
from .gridmetric import GridSpec, metric_table, relative_hyperbolic_distance

WINDOW = 8.0  # half-side of the default truncation window for unbounded scenes
WINDOW_SIDE = 2 * WINDOW


@dataclass
class Expected:
    """One machine-checkable expectation: a target value with relative
    tolerance, or a two-sided band."""

    quantity: str
    params: dict = field(default_factory=dict)
    value: Optional[float] = None
    band: Optional[tuple] = None
    rel_tol: float = 0.05
    anchor: str = ""


@dataclass
class ScenarioBundle:
    name: str
    scene: Scene
    expected: list
    params: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict, repr=False)

    def grid(self) -> GridSpec:
        g = self.params["grid"]
        return GridSpec(bbox=tuple(g["bbox"]), h=g["h"],
                        connectivity=g.get("connectivity", 16))


@dataclass
class CheckResult:
    scenario: str
    quantity: str
    measured: float
    expected: Optional[float]
    band: Optional[tuple]
    passed: bool
    anchor: str = ""


# ---------------------------------------------------------------------------
# simple exact scenarios


def parallel_halfplanes(gap: float, h: float = 0.02) -> ScenarioBundle:
    """V the lower half-plane, U the half-plane above height ``gap``; the
    relative metric on the real line is exactly |z - w| / gap."""
    if not gap > 0:
        raise NotPositive("gap must be positive")
    V = HalfPlane(normal=-1j, offset=0.0)
    U = HalfPlane(normal=1j, offset=gap)
    scene = Scene().add_region("U", U).add_region("V", V)
    xs = np.linspace(-6.0, 6.0, 9)
    scene.add_samples("S", "V", xs.astype(complex))
    exp = [
        Expected("d_vu", dict(z=0.0, w=1.0), value=1.0 / gap, rel_tol=0.03,
                 anchor="parallel lines: d = |z-w|/gap"),
        Expected("d_vu", dict(z=0.0, w=3.0), value=3.0 / gap, rel_tol=0.03,
                 anchor="parallel lines: d = |z-w|/gap"),
        Expected("d_vu", dict(z=-2.0, w=5.0), value=7.0 / gap, rel_tol=0.03,
                 anchor="parallel lines: d = |z-w|/gap"),
        Expected("d_vu", dict(z=1.0, w=1.0), value=0.0, rel_tol=0.0,
                 anchor="zero self-distance"),
    ]
    grid = dict(bbox=(-WINDOW, WINDOW, 0.0, gap), h=h, connectivity=16)
    return ScenarioBundle("parallel_halfplanes", scene, exp,
                          params=dict(gap=gap, grid=grid))


def concentric_annulus(r: float, R: float, h: float = 0.02) -> ScenarioBundle:
    """V the disk of radius r, U the exterior of the disk of radius R; the
    relative metric on S(0, r) is (2R/(R+r)) arc / (R - r), which pins the
    band [1, pi] |z-w| / (R - r)."""
    if not 0 < r < R:
        raise BadRadii(f"need 0 < r < R, got ({r}, {R})")
    V = Disk(center=0j, radius=r)
    U = Disk(center=0j, radius=R, complemented=True)
    scene = Scene().add_region("U", U).add_region("V", V)
    scene.metadata["reference_radii"] = f"{r},{R}"
    th = 2 * np.pi * np.arange(12) / 12
    scene.add_samples("S", "V", r * np.exp(1j * th))

    def sharp(z, w):
        ang = abs(np.angle(complex(w) / complex(z)))
        return (2 * R / (R + r)) * (r * ang) / (R - r)

    z1, w1 = r + 0j, -r + 0j
    exp = [
        Expected("d_vu", dict(z=z1, w=w1), value=sharp(z1, w1), rel_tol=0.05,
                 anchor="concentric circles: d = (2R/(R+r)) arc/(R-r)"),
        Expected("d_vu", dict(z=r + 0j, w=r + 0j), value=0.0, rel_tol=0.0,
                 anchor="zero self-distance"),
        Expected("band_pairs_violation", dict(n_pairs=20, seed=3,
                                              band_lo=1.0, band_hi=np.pi),
                 band=(0.0, 1.05), rel_tol=0.05,
                 anchor="concentric circles: band [1, pi] |z-w|/(R-r), "
                        "worst violation factor within grid slack"),
        Expected("d_uv", dict(z=R + 0j, w=-R + 0j),
                 value=2 * np.pi * r * R / (R ** 2 - r ** 2), rel_tol=0.05,
                 anchor="swapped roles with the diameter-ratio factor"),
    ]
    m = R * 1.05 + 2 * h
    grid = dict(bbox=(-m, m, -m, m), h=h, connectivity=16)
    return ScenarioBundle("concentric_annulus", scene, exp,
                          params=dict(r=r, R=R, grid=grid, sharp_factor=2 * R / (R + r)))


# ---------------------------------------------------------------------------
# perturbed quasidisk scenarios


def _trig_profile(seed: int, harmonics=(3, 7, 13)) -> Callable:
    """Deterministic trigonometric profile with values in (0.02, 0.98)."""
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0, 2 * np.pi, size=len(harmonics))
    amps = np.asarray([0.25, 0.14, 0.07])[: len(harmonics)]

    def p(x):
        x = np.asarray(x, dtype=float)
        out = 0.5 + sum(a * np.sin(k * x + ph) for a, k, ph in zip(amps, harmonics, phases))
        return out

    return p


def _graph_region_below(xs: np.ndarray, ys: np.ndarray, floor: float) -> PolyJordan:
    """Region under a polyline graph, closed by a rectangle down to ``floor``."""
    pts = [complex(x, y) for x, y in zip(xs, ys)]
    pts += [complex(xs[-1], floor), complex(xs[0], floor)]
    return PolyJordan(vertices=tuple(pts))


def _graph_region_above(xs: np.ndarray, ys: np.ndarray, roof: float) -> PolyJordan:
    pts = [complex(x, y) for x, y in zip(xs, ys)]
    pts += [complex(xs[-1], roof), complex(xs[0], roof)]
    return PolyJordan(vertices=tuple(pts))


def near_parallel_quasidisks(K: float, L: float, seed: int = 1, amplitude: float = 1.0,
                             h: float = 0.02, n_boundary: int = 257) -> ScenarioBundle:
    """Unbounded quasidisks with boundaries inside the horizontal bands
    [-LK, 0] and [L, L + LK]; the relative metric is comparable to
    |z - w| / dist(boundaries).  With amplitude 0 this degenerates to the
    parallel half-plane case and the comparison becomes exact."""
    if K < 1 or L <= 0:
        raise NotPositive("need K >= 1 and L > 0")
    xs = np.linspace(-WINDOW, WINDOW, n_boundary)
    pV = _trig_profile(seed)
    pU = _trig_profile(seed + 1)
    yV = -L * K * (0.5 + amplitude * (pV(xs) - 0.5))
    yU = L + L * K * (0.5 + amplitude * (pU(xs) - 0.5))
    V = _graph_region_below(xs, yV, -L * K - WINDOW)
    U = _graph_region_above(xs, yU, L + L * K + WINDOW)
    scene = Scene().add_region("U", U).add_region("V", V)
    si = np.linspace(n_boundary // 4, 3 * n_boundary // 4, 8, dtype=int)
    samples = xs[si] + 1j * yV[si]
    scene.add_samples("S", "V", samples)
    dist = _polyline_gap(xs, yV, yU)
    exp = [Expected("ratio_spread", dict(scale=dist), band=(1.0, 25.0),
                    anchor="near-parallel band: d dist/|z-w| has bounded spread")]
    grid = dict(bbox=(-WINDOW, WINDOW, float(yV.min() - 2 * h), float(yU.max() + 2 * h)),
                h=h, connectivity=16)
    return ScenarioBundle("near_parallel_quasidisks", scene, exp,
                          params=dict(K=K, L=L, dist=dist, grid=grid,
                                      amplitude=amplitude))


def _polyline_gap(xs, y_lo, y_hi) -> float:
    a = xs + 1j * np.asarray(y_lo)
    b = xs + 1j * np.asarray(y_hi)
    return float(np.abs(a[:, None] - b[None, :]).min())


def near_concentric_quasidisks(K: float, r: float, R: float, seed: int = 2,
                               amplitude: float = 1.0, h: float = 0.02,
                               n_boundary: int = 257) -> ScenarioBundle:
    """Quasidisks with boundaries inside the radial bands
    [max(r - K(R-r), r/K), r] and [R, R + K(R-r)]."""
    if not 0 < r < R:
        raise BadRadii(f"need 0 < r < R, got ({r}, {R})")
    th = np.linspace(0.0, 2 * np.pi, n_boundary, endpoint=False)
    pV = _trig_profile(seed, harmonics=(3, 5, 7))
    pU = _trig_profile(seed + 1, harmonics=(4, 6, 9))
    depth = min(K * (R - r), r * (1 - 1 / K)) if K > 1 else 0.0
    rV = r - depth * amplitude * pV(th)
    rU = R + K * (R - r) * amplitude * pU(th)
    V = PolyJordan(vertices=tuple(rV * np.exp(1j * th)))
    U = PolyJordan(vertices=tuple(rU * np.exp(1j * th)), complemented=True)
    scene = Scene().add_region("U", U).add_region("V", V)
    si = np.arange(0, n_boundary, n_boundary // 8)[:8]
    scene.add_samples("S", "V", rV[si] * np.exp(1j * th[si]))
    a = rV * np.exp(1j * th)
    b = rU * np.exp(1j * th)
    dist = float(np.abs(a[:, None] - b[None, :]).min())
    exp = [Expected("ratio_spread", dict(scale=dist), band=(1.0, 25.0),
                    anchor="near-concentric band: d dist/|z-w| has bounded spread")]
    m = float(rU.max() + 2 * h)
    grid = dict(bbox=(-m, m, -m, m), h=h, connectivity=16)
    return ScenarioBundle("near_concentric_quasidisks", scene, exp,
                          params=dict(K=K, r=r, R=R, dist=dist, grid=grid))


def wormhole(K: float = 2.0, seed: int = 5, h: float = 0.02,
             n_boundary: int = 257) -> ScenarioBundle:
    """Two unbounded quasidisks separated by a straight chord-arc core with
    distances to each boundary comparable to 1: the relative metric is
    comparable to |z - w| itself."""
    xs = np.linspace(-WINDOW, WINDOW, n_boundary)
    pV = _trig_profile(seed)
    pU = _trig_profile(seed + 3)
    yU = 1.0 + 0.8 * (pU(xs) - 0.5)
    yV = -1.0 - 0.8 * (pV(xs) - 0.5)
    V = _graph_region_below(xs, yV, yV.min() - WINDOW)
    U = _graph_region_above(xs, yU, yU.max() + WINDOW)
    scene = Scene().add_region("U", U).add_region("V", V)
    si = np.linspace(n_boundary // 4, 3 * n_boundary // 4, 8, dtype=int)
    scene.add_samples("S", "V", xs[si] + 1j * yV[si])
    exp = [Expected("ratio_spread", dict(scale=1.0), band=(1.0, 25.0),
                    anchor="wormhole: d comparable to |z-w| across the core")]
    grid = dict(bbox=(-WINDOW, WINDOW, float(yV.min() - 2 * h), float(yU.max() + 2 * h)),
                h=h, connectivity=16)
    return ScenarioBundle("wormhole", scene, exp, params=dict(K=K, grid=grid))


def separated_quasidisks(K: float = 2.0, separation: float = 10.0, seed: int = 7,
                         h: float = 0.01, n_boundary: int = 129) -> ScenarioBundle:
    """Two unit-diameter polygonal quasidisks far apart; the relative metric
    is comparable to |z - w| / dist with a modest spread."""
    th = np.linspace(0.0, 2 * np.pi, n_boundary, endpoint=False)
    pV = _trig_profile(seed, harmonics=(3, 5, 8))
    pU = _trig_profile(seed + 1, harmonics=(4, 7, 9))
    rV = 0.5 * (1.0 - 0.3 * pV(th))
    rU = 0.5 * (1.0 - 0.3 * pU(th))
    c = separation + 1.0
    V = PolyJordan(vertices=tuple(rV * np.exp(1j * th)))
    U = PolyJordan(vertices=tuple(c + rU * np.exp(1j * th)))
    scene = Scene().add_region("U", U).add_region("V", V)
    si = np.arange(0, n_boundary, n_boundary // 8)[:8]
    scene.add_samples("S", "V", rV[si] * np.exp(1j * th[si]))
    a = rV * np.exp(1j * th)
    b = c + rU * np.exp(1j * th)
    dist = float(np.abs(a[:, None] - b[None, :]).min())
    exp = [Expected("ratio_spread", dict(scale=dist), band=(1.0, 20.0),
                    anchor="relatively separated: spread of d dist/|z-w| at most 20")]
    grid = dict(bbox=(-1.5, 1.5, -1.5, 1.5), h=h, connectivity=16)
    return ScenarioBundle("separated_quasidisks", scene, exp,
                          params=dict(K=K, separation=separation, dist=dist, grid=grid))


# ---------------------------------------------------------------------------
# Lipschitz graphs


def lipschitz_graph_pair(f: Callable, L: float, a: float = 1.0, h: float = 0.02,
                         window: float = WINDOW, n_boundary: int = 513) -> ScenarioBundle:
    """V the lower half-plane and U the region above the graph of a positive
    Lipschitz function; the relative metric between real points is comparable
    to the integral of 1/f, and the quasisymmetry of an antiderivative of 1/f
    decides whether the pair straightens."""
    xs = np.linspace(-window, window, n_boundary)
    fv = np.asarray([float(f(x)) for x in xs])
    if np.any(fv <= 0):
        raise NotPositive("f must be positive on the window")
    V = HalfPlane(normal=-1j, offset=0.0)
    U = _graph_region_above(xs, fv, float(fv.max() + window))
    scene = Scene().add_region("U", U).add_region("V", V)
    sx = np.linspace(-window / 2, window / 2, 7)
    scene.add_samples("S", "V", sx.astype(complex))

    fine = np.linspace(-window, window, 16 * (n_boundary - 1) + 1)
    ff = np.asarray([float(f(x)) for x in fine])
    cum = np.concatenate([[0.0], np.cumsum((1 / ff[1:] + 1 / ff[:-1]) / 2 * np.diff(fine))])
    base = float(np.interp(0.0, fine, cum))
    F = lambda x: float(np.interp(x, fine, cum)) - base

    exp = [Expected("graph_ratio_spread", dict(), band=(1.0, 40.0),
                    anchor="graph pair: d comparable to integral of 1/f"),
           Expected("increasing_qs_sup",
                    dict(domain=(-window / 2, window / 2), step=0.25),
                    band=(1.0, np.inf), rel_tol=0.0,
                    anchor="quasisymmetry quantity of the antiderivative of 1/f; "
                           "finite sup means the pair straightens")]
    grid = dict(bbox=(-window, window, 0.0, float(fv.max() + 2 * h)), h=h,
                connectivity=16)
    return ScenarioBundle("lipschitz_graph_pair", scene, exp,
                          params=dict(L=L, a=a, grid=grid),
                          artifacts=dict(f=f, F=F))


# ---------------------------------------------------------------------------
# cusp straightening


def _cusp_functions(alpha: float):
    two_am2 = 2 * alpha - 2

    def t_of_x(x):
        return 1.0 / (x * (1.0 + x ** two_am2))

    def s_of_t(t):
        t = float(t)
        lo, hi = 1.0 / (2 * t), min(1.0, 1.0 / t)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if t_of_x(mid) > t:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-12 * max(1.0, hi):
                break
        return 0.5 * (lo + hi)

    def h(t):
        at = abs(float(t))
        if at < 0.5:
            return 0.5
        return at * s_of_t(at) ** (alpha - 1)

    return t_of_x, s_of_t, h


def cusp_straighten(alpha: float, n_cusp: int = 200, x_min: float = 0.02) -> ScenarioBundle:
    """The cusp-to-semicircle pipeline: invert the plane by z -> 1/conj(z),
    which carries the cusp arc {x + i x^alpha} onto the graph of the Lipschitz
    profile h(t) = |t| s(|t|)^(alpha-1) (constant 1/2 near 0); extend the
    antiderivative of 1/h with the Beurling-Ahlfors integral, rescale
    vertically so the graph lands on the line at height one, and invert back.
    Images of the cusp then track the semicircle of radius 1/2 tangent to the
    real axis at the origin.

    The bundle reports the sup distance of the sampled images to the target
    semicircle both in absolute terms and normalized by the default window
    side.  The dilatation of the composite is finite but carries no closed
    form; the measured value is recorded as a regression quantity."""
    if not alpha > 1:
        raise AlphaOutOfRange(f"alpha = {alpha} must exceed 1")
    t_of_x, s_of_t, h = _cusp_functions(alpha)
    xs = np.linspace(1.0, x_min, n_cusp)
    ts = np.asarray([t_of_x(x) for x in xs])
    tmax = float(2 * ts.max() + 10.0)

    # antiderivative of 1/h on a graded grid, dense through the kink at 1/2
    grid_t = np.unique(np.concatenate([
        np.linspace(0.0, 4.0, 20001),
        np.geomspace(4.0, tmax, 40001)]))
    hv = np.asarray([h(t) for t in grid_t])
    cum = np.concatenate([[0.0], np.cumsum((1 / hv[1:] + 1 / hv[:-1]) / 2 * np.diff(grid_t))])

    def H(t):
        t = np.asarray(t, dtype=float)
        out = np.sign(t) * np.interp(np.abs(t), grid_t, cum)
        return out if out.ndim else float(out)

    def straighten(z):
        z = complex(z)
        q = 1.0 / np.conj(z)
        w = complex(ba_extend(H, q))
        w = complex(w.real, 2.0 * w.imag)
        return 1.0 / np.conj(w)

    scene = Scene()
    scene.metadata["alpha"] = str(alpha)
    cusp_pts = xs + 1j * xs ** alpha
    exp = [
        Expected("cusp_t_at_1", dict(), value=0.5, rel_tol=1e-9,
                 anchor="t(1) = 1/2 and s(1/2) = 1"),
        Expected("cusp_sandwich_violation", dict(t_lo=0.5, t_hi=1e4), value=0.0,
                 rel_tol=0.0, anchor="1/(2t) <= s(t) <= 1/t on a log grid"),
        Expected("cusp_h_lipschitz", dict(), band=(0.0, 1.0 + 4 * (alpha - 1) + 0.05),
                 anchor="|h'| <= 1 + 4(alpha - 1)"),
        Expected("cusp_semicircle_dev", dict(), band=(0.0, 0.02),
                 anchor="images near the semicircle of radius 1/2 "
                        "(sup distance / window side)"),
    ]
    return ScenarioBundle(
        "cusp_straighten", scene, exp,
        params=dict(alpha=alpha, n_cusp=n_cusp, x_min=x_min,
                    window_side=WINDOW_SIDE,
                    grid=dict(bbox=(-1, 1, -1, 1), h=0.01)),
        artifacts=dict(t_of_x=t_of_x, s_of_t=s_of_t, h=h, H=H,
                       straighten=straighten, cusp_points=cusp_pts))


# ---------------------------------------------------------------------------
# squares


def square_region(x0: float, y0: float, side: float = 1.0) -> PolyJordan:
    return PolyJordan(vertices=(complex(x0, y0), complex(x0 + side, y0),
                                complex(x0 + side, y0 + side), complex(x0, y0 + side)))


def square_boundary_samples(x0: float, y0: float, side: float, n: int) -> np.ndarray:
    t = np.arange(n) * 4.0 / n
    out = np.empty(n, dtype=complex)
    for i, s in enumerate(t):
        e, f = int(s), s - int(s)
        out[i] = {0: complex(x0 + side * f, y0),
                  1: complex(x0 + side, y0 + side * f),
                  2: complex(x0 + side * (1 - f), y0 + side),
                  3: complex(x0, y0 + side * (1 - f))}[e]
    return out


def squares_pair(delta: float, n_samples: int = 32, h: Optional[float] = None) -> ScenarioBundle:
    """Two axis-aligned unit squares at relative distance delta (Euclidean gap
    sqrt(2) delta, since the squares have diameter sqrt(2)).  As delta shrinks
    the distortion of the identity map between the relative metric and the
    chordal metric blows up; the bundle records the profile value at ratio 1."""
    if not delta > 0:
        raise NotPositive("delta must be positive")
    s = float(np.sqrt(2.0) * delta)
    V = square_region(0.0, 0.0)
    U = square_region(1.0 + s, 0.0)
    scene = Scene().add_region("U", U).add_region("V", V)
    scene.add_samples("S", "V", square_boundary_samples(0.0, 0.0, 1.0, n_samples))
    if h is None:
        h = float(min(0.02, s / 5.0))
    exp = [
        Expected("eta1", dict(budget=200000, seed=0), band=(1.0, np.inf),
                 anchor="distortion at ratio one blows up as the gap closes"),
        Expected("quasicircle_L", dict(n=256), band=(1.0, 2.0),
                 anchor="square boundaries satisfy the three-point condition "
                        "with constant at most 2"),
    ]
    grid = dict(bbox=(-0.8, 2.0 + s + 0.8, -0.85, 1.85), h=h, connectivity=16)
    return ScenarioBundle("squares_pair", scene, exp,
                          params=dict(delta=delta, gap=s, grid=grid,
                                      n_samples=n_samples))


def squares_blowup_ladder(deltas=(0.2, 0.05, 0.0125), budget: int = 200000,
                          seed: int = 0) -> dict:
    """pair_verdict eta_hat(1) across a decreasing ladder of relative
    distances, with the strict-monotonicity flag."""
    values = {}
    for d in deltas:
        b = squares_pair(d)
        U, V = b.scene.regions["U"], b.scene.regions["V"]
        _, pts = b.scene.samples["S"]
        verdict = pair_verdict(U, V, pts, b.grid(), quadruple_budget=budget, seed=seed)
        values[d] = verdict.eta1
    ordered = sorted(values, reverse=True)  # decreasing delta
    increasing = all(values[ordered[i]] < values[ordered[i + 1]]
                     for i in range(len(ordered) - 1))
    return dict(eta1=values, strictly_increasing=increasing)


# ---------------------------------------------------------------------------
# bundle runner


def _pairs_of(samples: np.ndarray, n_pairs: int, seed: int):
    rng = np.random.default_rng(seed)
    n = len(samples)
    out = []
    while len(out) < n_pairs:
        i, j = rng.integers(0, n, 2)
        if i != j:
            out.append((int(i), int(j)))
    return out


def run_bundle(bundle: ScenarioBundle) -> list:
    """Evaluate every expected entry of a bundle; each check invokes the
    operation that owns the quantity."""
    out = []
    for exp in bundle.expected:
        measured = _measure(bundle, exp)
        if exp.band is not None:
            lo, hi = exp.band
            ok = bool(lo - 1e-12 <= measured <= hi + 1e-12)
        elif exp.value == 0.0:
            ok = bool(abs(measured) <= 1e-9)
        else:
            ok = bool(abs(measured - exp.value) <= exp.rel_tol * abs(exp.value))
        out.append(CheckResult(bundle.name, exp.quantity, float(measured),
                               exp.value, exp.band, ok, exp.anchor))
    return out


def _measure(bundle: ScenarioBundle, exp: Expected) -> float:
    q = exp.quantity
    scene = bundle.scene
    if q == "d_vu" or q == "d_uv":
        U, V = scene.regions["U"], scene.regions["V"]
        if q == "d_uv":
            U, V = V, U
        z, w = complex(exp.params["z"]), complex(exp.params["w"])
        return relative_hyperbolic_distance(U, V, z, w, bundle.grid()).distance
    if q == "band_pairs_violation":
        # worst factor by which d (R - r) / |z - w| escapes the stated band
        U, V = scene.regions["U"], scene.regions["V"]
        _, pts = scene.samples["S"]
        M = metric_table(U, V, pts, bundle.grid())
        r, R = bundle.params["r"], bundle.params["R"]
        lo, hi = exp.params["band_lo"], exp.params["band_hi"]
        worst = 1.0
        for i, j in _pairs_of(pts, exp.params.get("n_pairs", 20), exp.params.get("seed", 0)):
            ratio = M[i, j] * (R - r) / abs(pts[i] - pts[j])
            worst = max(worst, ratio / hi, lo / ratio)
        return worst - 1.0  # 0 means every pair inside the band
    if q == "ratio_spread":
        U, V = scene.regions["U"], scene.regions["V"]
        _, pts = scene.samples["S"]
        M = metric_table(U, V, pts, bundle.grid())
        scale = exp.params["scale"]
        ratios = []
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                ratios.append(M[i, j] * scale / abs(pts[i] - pts[j]))
        ratios = np.asarray(ratios)
        return float(ratios.max() / ratios.min())
    if q == "graph_ratio_spread":
        U, V = scene.regions["U"], scene.regions["V"]
        _, pts = scene.samples["S"]
        F = bundle.artifacts["F"]
        M = metric_table(U, V, pts, bundle.grid())
        ratios = []
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                den = abs(F(pts[j].real) - F(pts[i].real))
                ratios.append(M[i, j] / den)
        ratios = np.asarray(ratios)
        return float(ratios.max() / ratios.min())
    if q == "eta1":
        U, V = scene.regions["U"], scene.regions["V"]
        _, pts = scene.samples["S"]
        verdict = pair_verdict(U, V, pts, bundle.grid(),
                               quadruple_budget=exp.params.get("budget", 200000),
                               seed=exp.params.get("seed", 0))
        return verdict.eta1
    if q == "quasicircle_L":
        n = exp.params.get("n", 256)
        pts = square_boundary_samples(0.0, 0.0, 1.0, n)
        return quasicircle_constants(pts).three_point_L
    if q == "cusp_t_at_1":
        return float(bundle.artifacts["t_of_x"](1.0))
    if q == "cusp_sandwich_violation":
        s = bundle.artifacts["s_of_t"]
        ts = np.geomspace(exp.params["t_lo"], exp.params["t_hi"], 200)
        viol = 0.0
        for t in ts:
            st = s(t)
            viol = max(viol, (1.0 / (2 * t)) - st, st - 1.0 / t)
        return float(max(viol, 0.0))
    if q == "cusp_h_lipschitz":
        hfun = bundle.artifacts["h"]
        ts = np.concatenate([np.linspace(0.51, 8.0, 400), np.geomspace(8.0, 500.0, 100)])
        d = 1e-6
        vals = [abs(hfun(t + d) - hfun(t - d)) / (2 * d) for t in ts]
        return float(max(vals))
    if q == "cusp_semicircle_dev":
        smap = bundle.artifacts["straighten"]
        pts = bundle.artifacts["cusp_points"]
        dev = 0.0
        for p in pts:
            img = smap(p)
            dev = max(dev, abs(abs(img - 0.5j) - 0.5))
        return float(dev / bundle.params["window_side"])
    if q == "increasing_qs_sup":
        F = bundle.artifacts["F"]
        sup, _ = increasing_qs_ratio(F, exp.params["domain"], exp.params["step"])
        return float(sup)
    raise ValueError(f"unknown quantity {q!r}")


def default_suite() -> list:
    """The quick scenario suite used by the command-line runner."""
    return [
        parallel_halfplanes(1.0),
        concentric_annulus(1.0, 2.0),
        near_parallel_quasidisks(2.0, 1.0),
        near_concentric_quasidisks(2.0, 1.0, 2.0),
        wormhole(),
        separated_quasidisks(),
        lipschitz_graph_pair(lambda x: 1.0 / (abs(x) + 1.0), L=1.0),
        cusp_straighten(2.0),
        squares_pair(0.2),
    ]
