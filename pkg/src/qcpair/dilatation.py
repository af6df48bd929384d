"""Quasiconformality measurements: per-triangle and finite-difference
Beltrami/dilatation reports, and the conformal modulus of ring domains.

The dilatation of an affine map z -> a z + b conj(z) + c is
(|a| + |b|) / (|a| - |b|); orientation-reversing pieces (|b| >= |a|) are
flagged, never silently absorbed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg

from .errors import DegenerateTriangle, NotARing, SolverDiverged, StepTooLarge
from .extend import PLMap
from .geom import Disk, Region
from .gridmetric import GridSpec


@dataclass
class DilatationReport:
    """Distortion measurements: max K, the per-simplex or per-node array, the
    worst witness index, and the method that produced them."""

    max_K: float
    per_K: np.ndarray
    worst_index: int
    method: str
    orientation_reversed: np.ndarray

    @property
    def any_reversed(self) -> bool:
        return bool(self.orientation_reversed.any())


def pl_dilatation(m: PLMap) -> DilatationReport:
    """Per-triangle dilatation of a PL map: each triangle's affine part is
    written as z -> a z + b conj(z) + c and scored K = (|a|+|b|)/(|a|-|b|)."""
    v, t, w = m.vertices, m.triangles, m.image_vertices
    z1, z2, z3 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    w1, w2, w3 = w[t[:, 0]], w[t[:, 1]], w[t[:, 2]]
    e2, e3 = z2 - z1, z3 - z1
    f2, f3 = w2 - w1, w3 - w1
    D = e2 * np.conj(e3) - e3 * np.conj(e2)
    scale = np.abs(e2) * np.abs(e3)
    bad = np.abs(D) <= 1e-14 * scale
    if bad.any():
        raise DegenerateTriangle(f"degenerate source triangle at index {int(np.flatnonzero(bad)[0])}")
    a = (f2 * np.conj(e3) - f3 * np.conj(e2)) / D
    b = (e2 * f3 - e3 * f2) / D
    reversed_ = np.abs(b) >= np.abs(a)
    with np.errstate(divide="ignore"):
        K = (np.abs(a) + np.abs(b)) / np.abs(np.abs(a) - np.abs(b))
    worst = int(np.argmax(np.where(reversed_, np.inf, K)))
    return DilatationReport(max_K=float(K[worst]), per_K=K, worst_index=worst,
                            method="affine_exact", orientation_reversed=reversed_)


def numeric_beltrami(f: Callable, nodes, step: Optional[float] = None,
                     orientation_preserving: bool = True) -> DilatationReport:
    """Finite-difference dilatation of a map callable at the given nodes:
    central differences give f_z and f_zbar, and K = (|f_z| + |f_zbar|) /
    (|f_z| - |f_zbar|) per node.  The step defaults to 1e-5 times the local
    scale.  For a map declared orientation-preserving, |f_zbar| > |f_z| at
    more than 1% of nodes raises StepTooLarge."""
    pts = np.atleast_1d(np.asarray(nodes, dtype=complex))
    K = np.empty(pts.shape)
    rev = np.zeros(pts.shape, dtype=bool)
    for i, z in enumerate(pts):
        h = step if step is not None else 1e-5 * max(abs(z), 1.0)
        fx = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
        fy = (complex(f(z + 1j * h)) - complex(f(z - 1j * h))) / (2 * h)
        fz = (fx - 1j * fy) / 2.0
        fzb = (fx + 1j * fy) / 2.0
        rev[i] = abs(fzb) >= abs(fz)
        denom = abs(abs(fz) - abs(fzb))
        K[i] = np.inf if denom == 0 else (abs(fz) + abs(fzb)) / denom
    if orientation_preserving and rev.mean() > 0.01:
        raise StepTooLarge(
            f"{int(rev.sum())} of {rev.size} nodes look orientation-reversing; "
            "reduce the step or check the map")
    worst = int(np.argmax(np.where(rev, np.inf, K)))
    return DilatationReport(max_K=float(K[worst]), per_K=K, worst_index=worst,
                            method=f"finite_difference({step if step is not None else 'auto'})",
                            orientation_reversed=rev)


# ---------------------------------------------------------------------------
# ring modulus


@dataclass(frozen=True)
class RingSpec:
    """A ring domain described by its two complementary continua (the closures
    of two disjoint regions) and the grid used for the Dirichlet solve."""

    inner: Region
    outer: Region
    grid: GridSpec


def _concentric_radii(inner: Region, outer: Region):
    """(r, R) when the continua are concentric round circles, else None."""
    if not (isinstance(inner, Disk) and isinstance(outer, Disk)):
        return None
    if abs(complex(inner.center) - complex(outer.center)) > 1e-12:
        return None
    # one continuum must be the inside disk, the other the outside exterior
    if inner.complemented == outer.complemented:
        return None
    disk_side = inner if not inner.complemented else outer
    ext_side = outer if not inner.complemented else inner
    if disk_side.radius >= ext_side.radius:
        return None
    return disk_side.radius, ext_side.radius


def ring_modulus(spec: RingSpec, method: str = "auto") -> float:
    """Modulus of the family of curves separating the two continua.

    Round concentric data returns the closed form log(R/r) / (2 pi).
    Otherwise the Dirichlet problem (5-point Laplacian, potential 0 on the
    inner continuum and 1 on the outer, conjugate gradients to residual
    1e-8) gives the capacity sum |grad u|^2 h^2, whose reciprocal is
    normalized so the round annulus reproduces the closed form (the
    normalization constant is 1).  Nodes within h/2 of a continuum count as
    boundary, which centers the staircase error."""
    radii = _concentric_radii(spec.inner, spec.outer)
    if method == "auto" and radii is not None:
        r, R = radii
        return float(np.log(R / r) / (2 * np.pi))
    if method == "closed_form":
        if radii is None:
            raise NotARing("closed form requires concentric circles")
        r, R = radii
        return float(np.log(R / r) / (2 * np.pi))
    return 1.0 / _ring_capacity(spec)


def _ring_capacity(spec: RingSpec) -> float:
    g = spec.grid
    h = g.h
    x0, x1, y0, y1 = g.bbox
    xs = x0 + h * np.arange(int(np.floor((x1 - x0) / h)) + 1)
    ys = y0 + h * np.arange(int(np.floor((y1 - y0) / h)) + 1)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    in_inner = spec.inner.contains(Z) | (spec.inner.boundary_dist(Z) <= 0.5 * h)
    in_outer = spec.outer.contains(Z) | (spec.outer.boundary_dist(Z) <= 0.5 * h)
    if np.any(in_inner & in_outer):
        raise NotARing("continua overlap at grid scale")
    dom = ~in_inner & ~in_outer
    n = int(dom.sum())
    if n == 0:
        raise NotARing("empty ring domain at this resolution")
    ny, nx = dom.shape
    idx = -np.ones((ny, nx), dtype=np.int64)
    idx[dom] = np.arange(n)
    rows, cols, vals = [], [], []
    diag = np.zeros(n)
    b = np.zeros(n)
    touches_inner = False
    touches_outer = False
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        s_y = slice(max(0, -dy), min(ny, ny - dy))
        s_x = slice(max(0, -dx), min(nx, nx - dx))
        d_y = slice(max(0, dy), min(ny, ny + dy))
        d_x = slice(max(0, dx), min(nx, nx + dx))
        here = dom[s_y, s_x]
        diag[idx[s_y, s_x][here]] += 1.0
        both = here & dom[d_y, d_x]
        rows.append(idx[s_y, s_x][both])
        cols.append(idx[d_y, d_x][both])
        vals.append(-np.ones(int(both.sum())))
        bc_outer = here & in_outer[d_y, d_x]
        b[idx[s_y, s_x][bc_outer]] += 1.0
        touches_outer |= bool(bc_outer.any())
        touches_inner |= bool((here & in_inner[d_y, d_x]).any())
    if not (touches_inner and touches_outer):
        raise NotARing("a continuum does not meet the grid; enlarge the bbox "
                       "or refine the step")
    A = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n)).tocsr() + sparse.diags(diag)
    u, info = cg(A, b, rtol=1e-8, atol=0.0, maxiter=100 * int(np.sqrt(n) + 100))
    if info != 0:
        raise SolverDiverged(f"conjugate gradients returned {info}")
    U = np.zeros((ny, nx))
    U[dom] = u
    U[in_outer] = 1.0
    energy = 0.0
    for dx, dy in ((1, 0), (0, 1)):
        s_y = slice(max(0, -dy), min(ny, ny - dy))
        s_x = slice(max(0, -dx), min(nx, nx - dx))
        d_y = slice(max(0, dy), min(ny, ny + dy))
        d_x = slice(max(0, dx), min(nx, nx + dx))
        use = dom[s_y, s_x] | dom[d_y, d_x]
        du = (U[d_y, d_x] - U[s_y, s_x])[use]
        energy += float((du ** 2).sum())
    if energy <= 0:
        raise SolverDiverged("zero capacity")
    return energy


@dataclass
class ModulusComparison:
    """Separating-family moduli of two rings, their ratio against the
    two-sided bound, and the plain upper-bound check."""

    mod: float
    mod_image: float
    ratio: float
    ratio_bound: Optional[float]
    ratio_ok: Optional[bool]
    upper_bound: Optional[float]
    upper_ok: Optional[bool]


def extension_condition_check(U: Region, V: Region, U2: Region, V2: Region,
                              grid: GridSpec, grid2: Optional[GridSpec] = None,
                              ratio_bound: Optional[float] = None,
                              upper_bound: Optional[float] = None,
                              method: str = "auto") -> ModulusComparison:
    """Moduli of the curve families separating the boundary pairs, before and
    after a candidate boundary correspondence, with the two admissibility
    conditions: the ratio pinched in [1/K0, K0], or the plain bound
    Mod <= M."""
    m1 = ring_modulus(RingSpec(V, U, grid), method=method)
    m2 = ring_modulus(RingSpec(V2, U2, grid2 or grid), method=method)
    ratio = m2 / m1
    ratio_ok = None if ratio_bound is None else bool(1.0 / ratio_bound <= ratio <= ratio_bound)
    upper_ok = None if upper_bound is None else bool(m1 <= upper_bound)
    return ModulusComparison(mod=m1, mod_image=m2, ratio=ratio,
                             ratio_bound=ratio_bound, ratio_ok=ratio_ok,
                             upper_bound=upper_bound, upper_ok=upper_ok)
