"""Deterministic SVG rendering of curves, meshes (source and image side by
side), and distortion profiles.  Output is a plain SVG string with stable
element ordering; there is no interactive viewer."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distortion import DistortionProfile
from .errors import EmptyLayer
from .extend import PLMap
from .geom import Disk, HalfPlane, PolyJordan, Region, Scene


@dataclass
class RenderSpec:
    window: tuple = (-4.0, 4.0, -4.0, 4.0)
    size_px: int = 720
    stroke_width: float = 1.0
    colors: dict = field(default_factory=lambda: {})

    def __post_init__(self):
        x0, x1, y0, y1 = self.window
        if not (x1 > x0 and y1 > y0 and self.size_px > 0):
            raise EmptyLayer("window and output size must be positive")


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


class _Canvas:
    def __init__(self, spec: RenderSpec, width_factor: float = 1.0):
        self.spec = spec
        x0, x1, y0, y1 = spec.window
        self.sx = spec.size_px * width_factor / (x1 - x0)
        self.sy = spec.size_px / (y1 - y0)
        self.els: list = []

    def to_px(self, z: complex, dx: float = 0.0):
        x0, _, y0, y1 = self.spec.window
        return ((z.real - x0) * self.sx + dx, (y1 - z.imag) * self.sy)

    def polyline(self, pts, color: str, width: float, dx: float = 0.0,
                 closed: bool = False, dashed: bool = False):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in (self.to_px(p, dx) for p in pts))
        dash = ' stroke-dasharray="4 3"' if dashed else ""
        tag = "polygon" if closed else "polyline"
        self.els.append(f'<{tag} points="{coords}" fill="none" '
                        f'stroke="{color}" stroke-width="{width:.2f}"{dash}/>')


def _region_curve(r: Region, window) -> np.ndarray:
    x0, x1, y0, y1 = window
    if isinstance(r, Disk):
        th = np.linspace(0, 2 * np.pi, 181)
        return r.center + r.radius * np.exp(1j * th)
    if isinstance(r, HalfPlane):
        n = r.normal
        t = np.linspace(-2 * max(x1 - x0, y1 - y0), 2 * max(x1 - x0, y1 - y0), 2)
        base = r.offset * n
        return base + t * (1j * n)
    if isinstance(r, PolyJordan):
        v = np.asarray(r.vertices)
        return np.concatenate([v, v[:1]])
    raise EmptyLayer(f"cannot draw region {type(r).__name__}")


def render_svg(scene: Optional[Scene] = None, mesh: Optional[PLMap] = None,
               profile: Optional[DistortionProfile] = None,
               spec: Optional[RenderSpec] = None) -> str:
    """Render any of: the scene's region boundaries and sample sets, a mesh as
    source and image grids side by side, a log-log profile polyline."""
    if scene is None and mesh is None and profile is None:
        raise EmptyLayer("nothing to render")
    spec = spec or RenderSpec()
    two_up = mesh is not None
    cv = _Canvas(spec, 1.0)
    width = spec.size_px * (2.2 if two_up else 1.0)
    ci = 0
    if scene is not None:
        radii = scene.metadata.get("reference_radii", "")
        for tok in str(radii).split(","):
            if tok.strip():
                r = float(tok)
                th = np.linspace(0, 2 * np.pi, 181)
                cv.polyline(r * np.exp(1j * th), "#999999", 0.6 * spec.stroke_width,
                            dashed=True)
        for name in sorted(scene.regions):
            color = spec.colors.get(name, _PALETTE[ci % len(_PALETTE)])
            ci += 1
            cv.polyline(_region_curve(scene.regions[name], spec.window), color,
                        spec.stroke_width)
        for name in sorted(scene.samples):
            _, pts = scene.samples[name]
            color = spec.colors.get(name, "#444444")
            for p in pts:
                x, y = cv.to_px(complex(p))
                cv.els.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="{color}"/>')
    if mesh is not None:
        shift = spec.size_px * 1.2
        for tri in mesh.triangles:
            src = [mesh.vertices[i] for i in tri]
            img = [mesh.image_vertices[i] for i in tri]
            cv.polyline(src, "#1f77b4", 0.4, closed=True)
            cv.polyline(img, "#d62728", 0.4, dx=shift, closed=True)
    if profile is not None:
        mask = profile.realized()
        if not mask.any():
            raise EmptyLayer("profile has no realized bins")
        xs = np.log2(profile.bins[mask])
        ys = np.log2(profile.eta_hat[mask])
        x0, x1 = xs.min() - 1, xs.max() + 1
        y0, y1 = min(ys.min() - 1, -1), max(ys.max() + 1, 1)
        pts = [complex((x - x0) / (x1 - x0) * 8 - 4, (y - y0) / (y1 - y0) * 8 - 4)
               for x, y in zip(xs, ys)]
        cv.polyline(pts, "#2ca02c", 1.2)
    body = "\n".join(cv.els)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
            f'height="{spec.size_px}" viewBox="0 0 {width:.0f} {spec.size_px}">\n'
            f"{body}\n</svg>\n")
