"""JSON interchange for scenes, meshes, boundary data, and verdict reports,
plus the CSV metric table writer.  JSON is the single interchange format;
floats serialize via their shortest round-trip representation so a scene
survives a save/load cycle bit for bit.  Infinity is encoded as the string
"inf"."""
from __future__ import annotations

import json
from typing import Union

import numpy as np

from .distortion import DistortionProfile, PairVerdict
from .errors import InvalidScene
from .extend import BoundaryHomeo, Circle, Line, PLMap
from .geom import Disk, HalfPlane, INF, PolyJordan, Region, Scene, is_inf


def _point_out(p) -> Union[list, str]:
    if is_inf(p):
        return "inf"
    p = complex(p)
    return [p.real, p.imag]


def _point_in(obj):
    if obj == "inf":
        return INF
    return complex(obj[0], obj[1])


def region_to_dict(name: str, r: Region) -> dict:
    if isinstance(r, HalfPlane):
        kind, params = "halfplane", {"normal": _point_out(r.normal), "offset": r.offset}
    elif isinstance(r, Disk):
        kind, params = "disk", {"center": _point_out(r.center), "radius": r.radius}
    elif isinstance(r, PolyJordan):
        kind, params = "polyjordan", {"vertices": [_point_out(v) for v in r.vertices],
                                      "positive": r.positive}
    else:
        raise InvalidScene(f"unknown region type {type(r).__name__}")
    return {"name": name, "kind": kind, "params": params, "complemented": r.complemented}


def region_from_dict(d: dict) -> Region:
    kind = d.get("kind")
    params = d.get("params", {})
    comp = bool(d.get("complemented", False))
    try:
        if kind == "halfplane":
            return HalfPlane(normal=_point_in(params["normal"]),
                             offset=float(params["offset"]), complemented=comp)
        if kind == "disk":
            return Disk(center=_point_in(params["center"]),
                        radius=float(params["radius"]), complemented=comp)
        if kind == "polyjordan":
            return PolyJordan(vertices=tuple(_point_in(v) for v in params["vertices"]),
                              positive=bool(params.get("positive", True)),
                              complemented=comp)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidScene(f"bad region entry {d.get('name')!r}: {e}") from e
    raise InvalidScene(f"unknown region kind {kind!r}")


def scene_to_dict(scene: Scene) -> dict:
    return {
        "regions": [region_to_dict(name, r) for name, r in scene.regions.items()],
        "samples": [{"name": name, "region": rname,
                     "points": [_point_out(p) for p in pts]}
                    for name, (rname, pts) in scene.samples.items()],
        "metadata": dict(scene.metadata),
    }


def scene_from_dict(d: dict) -> Scene:
    scene = Scene()
    try:
        for rd in d.get("regions", []):
            scene.add_region(rd["name"], region_from_dict(rd))
        for sd in d.get("samples", []):
            scene.add_samples(sd["name"], sd["region"],
                              [_point_in(p) for p in sd["points"]])
        scene.metadata.update(d.get("metadata", {}))
    except (KeyError, TypeError) as e:
        raise InvalidScene(f"malformed scene: {e}") from e
    return scene


def scene_to_json(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), indent=2)


def scene_from_json(text: str) -> Scene:
    try:
        return scene_from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise InvalidScene(f"not valid JSON: {e}") from e


# ---------------------------------------------------------------------------
# meshes


def mesh_to_dict(m: PLMap) -> dict:
    return {
        "vertices": [[z.real, z.imag] for z in m.vertices],
        "triangles": [[int(i) for i in t] for t in m.triangles],
        "image_vertices": [[z.real, z.imag] for z in m.image_vertices],
        "depth": int(m.depth),
        "period": None if m.period is None else int(m.period),
    }


def mesh_from_dict(d: dict) -> PLMap:
    v = np.asarray([complex(x, y) for x, y in d["vertices"]])
    w = np.asarray([complex(x, y) for x, y in d["image_vertices"]])
    t = np.asarray(d["triangles"], dtype=np.int64)
    return PLMap(v, t, w, depth=int(d.get("depth", 0)), period=d.get("period"))


def mesh_to_json(m: PLMap) -> str:
    return json.dumps(mesh_to_dict(m))


def mesh_from_json(text: str) -> PLMap:
    return mesh_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# boundary data


def _carrier_to_dict(c) -> dict:
    if isinstance(c, Line):
        return {"type": "line", "level": c.level}
    return {"type": "circle", "center": _point_out(c.center), "radius": c.radius}


def _carrier_from_dict(d):
    if d["type"] == "line":
        return Line(level=float(d.get("level", 0.0)))
    return Circle(center=_point_in(d["center"]), radius=float(d["radius"]))


def boundary_to_dict(b: BoundaryHomeo) -> dict:
    if isinstance(b.carrier, Line):
        samples = [[float(p), float(v)] for p, v in zip(b.params, b.values)]
    else:
        samples = [[float(p), _point_out(v)] for p, v in zip(b.params, b.values)]
    return {"carrier": _carrier_to_dict(b.carrier), "samples": samples,
            "period": None if b.period is None else int(b.period)}


def boundary_from_dict(d: dict) -> BoundaryHomeo:
    carrier = _carrier_from_dict(d["carrier"])
    ps = [s[0] for s in d["samples"]]
    if isinstance(carrier, Line):
        vs = [float(s[1]) for s in d["samples"]]
    else:
        vs = [_point_in(s[1]) for s in d["samples"]]
    period = d.get("period")
    return BoundaryHomeo(carrier, np.asarray(ps), np.asarray(vs),
                         None if period is None else int(period))


def boundary_from_json(text: str) -> dict:
    """Boundary file: either a single object or named parts (e.g. bottom/top
    for a strip, inner/outer for an annulus).  Returns name -> BoundaryHomeo
    with a single entry keyed "boundary" for the plain form."""
    d = json.loads(text)
    if "carrier" in d:
        return {"boundary": boundary_from_dict(d)}
    return {k: boundary_from_dict(v) for k, v in d.items() if isinstance(v, dict)}


# ---------------------------------------------------------------------------
# reports


def profile_to_dict(p: DistortionProfile) -> dict:
    wit = []
    for w in p.witness:
        if w is None:
            wit.append(None)
        else:
            wit.append({"points": [_point_out(q) for q in w["points"]],
                        "src_ratio": w["src_ratio"], "tgt_ratio": w["tgt_ratio"]})
    return {"bins": [float(b) for b in p.bins],
            "eta_hat": [None if np.isnan(v) else float(v) for v in p.eta_hat],
            "witness": wit, "sample_count": p.sample_count,
            "clamped_low": p.clamped_low, "clamped_high": p.clamped_high}


def verdict_to_dict(v: PairVerdict) -> dict:
    return {"profile": profile_to_dict(v.profile),
            "bounded_at_scale": v.bounded_at_scale,
            "eta1": v.eta1, "threshold": v.threshold,
            "grid": {"h": v.grid_h, "connectivity": v.connectivity},
            "n_samples": v.n_samples}


def table_to_csv(M: np.ndarray) -> str:
    """Header row of sample indices, then the symmetric matrix at 9
    significant digits, locale independent."""
    n = M.shape[0]
    lines = ["," + ",".join(str(i) for i in range(n))]
    for i in range(n):
        lines.append(",".join([str(i)] + [f"{M[i, j]:.9g}" for j in range(n)]))
    return "\n".join(lines) + "\n"
