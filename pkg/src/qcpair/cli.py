"""Command-line front end.

Subcommands: metric, verdict, extend, dilatation, modulus, scenario, render.
Results go to --out or stdout as JSON (CSV for metric tables, SVG for render).
Exit codes: 0 success, 2 validation error, 64 unknown subcommand, 65 invalid
scene.  All randomness is seeded (--seed, default 0); QCPAIR_THREADS caps
worker parallelism (the bundled computations run single-threaded, so the cap
is honored trivially).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import scenarios as sc
from .dilatation import RingSpec, pl_dilatation, ring_modulus
from .distortion import pair_verdict
from .errors import InvalidScene, QcpairError
from .extend import annulus_extend_general, ba_extend, dyadic_pl_extend, trapezoid_strip_extend
from .gridmetric import GridSpec, metric_table
from .render import RenderSpec, render_svg
from . import sceneio

_SUBCOMMANDS = ("metric", "verdict", "extend", "dilatation", "modulus",
                "scenario", "render")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNKNOWN_SUBCOMMAND = 64
EXIT_INVALID_SCENE = 65


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_scene(path: str):
    with open(path) as fh:
        scene = sceneio.scene_from_json(fh.read())
    scene.validate()
    return scene


def _grid_from_args(args, scene) -> GridSpec:
    if args.bbox:
        bbox = tuple(float(v) for v in args.bbox)
    else:
        d = scene.diameter()
        bbox = (-d, d, -d, d)
    return GridSpec(bbox=bbox, h=args.h, connectivity=args.connectivity)


def _cmd_metric(args) -> int:
    scene = _load_scene(args.scene)
    uname, vname = args.pair.split(",")
    _, pts = scene.samples[args.samples]
    spec = _grid_from_args(args, scene)
    M = metric_table(scene.regions[uname], scene.regions[vname], pts, spec)
    _write(sceneio.table_to_csv(M), args.out)
    return EXIT_OK


def _cmd_verdict(args) -> int:
    scene = _load_scene(args.scene)
    uname, vname = args.pair.split(",")
    _, pts = scene.samples[args.samples]
    spec = _grid_from_args(args, scene)
    v = pair_verdict(scene.regions[uname], scene.regions[vname], pts, spec,
                     quadruple_budget=args.budget, seed=args.seed,
                     threshold=args.threshold)
    _write(json.dumps(sceneio.verdict_to_dict(v), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_extend(args) -> int:
    with open(args.boundary) as fh:
        parts = sceneio.boundary_from_json(fh.read())
    window = (int(args.window[0]), int(args.window[1]))
    if args.kind == "dyadic":
        mesh = dyadic_pl_extend(parts["boundary"], args.depth, window)
    elif args.kind == "strip":
        mesh = trapezoid_strip_extend(parts["bottom"], parts["top"], window, args.depth)
    elif args.kind == "annulus":
        ext = annulus_extend_general(parts["inner"], parts["outer"],
                                     M=args.radius_bound, m_max=args.depth)
        mesh = ext.annulus_mesh
    elif args.kind == "annulus-large":
        from .extend import annulus_extend_large

        comp = annulus_extend_large(parts["inner"], parts["outer"],
                                    c0=args.log_ratio_bound, m_max=args.depth)
        if hasattr(comp, "annulus_mesh"):
            mesh = comp.annulus_mesh
        else:
            payload = {
                "inner": sceneio.mesh_to_dict(comp.inner.annulus_mesh),
                "outer": sceneio.mesh_to_dict(comp.outer.annulus_mesh),
                "middle_power": {"R": comp.R, "beta": comp.beta},
                "L": comp.L, "L_prime": comp.L_prime,
            }
            _write(json.dumps(payload) + "\n", args.out)
            return EXIT_OK
    elif args.kind == "ba":
        h = parts["boundary"]
        xs = np.linspace(window[0], window[1], 33)
        ys = np.linspace(0.1, 1.0, 7)
        pts = (xs[:, None] + 1j * ys[None, :]).ravel()
        vals = ba_extend(h, pts)
        payload = {"points": [[p.real, p.imag] for p in pts],
                   "values": [[v.real, v.imag] for v in vals]}
        _write(json.dumps(payload) + "\n", args.out)
        return EXIT_OK
    else:
        raise QcpairError(f"unknown extension kind {args.kind!r}")
    _write(sceneio.mesh_to_json(mesh) + "\n", args.out)
    return EXIT_OK


def _cmd_dilatation(args) -> int:
    with open(args.mesh) as fh:
        mesh = sceneio.mesh_from_json(fh.read())
    rep = pl_dilatation(mesh)
    payload = {"max_K": rep.max_K, "method": rep.method,
               "worst_index": rep.worst_index,
               "orientation_reversed": int(rep.orientation_reversed.sum()),
               "per_triangle_K": [float(k) for k in rep.per_K]}
    _write(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


def _cmd_modulus(args) -> int:
    scene = _load_scene(args.scene)
    iname, oname = args.ring.split(",")
    spec = _grid_from_args(args, scene)
    mod = ring_modulus(RingSpec(scene.regions[iname], scene.regions[oname], spec),
                       method=args.method)
    _write(json.dumps({"modulus": mod, "ring": [iname, oname], "h": args.h}) + "\n",
           args.out)
    return EXIT_OK


def _scenario_by_name(args):
    name = args.name
    if name == "parallel":
        return sc.parallel_halfplanes(args.gap)
    if name == "concentric":
        return sc.concentric_annulus(args.r, args.R)
    if name == "near-parallel":
        return sc.near_parallel_quasidisks(args.K, args.gap)
    if name == "near-concentric":
        return sc.near_concentric_quasidisks(args.K, args.r, args.R)
    if name == "wormhole":
        return sc.wormhole(args.K)
    if name == "separated":
        return sc.separated_quasidisks(args.K)
    if name == "graph":
        return sc.lipschitz_graph_pair(lambda x: 1.0 / (abs(x) + 1.0), L=1.0)
    if name == "cusp":
        return sc.cusp_straighten(args.alpha)
    if name == "squares":
        return sc.squares_pair(args.delta)
    raise QcpairError(f"unknown scenario {name!r}")


def _bundle_to_dict(b) -> dict:
    return {
        "name": b.name,
        "scene": sceneio.scene_to_dict(b.scene),
        "params": {k: v for k, v in b.params.items() if not callable(v)},
        "expected": [
            {"quantity": e.quantity, "params": {k: (str(v) if isinstance(v, complex) else v)
                                                for k, v in e.params.items()},
             "value": e.value, "band": None if e.band is None else list(e.band),
             "rel_tol": e.rel_tol, "anchor": e.anchor}
            for e in b.expected],
    }


def _cmd_scenario(args) -> int:
    if args.run_all:
        results = []
        for bundle in sc.default_suite():
            for res in sc.run_bundle(bundle):
                results.append({"scenario": res.scenario, "quantity": res.quantity,
                                "measured": res.measured, "expected": res.expected,
                                "band": None if res.band is None else list(res.band),
                                "passed": res.passed, "anchor": res.anchor})
        report = {"checks": results,
                  "passed": sum(1 for r in results if r["passed"]),
                  "total": len(results)}
        _write(json.dumps(report, indent=2) + "\n", args.report or args.out)
        return EXIT_OK if report["passed"] == report["total"] else EXIT_VALIDATION
    bundle = _scenario_by_name(args)
    _write(json.dumps(_bundle_to_dict(bundle), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_render(args) -> int:
    scene = mesh = profile = None
    if args.scene:
        scene = _load_scene(args.scene)
    if args.mesh:
        with open(args.mesh) as fh:
            mesh = sceneio.mesh_from_json(fh.read())
    if args.verdict:
        with open(args.verdict) as fh:
            d = json.load(fh)["profile"]
        from .distortion import DistortionProfile

        eta = np.asarray([np.nan if v is None else v for v in d["eta_hat"]])
        profile = DistortionProfile(bins=np.asarray(d["bins"]), eta_hat=eta,
                                    witness=[None] * len(eta),
                                    sample_count=d["sample_count"])
    spec = RenderSpec(window=tuple(args.window_box), size_px=args.size)
    _write(render_svg(scene=scene, mesh=mesh, profile=profile, spec=spec), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcpair", description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command")

    def common_grid(p):
        p.add_argument("--h", type=float, default=0.02)
        p.add_argument("--connectivity", type=int, default=16, choices=(8, 16))
        p.add_argument("--bbox", type=float, nargs=4, default=None,
                       metavar=("X0", "X1", "Y0", "Y1"))
        p.add_argument("--out", default=None)

    p = sub.add_parser("metric", help="pairwise relative-metric table as CSV")
    p.add_argument("--scene", required=True)
    p.add_argument("--pair", required=True, help="U,V region names")
    p.add_argument("--samples", required=True)
    common_grid(p)

    p = sub.add_parser("verdict", help="distortion profile of the identity map")
    p.add_argument("--scene", required=True)
    p.add_argument("--pair", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--budget", type=int, default=200000)
    p.add_argument("--threshold", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    common_grid(p)

    p = sub.add_parser("extend", help="quasiconformal extension constructions")
    p.add_argument("--kind", required=True,
                   choices=("dyadic", "strip", "annulus", "annulus-large", "ba"))
    p.add_argument("--boundary", required=True)
    p.add_argument("--window", type=float, nargs=2, default=(0, 1))
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--radius-bound", type=float, default=4.0)
    p.add_argument("--log-ratio-bound", type=float, default=4.0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("dilatation", help="per-triangle dilatation of a mesh")
    p.add_argument("--mesh", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("modulus", help="ring modulus")
    p.add_argument("--scene", required=True)
    p.add_argument("--ring", required=True, help="inner,outer region names")
    p.add_argument("--method", default="auto", choices=("auto", "closed_form", "numeric"))
    common_grid(p)

    p = sub.add_parser("scenario", help="worked configurations with expectations")
    p.add_argument("--name", default=None)
    p.add_argument("--run-all", action="store_true")
    p.add_argument("--report", default=None)
    p.add_argument("--gap", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--R", type=float, default=2.0)
    p.add_argument("--K", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--out", default=None)

    p = sub.add_parser("render", help="deterministic SVG output")
    p.add_argument("--scene", default=None)
    p.add_argument("--mesh", default=None)
    p.add_argument("--verdict", default=None)
    p.add_argument("--window-box", type=float, nargs=4, default=(-4, 4, -4, 4))
    p.add_argument("--size", type=int, default=720)
    p.add_argument("--out", default=None)
    return ap


def run_cli(argv) -> int:
    argv = list(argv)
    if argv and not argv[0].startswith("-") and argv[0] not in _SUBCOMMANDS:
        sys.stderr.write(f"qcpair: unknown subcommand {argv[0]!r}\n")
        return EXIT_UNKNOWN_SUBCOMMAND
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_help()
        return EXIT_OK
    np.random.seed(args.seed if hasattr(args, "seed") else 0)
    handler = {
        "metric": _cmd_metric,
        "verdict": _cmd_verdict,
        "extend": _cmd_extend,
        "dilatation": _cmd_dilatation,
        "modulus": _cmd_modulus,
        "scenario": _cmd_scenario,
        "render": _cmd_render,
    }[args.command]
    try:
        return handler(args)
    except InvalidScene as e:
        sys.stderr.write(f"qcpair: invalid scene: {e}\n")
        return EXIT_INVALID_SCENE
    except QcpairError as e:
        sys.stderr.write(f"qcpair: {type(e).__name__}: {e}\n")
        return EXIT_VALIDATION
    except KeyError as e:
        sys.stderr.write(f"qcpair: unknown name {e}\n")
        return EXIT_VALIDATION
    except (FileNotFoundError, ValueError) as e:
        sys.stderr.write(f"qcpair: {e}\n")
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
