import json

import numpy as np
import pytest

import qcpair as q
from qcpair import sceneio
from qcpair.cli import run_cli


def parallel_scene_json():
    scene = q.Scene()
    scene.add_region("U", q.HalfPlane(normal=1j, offset=1.0))
    scene.add_region("V", q.HalfPlane(normal=-1j, offset=0.0))
    scene.add_samples("S", "V", [0j, 3 + 0j, -2 + 0j])
    return sceneio.scene_to_json(scene)


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(["frobnicate"]) == 64

    def test_invalid_scene(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"regions": [{"name": "U", "kind": "blob", "params": {}}]}')
        code = run_cli(["metric", "--scene", str(p), "--pair", "U,V",
                        "--samples", "S"])
        assert code == 65

    def test_validation_error(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(parallel_scene_json())
        code = run_cli(["metric", "--scene", str(p), "--pair", "U,nope",
                        "--samples", "S"])
        assert code == 2 or code == 65


class TestMetricCommand:
    def test_parallel_table(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(parallel_scene_json())
        out = tmp_path / "table.csv"
        code = run_cli(["metric", "--scene", str(p), "--pair", "U,V",
                        "--samples", "S", "--h", "0.02",
                        "--bbox", "-4", "5", "0", "1", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().splitlines()
        M = np.asarray([[float(v) for v in r.split(",")[1:]] for r in rows[1:]])
        assert M[0, 1] == pytest.approx(3.0, rel=0.03)
        assert np.allclose(M, M.T)


class TestExtendAndDilatation:
    def test_dyadic_identity_pipeline(self, tmp_path):
        xs = np.linspace(0, 1, 65)
        b = q.BoundaryHomeo(q.Line(0.0), xs, xs, period=1)
        bp = tmp_path / "b.json"
        bp.write_text(json.dumps(sceneio.boundary_to_dict(b)))
        mp = tmp_path / "mesh.json"
        assert run_cli(["extend", "--kind", "dyadic", "--boundary", str(bp),
                        "--window", "0", "1", "--depth", "5",
                        "--out", str(mp)]) == 0
        kp = tmp_path / "K.json"
        assert run_cli(["dilatation", "--mesh", str(mp), "--out", str(kp)]) == 0
        rep = json.loads(kp.read_text())
        assert rep["max_K"] == 1.0
        assert rep["orientation_reversed"] == 0

    def test_strip_extend(self, tmp_path):
        xs = np.linspace(0, 1, 129)
        bottom = q.BoundaryHomeo(q.Line(0.0), xs, xs, period=1)
        top = q.BoundaryHomeo(q.Line(1.0), xs, xs + 0.02 * np.sin(2 * np.pi * xs),
                              period=1)
        bp = tmp_path / "b.json"
        bp.write_text(json.dumps({"bottom": sceneio.boundary_to_dict(bottom),
                                  "top": sceneio.boundary_to_dict(top)}))
        mp = tmp_path / "mesh.json"
        assert run_cli(["extend", "--kind", "strip", "--boundary", str(bp),
                        "--window", "0", "2", "--depth", "4",
                        "--out", str(mp)]) == 0
        mesh = sceneio.mesh_from_json(mp.read_text())
        assert q.pl_dilatation(mesh).max_K < 1.5


class TestModulusCommand:
    def test_round_annulus_closed_form(self, tmp_path):
        scene = q.Scene()
        scene.add_region("inner", q.Disk(center=0, radius=1.0))
        scene.add_region("outer", q.Disk(center=0, radius=float(np.exp(2 * np.pi)),
                                         complemented=True))
        p = tmp_path / "s.json"
        p.write_text(sceneio.scene_to_json(scene))
        out = tmp_path / "mod.json"
        assert run_cli(["modulus", "--scene", str(p), "--ring", "inner,outer",
                        "--h", "0.5", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["modulus"] == pytest.approx(1.0, rel=0.01)


class TestScenarioCommand:
    def test_named_bundle(self, tmp_path):
        out = tmp_path / "bundle.json"
        assert run_cli(["scenario", "--name", "parallel", "--gap", "1.0",
                        "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert d["name"] == "parallel_halfplanes"
        assert any(e["value"] == 3.0 for e in d["expected"])

    def test_cusp_bundle(self, tmp_path):
        out = tmp_path / "bundle.json"
        assert run_cli(["scenario", "--name", "cusp", "--alpha", "3.0",
                        "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert d["params"]["alpha"] == 3.0


class TestRender:
    def test_scene_svg(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(parallel_scene_json())
        out = tmp_path / "pic.svg"
        assert run_cli(["render", "--scene", str(p), "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("<svg") and "polyline" in text

    def test_mesh_svg_deterministic(self, tmp_path):
        mesh = q.dyadic_pl_extend(lambda x: x, 4, (0, 1))
        mp = tmp_path / "m.json"
        mp.write_text(sceneio.mesh_to_json(mesh))
        o1, o2 = tmp_path / "a.svg", tmp_path / "b.svg"
        run_cli(["render", "--mesh", str(mp), "--out", str(o1)])
        run_cli(["render", "--mesh", str(mp), "--out", str(o2)])
        assert o1.read_bytes() == o2.read_bytes()

    def test_mesh_element_budget(self, tmp_path):
        mesh = q.dyadic_pl_extend(lambda x: x, 6, (0, 1))
        mp = tmp_path / "m.json"
        mp.write_text(sceneio.mesh_to_json(mesh))
        out = tmp_path / "m.svg"
        run_cli(["render", "--mesh", str(mp), "--out", str(out)])
        assert out.read_text().count("<polygon") <= 10 ** 5


class TestRoundTrips:
    def test_scene_bit_identical(self):
        text = parallel_scene_json()
        scene = sceneio.scene_from_json(text)
        assert sceneio.scene_to_json(scene) == text

    def test_scene_with_infinity_and_polygon(self):
        scene = q.Scene()
        scene.add_region("P", q.PolyJordan(vertices=(0, 1, 1 + 1j, 0.3 + 2j)))
        scene.add_region("D", q.Disk(center=0.1 + 0.2j, radius=np.pi / 3,
                                     complemented=True))
        t1 = sceneio.scene_to_json(scene)
        t2 = sceneio.scene_to_json(sceneio.scene_from_json(t1))
        assert t1 == t2

    def test_mesh_round_trip_exact(self):
        mesh = q.dyadic_pl_extend(lambda x: x + 0.07 * np.sin(2 * np.pi * x), 5, (0, 1))
        back = sceneio.mesh_from_json(sceneio.mesh_to_json(mesh))
        assert np.array_equal(back.vertices, mesh.vertices)
        assert np.array_equal(back.image_vertices, mesh.image_vertices)
        assert np.array_equal(back.triangles, mesh.triangles)

    def test_verdict_deterministic_given_seed(self, tmp_path):
        p = tmp_path / "s.json"
        scene = q.Scene()
        scene.add_region("U", q.HalfPlane(normal=1j, offset=1.0))
        scene.add_region("V", q.HalfPlane(normal=-1j, offset=0.0))
        scene.add_samples("S", "V", np.linspace(-2, 2, 6).astype(complex))
        p.write_text(sceneio.scene_to_json(scene))
        outs = []
        for name in ("v1.json", "v2.json"):
            out = tmp_path / name
            code = run_cli(["verdict", "--scene", str(p), "--pair", "U,V",
                            "--samples", "S", "--budget", "5000", "--seed", "7",
                            "--h", "0.05", "--bbox", "-3", "3", "0", "1",
                            "--out", str(out)])
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestMoreExtendKinds:
    def test_annulus_kind(self, tmp_path):
        th = np.arange(129) / 129
        inner = q.BoundaryHomeo(q.Circle(0j, 1.0), th, np.exp(2j * np.pi * th))
        outer = q.BoundaryHomeo(q.Circle(0j, 1.5), th, 1.5 * np.exp(2j * np.pi * th))
        bp = tmp_path / "b.json"
        bp.write_text(json.dumps({"inner": sceneio.boundary_to_dict(inner),
                                  "outer": sceneio.boundary_to_dict(outer)}))
        mp = tmp_path / "mesh.json"
        assert run_cli(["extend", "--kind", "annulus", "--boundary", str(bp),
                        "--depth", "3", "--radius-bound", "2.0",
                        "--out", str(mp)]) == 0
        mesh = sceneio.mesh_from_json(mp.read_text())
        assert mesh.n_triangles > 0

    def test_annulus_large_kind(self, tmp_path):
        th = np.arange(129) / 129
        L = float(np.exp(4.0))
        inner = q.BoundaryHomeo(q.Circle(0j, 1.0), th, np.exp(2j * np.pi * th))
        outer = q.BoundaryHomeo(q.Circle(0j, L), th, L * np.exp(2j * np.pi * th))
        bp = tmp_path / "b.json"
        bp.write_text(json.dumps({"inner": sceneio.boundary_to_dict(inner),
                                  "outer": sceneio.boundary_to_dict(outer)}))
        out = tmp_path / "comp.json"
        assert run_cli(["extend", "--kind", "annulus-large", "--boundary", str(bp),
                        "--depth", "3", "--log-ratio-bound", "2.0",
                        "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert d["middle_power"]["beta"] == pytest.approx(1.0)

    def test_ba_kind(self, tmp_path):
        xs = np.linspace(-8, 8, 257)
        b = q.BoundaryHomeo(q.Line(0.0), xs, xs)
        bp = tmp_path / "b.json"
        bp.write_text(json.dumps(sceneio.boundary_to_dict(b)))
        out = tmp_path / "ba.json"
        assert run_cli(["extend", "--kind", "ba", "--boundary", str(bp),
                        "--window", "-4", "4", "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        pts = np.asarray([complex(x, y) for x, y in d["points"]])
        vals = np.asarray([complex(x, y) for x, y in d["values"]])
        assert np.abs(vals - (pts.real + 0.5j * pts.imag)).max() < 1e-8


class TestVerdictRender:
    def test_profile_svg_from_verdict(self, tmp_path):
        p = tmp_path / "s.json"
        scene = q.Scene()
        scene.add_region("U", q.HalfPlane(normal=1j, offset=1.0))
        scene.add_region("V", q.HalfPlane(normal=-1j, offset=0.0))
        scene.add_samples("S", "V", np.linspace(-2, 2, 6).astype(complex))
        p.write_text(sceneio.scene_to_json(scene))
        vp = tmp_path / "v.json"
        assert run_cli(["verdict", "--scene", str(p), "--pair", "U,V",
                        "--samples", "S", "--budget", "4000", "--h", "0.05",
                        "--bbox", "-3", "3", "0", "1", "--out", str(vp)]) == 0
        out = tmp_path / "prof.svg"
        assert run_cli(["render", "--verdict", str(vp), "--out", str(out)]) == 0
        assert "polyline" in out.read_text()

    def test_concentric_reference_circles(self, tmp_path):
        from qcpair import scenarios as sc

        b = sc.concentric_annulus(1.0, 2.0)
        p = tmp_path / "s.json"
        p.write_text(sceneio.scene_to_json(b.scene))
        out = tmp_path / "fig.svg"
        assert run_cli(["render", "--scene", str(p), "--out", str(out)]) == 0
        assert "stroke-dasharray" in out.read_text()


class TestSceneRoundTripAllBundles:
    def test_every_bundle_scene_round_trips(self):
        from qcpair import scenarios as sc

        for bundle in sc.default_suite():
            t1 = sceneio.scene_to_json(bundle.scene)
            t2 = sceneio.scene_to_json(sceneio.scene_from_json(t1))
            assert t1 == t2, bundle.name
