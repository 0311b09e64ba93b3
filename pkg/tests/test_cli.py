import json
import math

import numpy as np
import pytest

from translatorkit import fileio
from translatorkit.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.err


class TestBound:
    def test_narrow(self, tmp_path, capsys):
        out = tmp_path / "b.json"
        rc, _ = run(capsys, "bound", "--d", "1.5707963", "--out", str(out))
        assert rc == 0
        rep = json.loads(out.read_text())
        assert rep["regime"] == "narrow"
        assert rep["bound"] == pytest.approx(0.34657, abs=5e-5)
        assert "s_star" not in rep
        assert rep["c_samples"] == []

    def test_wide_has_samples(self, tmp_path, capsys):
        out = tmp_path / "b.json"
        rc, _ = run(capsys, "bound", "--d", "4.0", "--out", str(out))
        assert rc == 0
        rep = json.loads(out.read_text())
        assert rep["regime"] == "wide"
        assert len(rep["c_samples"]) == 256
        assert 1.0 < rep["s_star"] < 1.8

    def test_domain_error_json(self, tmp_path, capsys):
        rc, err = run(capsys, "bound", "--d", "-1", "--out", str(tmp_path / "x.json"))
        assert rc == 3
        assert json.loads(err) == {"error": "domain", "param": "d"}


class TestGenVerify:
    def test_grim_pde_residual(self, tmp_path, capsys):
        obj = tmp_path / "g.obj"
        rep_path = tmp_path / "v.json"
        assert run(capsys, "gen", "--family", "grim", "--h", "0.01", "--out", str(obj))[0] == 0
        assert run(capsys, "verify", "--kind", "pde", "--in", str(obj), "--out", str(rep_path))[0] == 0
        rep = json.loads(rep_path.read_text())
        assert set(rep.keys()) == {"kind", "h", "max_residual", "l2_residual", "n_interior"}
        assert rep["kind"] == "pde"
        assert rep["max_residual"] < 1e-3

    def test_identity_residual(self, tmp_path, capsys):
        obj = tmp_path / "g.obj"
        rep_path = tmp_path / "v.json"
        run(capsys, "gen", "--family", "grim", "--h", "0.02", "--out", str(obj))
        assert run(capsys, "verify", "--kind", "identity", "--in", str(obj), "--out", str(rep_path))[0] == 0
        assert json.loads(rep_path.read_text())["max_residual"] < 2e-3

    def test_mean_curvature_on_plane(self, tmp_path, capsys):
        obj = tmp_path / "p.obj"
        rep_path = tmp_path / "v.json"
        run(capsys, "gen", "--family", "plane", "--rmax", "1.0", "--h", "0.2", "--out", str(obj))
        assert run(capsys, "verify", "--kind", "meanCurvature", "--in", str(obj), "--out", str(rep_path))[0] == 0
        assert json.loads(rep_path.read_text())["max_residual"] == 0.0

    def test_asymptotic_from_profile(self, tmp_path, capsys):
        csv = tmp_path / "b.csv"
        rep_path = tmp_path / "a.json"
        run(capsys, "gen", "--family", "bowl", "--rmax", "12", "--h", "0.01", "--out", str(csv))
        assert run(capsys, "verify", "--kind", "asymptotic", "--in", str(csv), "--out", str(rep_path))[0] == 0
        rep = json.loads(rep_path.read_text())
        assert set(rep.keys()) == {"kind", "h", "max_residual", "l2_residual", "n_interior", "samples"}

    def test_gen_round_trips(self, tmp_path, capsys):
        obj = tmp_path / "w.obj"
        run(capsys, "gen", "--family", "wing", "--R", "0.8", "--rmax", "1.6", "--h", "0.05", "--ntheta", "24", "--out", str(obj))
        mesh = fileio.read_mesh(obj)
        assert mesh.wrap and mesh.nv == 24
        csv = tmp_path / "w.csv"
        run(capsys, "gen", "--family", "wing", "--R", "0.8", "--rmax", "1.6", "--h", "0.05", "--out", str(csv))
        branches = fileio.read_profiles(csv)
        assert [b.branch for b in branches] == ["upper", "lower"]


class TestSweepTouch:
    def test_sweep_symmetric_cap(self, tmp_path, capsys):
        obj = tmp_path / "cap.obj"
        rep_path = tmp_path / "s.json"
        run(capsys, "gen", "--family", "bowl", "--rmax", "1.5", "--h", "0.05", "--ntheta", "32", "--out", str(obj))
        rc, _ = run(capsys, "sweep", "--in", str(obj), "--plane-normal", "1,0,0", "--steps", "64", "--out", str(rep_path))
        assert rc == 0
        rep = json.loads(rep_path.read_text())
        assert set(rep.keys()) == {"t0", "n_steps", "defects", "symmetric", "tolerance"}
        assert rep["symmetric"] is True
        assert len(rep["defects"]) == 64

    def test_touch_reports_contact(self, tmp_path, capsys):
        obj = tmp_path / "cap.obj"
        rep_path = tmp_path / "t.json"
        run(capsys, "gen", "--family", "bowl", "--rmax", "1.0", "--h", "0.05", "--ntheta", "32", "--out", str(obj))
        rc, _ = run(capsys, "touch", "--in", str(obj), "--family", "grim", "--h", "0.05", "--tol", "0.02", "--out", str(rep_path))
        assert rc == 0
        rep = json.loads(rep_path.read_text())
        assert set(rep.keys()) == {"parameter", "witness", "clearance_curve", "tolerance"}
        assert rep["parameter"] > 0.0
        assert len(rep["witness"]) == 3

    def test_intersect_schema(self, tmp_path, capsys):
        rep_path = tmp_path / "i.json"
        rc, _ = run(capsys, "intersect", "--d", str(math.pi), "--lambda", "1.5", "--steps", "64", "--out", str(rep_path))
        assert rc == 0
        rep = json.loads(rep_path.read_text())
        assert rep["difference"] == pytest.approx(rep["c_of_s"], abs=1e-9)
        assert len(rep["gamma_plus"]) == 64


class TestErrorsAndDeterminism:
    def test_invalid_flag_exit_2(self, tmp_path, capsys):
        rc, err = run(capsys, "gen", "--family", "nope", "--out", str(tmp_path / "x.obj"))
        assert rc == 2
        assert json.loads(err)["error"] == "invalid"

    def test_missing_input_exit_4(self, tmp_path, capsys):
        rc, err = run(capsys, "verify", "--kind", "pde", "--in", str(tmp_path / "none.obj"), "--out", str(tmp_path / "x.json"))
        assert rc == 4
        assert json.loads(err)["error"] == "io"

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "bound", "--d", "4.0", "--out", str(a))
        run(capsys, "bound", "--d", "4.0", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_seeded_gen_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.obj", tmp_path / "b.obj"
        for path in (a, b):
            run(capsys, "gen", "--family", "bowl", "--rmax", "1.0", "--h", "0.05",
                "--ntheta", "16", "--seed", "9", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, tmp_path, capsys):
        a, b = tmp_path / "a.obj", tmp_path / "b.obj"
        run(capsys, "gen", "--family", "bowl", "--rmax", "1.0", "--h", "0.05", "--ntheta", "16", "--seed", "1", "--out", str(a))
        run(capsys, "gen", "--family", "bowl", "--rmax", "1.0", "--h", "0.05", "--ntheta", "16", "--seed", "2", "--out", str(b))
        assert a.read_bytes() != b.read_bytes()
