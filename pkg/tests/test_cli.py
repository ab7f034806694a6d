import json
import subprocess
import sys

import numpy as np
import pytest

from projspec import defaults
from projspec.cli import ConfigError, main, parse_config
from projspec.pencil import MatrixPencil, ProjPoint, matrices_to_json, save_pencil


def test_minimal_julia_config_gets_defaults():
    job = parse_config('{"subcommand": "julia", "chart": 0, "width": 64, "height": 64}')
    assert job.maxiter == 100 and job.radius == 10.0 and job.seed == defaults.SEED


def test_negative_tolerance_rejected():
    with pytest.raises(ConfigError, match="positive"):
        parse_config('{"subcommand": "koszul", "tolerances": {"rank_tol": -1e-3}}')


def test_unknown_key_listed():
    with pytest.raises(ConfigError, match="colour"):
        parse_config('{"subcommand": "julia", "colour": "red"}')


def test_malformed_json():
    with pytest.raises(ConfigError):
        parse_config("{subcommand: julia")


def test_flags_override_config():
    job = parse_config('{"subcommand": "julia", "maxiter": 5}', {"maxiter": 7, "seed": None})
    assert job.maxiter == 7 and job.seed == defaults.SEED


def test_group_dihedral(tmp_path, capsys):
    assert main(["group", "--kind", "dihedral", "--N", "4", "--out-dir", str(tmp_path)]) == 0
    assert "h0 contained = true" in capsys.readouterr().out
    assert (tmp_path / "manifest.txt").exists()
    assert (tmp_path / "rep0.json").exists()


def test_group_gl3_reports_false(tmp_path, capsys):
    assert main(["group", "--kind", "gl3z3", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.count("h0 contained = false") == 2


def test_iterate_simple_point(tmp_path, capsys):
    assert main(["iterate", "--point", "[1:1:1]", "--n", "1", "--out-dir", str(tmp_path)]) == 0
    printed = capsys.readouterr().out.strip()
    assert ProjPoint.parse(printed) == ProjPoint((-1, 1, 0))


def test_iterate_fatou_point_checks_closed_form(tmp_path):
    assert main(["iterate", "--point", "[3:1:0.5+1i]", "--n", "8", "--out-dir", str(tmp_path)]) == 0
    rows = (tmp_path / "orbit.csv").read_text().splitlines()
    assert len(rows) == 10
    assert all(float(r.split(",")[3]) < 1e-9 for r in rows[2:])


def test_julia_outputs(tmp_path):
    assert main(["julia", "--resolution", "32", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "julia.ppm").read_bytes().startswith(b"P6\n32 32\n255\n")
    assert len((tmp_path / "julia.csv").read_text().splitlines()) == 32 * 32 + 1
    manifest = (tmp_path / "manifest.txt").read_text()
    assert "maxiter = 100" in manifest and "singular_tol" in manifest


def test_spectrum_grid_and_points(tmp_path):
    pencil = tmp_path / "p.json"
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1.0, -1.0])
    save_pencil(MatrixPencil((np.eye(2), x, z)), pencil)
    out = tmp_path / "o"
    args = ["spectrum", "--pencil", str(pencil), "--out-dir", str(out)]
    assert main(args + ["--points", "[1.4142135623730951:1:1]", "[1:1:1]"]) == 0
    rows = (out / "spectrum.csv").read_text().splitlines()
    assert [r.split(",")[-1] for r in rows[1:]] == ["1", "0"]
    assert main(args + ["--resolution", "8"]) == 0
    assert len((out / "spectrum.csv").read_text().splitlines()) == 65


def test_koszul(tmp_path):
    tup = tmp_path / "t.json"
    tup.write_text(matrices_to_json([np.diag([1.0, 2.0]), np.diag([0.0, 3.0])], "tuple"))
    out = tmp_path / "o"
    code = main(["koszul", "--tuple", str(tup), "--lambdas", "1,0", "2,3", "1,3", "--out-dir", str(out)])
    assert code == 0
    rows = [r.split(",") for r in (out / "koszul.csv").read_text().splitlines()[1:]]
    assert [r[6] for r in rows] == ["1", "1", "0"]


def test_koszul_non_commuting_is_invalid_input(tmp_path):
    tup = tmp_path / "t.json"
    tup.write_text(matrices_to_json([np.array([[0, 1], [1, 0]]), np.diag([1.0, -1.0])], "tuple"))
    assert main(["koszul", "--tuple", str(tup), "--lambdas", "0,0", "--out-dir", str(tmp_path)]) == 3


def test_exit_codes(tmp_path):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["julia", "--width", "many"]) == 1
    assert main(["spectrum", "--pencil", str(tmp_path / "missing.json"), "--out-dir", str(tmp_path)]) == 3
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"subcommand": "julia", "maxiter": 0}))
    assert main(["julia", "--config", str(cfg)]) == 3
    cfg.write_text(json.dumps({"subcommand": "group"}))
    assert main(["julia", "--config", str(cfg)]) == 3


def test_verify_subset(tmp_path):
    out = tmp_path / "v"
    assert main(["verify", "--checks", "constants", "indeterminacy", "--out-dir", str(out)]) == 0
    rows = (out / "verify.csv").read_text().splitlines()
    assert len(rows) == 3 and all(r.split(",")[1] == "1" for r in rows[1:])
    assert main(["verify", "--checks", "nonsense", "--out-dir", str(out)]) == 3


def test_defaults_table_via_module():
    res = subprocess.run([sys.executable, "-m", "projspec", "--defaults"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "escape_radius" in res.stdout and "20240917" in res.stdout
