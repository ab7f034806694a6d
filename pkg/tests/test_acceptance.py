"""One test per acceptance criterion, each at full size and tolerance.

The per-criterion result lines are printed and collected into the
"acceptance criteria" section of the pytest summary.
"""
import time

from projspec import verify
from projspec.cli import main


def test_criterion_01_semiconjugacy(report):
    r = verify.check_semiconjugacy()
    ok = r.passed and r.seconds < 1.0
    assert report(1, r, ok), r.detail


def test_criterion_02_julia_equals_spectrum(report):
    r = verify.check_julia_grid()
    ok = r.passed and r.seconds < 10.0
    assert report(2, r, ok), r.detail


def test_criterion_03_indeterminacy(report):
    r = verify.check_indeterminacy()
    assert report(3, r), r.detail


def test_criterion_04_closed_form(report):
    r = verify.check_closed_form()
    assert report(4, r), r.detail


def test_criterion_05_limit_function(report):
    r = verify.check_limit_function()
    assert report(5, r), r.detail


def test_criterion_06_sine_identity(report):
    r = verify.check_sine_identity()
    assert report(6, r), r.detail


def test_criterion_07_koopman(report):
    r = verify.check_koopman()
    assert report(7, r), r.detail


def test_criterion_08_joint_spectra(report):
    r = verify.check_joint_spectra()
    ok = r.passed and r.seconds < 30.0
    assert report(8, r, ok), r.detail


def test_criterion_09_hyperplane_union(report):
    r = verify.check_hyperplane()
    assert report(9, r), r.detail


def test_criterion_10_amenability(report):
    r = verify.check_amenability()
    assert report(10, r), r.detail


def test_criterion_11_constants(report):
    r = verify.check_constants()
    assert report(11, r), r.detail


def _run_twice(args, tmp_path, names):
    outs = []
    codes = []
    # same config (out_dir included) both times; snapshot bytes after each run
    for _ in range(2):
        d = tmp_path
        codes.append(main(args + ["--out-dir", str(d)]))
        outs.append({n: (d / n).read_bytes() for n in names})
    return codes, outs[0] == outs[1]


def test_criterion_12_determinism(tmp_path, report):
    t0 = time.perf_counter()
    v_codes, v_same = _run_twice(["verify"], tmp_path / "verify", ["verify.csv", "manifest.txt"])
    j_codes, j_same = _run_twice(["julia", "--resolution", "256", "--workers", "4"], tmp_path / "julia",
                                 ["julia.ppm", "julia.csv", "manifest.txt"])
    ok = v_same and j_same and v_codes == [0, 0] and j_codes == [0, 0]
    detail = f"verify exit {v_codes}, identical={v_same}; julia exit {j_codes}, identical={j_same}"
    r = verify.CheckResult("determinism", ok, detail, time.perf_counter() - t0)
    assert report(12, r), detail
