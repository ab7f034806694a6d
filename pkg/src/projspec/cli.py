"""Command line front end: ``projspec <subcommand> [flags]``.

A job is described by a JSON config (``--config``) and/or flags; flags
win.  Every run writes its outputs plus ``manifest.txt`` into ``out_dir``.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__, defaults
from . import dynamics as dyn
from .groups import build_group, h0_containment_test, load_group, markov_operator
from .jointspec import (
    MatrixTuple,
    NotCommutingError,
    approx_point_membership,
    harte_membership,
    koszul_build,
    koszul_homology_dims,
)
from .pencil import (
    ProjPoint,
    char_poly,
    evaluate,
    format_complex,
    load_pencil,
    matrices_from_json,
    matrices_to_json,
    parse_complex,
)
from .render import ChartSlice, make_slice, escape_field, write_csv, write_image

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2, 3

SUBCOMMANDS = ("spectrum", "koszul", "group", "julia", "iterate", "verify")

# tolerances that may be overridden from a config
TOLERANCE_KEYS = tuple(k for k in defaults.DEFAULTS if k.endswith("_tol"))


class ConfigError(ValueError):
    """Invalid job configuration (exit code 3)."""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class JobConfig:
    subcommand: str
    out_dir: str = "out"
    seed: int = defaults.SEED
    # inputs
    pencil: str | None = None
    tuple: str | None = None
    group: str | None = None
    kind: str | None = None
    N: int | None = None
    L: int | None = None
    points: list | None = None
    lambdas: list | None = None
    point: str | None = None
    # numeric parameters
    n: int = 10
    maxiter: int = defaults.MAXITER
    radius: float = defaults.ESCAPE_RADIUS
    chart: int = 0
    x_axis: str = "z1.re"
    y_axis: str = "z2.re"
    x_range: list = field(default_factory=lambda: [-3.0, 3.0])
    y_range: list = field(default_factory=lambda: [-3.0, 3.0])
    offsets: list = field(default_factory=lambda: ["0", "0"])
    width: int = 512
    height: int = 512
    workers: int = 1
    checks: list | None = None
    tolerances: dict = field(default_factory=dict)

    def tol(self, key):
        return self.tolerances.get(key, defaults.DEFAULTS[key])


_FIELDS = {f.name for f in fields(JobConfig)}
_INTS = ("seed", "N", "L", "n", "maxiter", "chart", "width", "height", "workers")


def _validate(cfg: dict) -> JobConfig:
    unknown = sorted(set(cfg) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if cfg.get("subcommand") not in SUBCOMMANDS:
        raise ConfigError(f"subcommand must be one of {', '.join(SUBCOMMANDS)}")
    for k in _INTS:
        v = cfg.get(k)
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise ConfigError(f"{k} must be an integer")
    tols = dict(cfg.get("tolerances") or {})
    bad = sorted(set(tols) - set(TOLERANCE_KEYS))
    if bad:
        raise ConfigError(f"unknown tolerances: {', '.join(bad)}")
    for k, v in tols.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"tolerance {k} must be a positive number")
    cfg["tolerances"] = tols
    job = JobConfig(**cfg)
    if job.maxiter < 1:
        raise ConfigError("maxiter must be positive")
    if not job.radius > 2:
        raise ConfigError("escape radius must exceed 2")
    if job.n < 0:
        raise ConfigError("n must be non-negative")
    if job.width < 1 or job.height < 1:
        raise ConfigError("resolution must be positive")
    if job.workers < 1:
        raise ConfigError("workers must be positive")
    for name in ("x_range", "y_range"):
        r = getattr(job, name)
        if len(r) != 2 or not all(isinstance(x, (int, float)) for x in r) or not r[0] < r[1]:
            raise ConfigError(f"{name} must be [min, max] with min < max")
    return job


def parse_config(text: str, overrides: dict | None = None) -> JobConfig:
    """JSON text -> validated :class:`JobConfig`; ``overrides`` (from flags) win."""
    try:
        cfg = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    cfg.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return _validate(cfg)


# ---------------------------------------------------------------------------
# outputs


def write_manifest(job: JobConfig, outputs, extra=()):
    """Plain-text record of the job.  No timestamps, so reruns are byte-identical."""
    lines = [f"projspec {__version__}", f"subcommand: {job.subcommand}", "", "[parameters]"]
    for k, v in asdict(job).items():
        if k != "tolerances":
            lines.append(f"{k} = {json.dumps(v, sort_keys=True)}")
    lines += ["", "[tolerances]"]
    for k, v in defaults.DEFAULTS.items():
        lines.append(f"{k} = {job.tolerances.get(k, v)!r}")
    lines += ["", "[outputs]"] + [str(Path(p).name) for p in outputs]
    if extra:
        lines += ["", "[results]"] + list(extra)
    path = Path(job.out_dir) / "manifest.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def _row_writer(path):
    fh = open(path, "w", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def _num(x):
    return f"{float(x):.17g}"


def _point(value) -> ProjPoint:
    if isinstance(value, str):
        return ProjPoint.parse(value)
    return ProjPoint(tuple(parse_complex(v) if isinstance(v, str) else complex(v) for v in value))


def _cvec(value) -> np.ndarray:
    if isinstance(value, str):
        value = value.strip("()[]").split(",")
    return np.array([parse_complex(v) if isinstance(v, str) else complex(v) for v in value])


def _slice(job: JobConfig) -> ChartSlice:
    return ChartSlice(job.chart, job.x_axis, job.y_axis, tuple(job.x_range), tuple(job.y_range),
                      tuple(parse_complex(str(o)) for o in job.offsets), job.width, job.height)


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(job: JobConfig, out: Path):
    if not job.pencil:
        raise ConfigError("spectrum needs a pencil file")
    p = load_pencil(job.pencil)
    if job.points:
        pts = np.array([_point(z).array() for z in job.points])
    elif p.n == 2:
        pts = make_slice(_slice(job))
    else:
        raise ConfigError("grid mode needs a pencil with three matrices; give explicit points otherwise")
    if pts.shape[1] != p.n + 1:
        raise ConfigError(f"points need {p.n + 1} coordinates")
    tol = job.tol("singular_tol")
    path = out / "spectrum.csv"
    fh, wr = _row_writer(path)
    members = 0
    with fh:
        wr.writerow([f"z{k}_{part}" for k in range(p.n + 1) for part in ("re", "im")]
                    + ["sigma_ratio", "member"])
        for z in pts:
            z = z / z[np.argmax(np.abs(z))]
            s = np.linalg.svd(evaluate(p, z), compute_uv=False)
            ratio = s[-1] / max(1.0, s[0])
            member = ratio <= tol
            members += member
            wr.writerow([_num(v) for c in z for v in (c.real, c.imag)] + [_num(ratio), int(member)])
    print(f"{members} of {len(pts)} points in the projective spectrum")
    return [path], [f"points = {len(pts)}", f"members = {members}"], EXIT_OK


def cmd_koszul(job: JobConfig, out: Path):
    if not job.tuple or not job.lambdas:
        raise ConfigError("koszul needs a tuple file and a lambda list")
    with open(job.tuple) as fh:
        kind, mats = matrices_from_json(fh.read())
    if kind != "tuple":
        raise ConfigError("koszul needs a matrix file of kind 'tuple'")
    try:
        t = MatrixTuple(tuple(mats)).verified(job.tol("commute_tol")).require_commuting()
    except NotCommutingError as exc:
        raise ConfigError(str(exc)) from None
    k_tol, s_tol = job.tol("rank_tol"), job.tol("singular_tol")
    path = out / "koszul.csv"
    fh, wr = _row_writer(path)
    bad = 0
    with fh:
        wr.writerow([f"lambda{k}_{part}" for k in range(t.n) for part in ("re", "im")]
                    + ["approx_point", "harte", "taylor", "homology"])
        for lam in job.lambdas:
            lam = _cvec(lam)
            if lam.size != t.n:
                raise ConfigError(f"lambda {lam} needs {t.n} entries")
            ap = approx_point_membership(t, lam, s_tol)
            h = harte_membership(t, lam, s_tol)
            dims = koszul_homology_dims(koszul_build(t.shifted(lam)), k_tol)
            tay = any(dims)
            bad += (ap and not h) or (h and not tay)
            wr.writerow([_num(v) for c in lam for v in (c.real, c.imag)]
                        + [int(ap), int(h), int(tay), " ".join(map(str, dims))])
    print(f"{len(job.lambdas)} points tested, {bad} inclusion violations")
    return [path], [f"inclusion_violations = {bad}"], EXIT_NUMERIC if bad else EXIT_OK


def cmd_group(job: JobConfig, out: Path):
    if job.group:
        reps = load_group(job.group)
    elif job.kind:
        spec = {"kind": job.kind}
        if job.N is not None:
            spec["N"] = job.N
        if job.L is not None:
            spec["L"] = job.L
        reps = build_group(spec)
    else:
        raise ConfigError("group needs a group file or a kind")
    lines = []
    outputs = []
    for idx, r in enumerate(reps):
        m = markov_operator(r)
        ev = np.sort_complex(np.round(np.linalg.eigvals(m), 12))
        h0 = h0_containment_test(r, samples=defaults.H0_SAMPLES, seed=job.seed)
        name = r.name or f"rep{idx}"
        lines.append(f"{name}: generators {r.n}, dimension {r.d}")
        lines.append(f"  markov norm = {_num(np.linalg.norm(m, 2))}")
        lines.append(f"  markov spectral radius = {_num(np.max(np.abs(ev)))}")
        lines.append(f"  h0 contained = {str(h0).lower()}")
        if r.d <= defaults.CHARPOLY_MAX_DIM:
            lines.append(f"  char poly = {char_poly(r.pencil()).rounded()}")
        mpath = out / f"rep{idx}.json"
        mpath.write_text(matrices_to_json(r.matrices, "tuple"))
        spath = out / f"rep{idx}_markov.csv"
        fh, wr = _row_writer(spath)
        with fh:
            wr.writerow(["re", "im"])
            for e in ev:
                wr.writerow([_num(e.real + 0.0), _num(e.imag + 0.0)])
        outputs += [mpath, spath]
    report = out / "report.txt"
    report.write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return [report] + outputs, lines, EXIT_OK


def cmd_julia(job: JobConfig, out: Path):
    s = _slice(job)
    pts = make_slice(s)
    f = escape_field(pts, job.maxiter, job.radius, (s.height, s.width), job.workers)
    img, tab = out / "julia.ppm", out / "julia.csv"
    write_image(f, img)
    write_csv(pts, f.counts.reshape(-1), tab, "escape")
    bounded = int(np.sum(f.counts < 0))
    print(f"{s.width}x{s.height} slice, {bounded} bounded pixels")
    return [img, tab], [f"bounded_pixels = {bounded}"], EXIT_OK


def cmd_iterate(job: JobConfig, out: Path):
    if not job.point:
        raise ConfigError("iterate needs a starting point")
    z = _point(job.point)
    if z.dim != 2:
        raise ConfigError("iterate works on points of P^2")
    t = dyn.tau(z)
    use_closed = not dyn.is_infinite(t) and not dyn.on_interval(t, job.tol("real_axis_tol"))
    path = out / "orbit.csv"
    fh, wr = _row_writer(path)
    worst = 0.0
    w = z.normalized()
    with fh:
        wr.writerow(["n", "direct", "closed", "difference", "tau"])
        for k in range(job.n + 1):
            if k:
                w = dyn.F_pi(w)
            closed, diff = "", ""
            if use_closed and k:
                c = dyn.iterate_closed(z, k)
                d = max(abs(a - b) for a, b in zip(w.canonical(), c.canonical()))
                worst = max(worst, d)
                closed, diff = str(c), _num(d)
            tk = dyn.tau(w)
            wr.writerow([k, str(w), closed, diff, "inf" if dyn.is_infinite(tk) else format_complex(tk)])
    print(w)
    ok = worst <= 1e-9
    return [path], [f"final = {w}", f"max_closed_form_difference = {_num(worst)}"], \
        EXIT_OK if ok else EXIT_NUMERIC


def cmd_verify(job: JobConfig, out: Path):
    from . import verify

    checks = verify.select_checks(job.checks)
    results = verify.run_suite(job.seed, checks)
    path = out / "verify.csv"
    fh, wr = _row_writer(path)
    with fh:
        wr.writerow(["check", "passed", "detail"])
        for r in results:
            wr.writerow([r.name, int(r.passed), r.detail])
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    summary = [f"{r.name} = {'pass' if r.passed else 'FAIL'}" for r in results]
    return [path], summary, EXIT_NUMERIC if failed else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "koszul": cmd_koszul,
    "group": cmd_group,
    "julia": cmd_julia,
    "iterate": cmd_iterate,
    "verify": cmd_verify,
}


def run(job: JobConfig) -> int:
    out = Path(job.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        outputs, results, code = COMMANDS[job.subcommand](job, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    write_manifest(job, outputs, results)
    return code


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(f"not valid JSON: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="projspec", description="Projective spectra, joint spectra and D-infinity dynamics.")
    top.add_argument("--defaults", action="store_true", help="print the numeric defaults and exit")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="subcommand", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="JSON job file; flags override its values")
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--seed", type=int)
        p.add_argument("--tolerances", type=_json_arg, help='e.g. \'{"singular_tol": 1e-9}\'')
        return p

    def region(p):
        p.add_argument("--chart", type=int)
        p.add_argument("--x-axis", dest="x_axis")
        p.add_argument("--y-axis", dest="y_axis")
        p.add_argument("--x-range", dest="x_range", type=float, nargs=2)
        p.add_argument("--y-range", dest="y_range", type=float, nargs=2)
        p.add_argument("--offsets", nargs=2)
        p.add_argument("--width", type=int)
        p.add_argument("--height", type=int)
        p.add_argument("--resolution", type=int, help="sets width and height")

    p = common(sub.add_parser("spectrum", help="pencil membership on a grid or point list"))
    p.add_argument("--pencil")
    p.add_argument("--points", nargs="+")
    region(p)

    p = common(sub.add_parser("koszul", help="Taylor/Harte/approximate point membership"))
    p.add_argument("--tuple")
    p.add_argument("--lambdas", nargs="+", help="comma separated, e.g. 1,0 0,1+2i")

    p = common(sub.add_parser("group", help="build a representation and run the H0 test"))
    p.add_argument("--group", help="group specification file")
    p.add_argument("--kind")
    p.add_argument("--N", type=int)
    p.add_argument("--L", type=int)

    p = common(sub.add_parser("julia", help="escape-time render of a chart slice"))
    region(p)
    p.add_argument("--maxiter", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--workers", type=int)

    p = common(sub.add_parser("iterate", help="orbit of a point under F_pi"))
    p.add_argument("--point")
    p.add_argument("--n", type=int)

    p = common(sub.add_parser("verify", help="run the invariant suite"))
    p.add_argument("--checks", nargs="+")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.defaults:
        print(defaults.format_table())
        return EXIT_OK
    if not args.subcommand:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "defaults", "resolution")}
    if getattr(args, "resolution", None):
        flags["width"] = flags["height"] = args.resolution
    for k in ("x_range", "y_range", "offsets"):
        if flags.get(k) is not None:
            flags[k] = list(flags[k])
    try:
        text = Path(args.config).read_text() if args.config else "{}"
        if args.config:
            # the config may name the subcommand too; it has to agree
            doc = json.loads(text) if text.strip() else {}
            if isinstance(doc, dict) and doc.get("subcommand", args.subcommand) != args.subcommand:
                raise ConfigError(f"config is for {doc['subcommand']!r}, not {args.subcommand!r}")
        job = parse_config(text, flags)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
