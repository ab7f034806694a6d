"""Escape-time rendering of real 2-parameter slices of P^2."""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import defaults
from .dynamics import chebyshev_escape, tau_array

BOUNDED = -1  # escape field sentinel: no escape within maxiter (Julia)

_PARTS = ("re", "im")


def _parse_axis(name: str):
    coord, _, part = name.partition(".")
    if not coord.startswith("z") or part not in _PARTS:
        raise ValueError(f"axis must look like 'z1.re' or 'z2.im', got {name!r}")
    return int(coord[1:]), part


@dataclass(frozen=True)
class ChartSlice:
    """A W x H grid on the affine chart ``z_chart = 1``.

    ``x_axis``/``y_axis`` name the varying real parameter, e.g. ``"z1.re"``;
    ``offsets`` holds the complex base value of the two free coordinates
    (in increasing index order).
    """

    chart: int = 0
    x_axis: str = "z1.re"
    y_axis: str = "z2.re"
    x_range: tuple = (-3.0, 3.0)
    y_range: tuple = (-3.0, 3.0)
    offsets: tuple = (0j, 0j)
    width: int = 512
    height: int = 512

    def __post_init__(self):
        if self.chart not in (0, 1, 2):
            raise ValueError("chart must be 0, 1 or 2")
        if self.width < 1 or self.height < 1:
            raise ValueError("resolution must be at least 1x1")
        for lo, hi in (self.x_range, self.y_range):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError("ranges must be finite with min < max")
        axes = [_parse_axis(self.x_axis), _parse_axis(self.y_axis)]
        for coord, _ in axes:
            if coord == self.chart or coord not in (0, 1, 2):
                raise ValueError(f"axis coordinate z{coord} is not free on chart z{self.chart}=1")
        if axes[0] == axes[1]:
            raise ValueError("x and y axes coincide")
        if len(self.offsets) != 2:
            raise ValueError("need two offsets (one per free coordinate)")

    @property
    def free(self):
        return [k for k in range(3) if k != self.chart]

    def pixel_params(self):
        """Pixel-centre parameter values, each of shape (H, W)."""
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        xs = x0 + (np.arange(self.width) + 0.5) * (x1 - x0) / self.width
        ys = y0 + (np.arange(self.height) + 0.5) * (y1 - y0) / self.height
        return np.meshgrid(xs, ys)


def make_slice(s: ChartSlice) -> np.ndarray:
    """Homogeneous coordinates for every pixel, shape ``(W*H, 3)``, row-major."""
    px, py = s.pixel_params()
    z = np.zeros((s.height, s.width, 3), dtype=complex)
    z[..., s.chart] = 1
    for k, off in zip(s.free, s.offsets):
        z[..., k] = complex(off)
    for name, vals in ((s.x_axis, px), (s.y_axis, py)):
        coord, part = _parse_axis(name)
        z[..., coord] += vals if part == "re" else 1j * vals
    return z.reshape(-1, 3)


@dataclass(frozen=True, eq=False)
class EscapeField:
    counts: np.ndarray  # (H, W) int32, BOUNDED where no escape
    maxiter: int
    radius: float

    @property
    def width(self):
        return self.counts.shape[1]

    @property
    def height(self):
        return self.counts.shape[0]


def escape_counts(points, maxiter=defaults.MAXITER, radius=defaults.ESCAPE_RADIUS) -> np.ndarray:
    return chebyshev_escape(tau_array(points), maxiter, radius, BOUNDED)


def escape_field(points, maxiter=defaults.MAXITER, radius=defaults.ESCAPE_RADIUS,
                 shape=None, workers=1, tile=defaults.TILE) -> EscapeField:
    """Escape counts of ``T^n(tau(z))`` for every point.

    ``points`` is ``(N, 3)``; ``shape`` is ``(H, W)`` (defaults to one row).
    Work is split into ``tile x tile`` blocks written into a preallocated
    buffer, so the result does not depend on ``workers``.
    """
    pts = np.asarray(points, dtype=complex).reshape(-1, 3)
    h, w = shape if shape is not None else (1, len(pts))
    if h * w != len(pts):
        raise ValueError("shape does not match the number of points")
    grid = pts.reshape(h, w, 3)
    out = np.empty((h, w), dtype=np.int32)
    tiles = [(r, c) for r in range(0, h, tile) for c in range(0, w, tile)]

    def work(rc):
        r, c = rc
        out[r:r + tile, c:c + tile] = escape_counts(grid[r:r + tile, c:c + tile], maxiter, radius)

    if workers <= 1:
        for rc in tiles:
            work(rc)
    else:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(work, tiles))
    return EscapeField(out, maxiter, radius)


def render_slice(s: ChartSlice, maxiter=defaults.MAXITER, radius=defaults.ESCAPE_RADIUS,
                 workers=1) -> tuple[np.ndarray, EscapeField]:
    pts = make_slice(s)
    return pts, escape_field(pts, maxiter, radius, (s.height, s.width), workers)


def gray_levels(f: EscapeField) -> np.ndarray:
    """0 for bounded pixels, ``round(255 * min(1, n / maxiter))`` otherwise (half up)."""
    n = f.counts.astype(float)
    level = np.floor(255 * np.minimum(1.0, n / max(f.maxiter, 1)) + 0.5)
    return np.where(f.counts == BOUNDED, 0, level).astype(np.uint8)


def image_bytes(f: EscapeField) -> bytes:
    g = gray_levels(f)
    header = f"P6\n{f.width} {f.height}\n255\n".encode("ascii")
    return header + np.repeat(g[..., None], 3, axis=-1).tobytes()


def write_image(f: EscapeField, path):
    with open(path, "wb") as fh:
        fh.write(image_bytes(f))


def read_image(path) -> tuple[int, int, np.ndarray]:
    """Parse a P6 file written by :func:`write_image`."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, dims, maxval, payload = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError("not an 8-bit P6 pixmap")
    w, h = map(int, dims.split())
    return w, h, np.frombuffer(payload, dtype=np.uint8).reshape(h, w, 3)


def _num(x: float) -> str:
    return f"{x:.17g}"


CSV_HEADER = ["z0_re", "z0_im", "z1_re", "z1_im", "z2_re", "z2_im", "tau_re", "tau_im", "value"]


def write_csv(points, values, path, value_name="value"):
    """One row per point: coordinates, tau and the value, at 17 significant digits."""
    pts = np.asarray(points, dtype=complex).reshape(-1, 3)
    values = np.asarray(values).reshape(-1)
    if len(pts) != len(values):
        raise ValueError("points and values differ in length")
    taus = tau_array(pts) if len(pts) else np.zeros(0, dtype=complex)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(CSV_HEADER[:-1] + [value_name])
        for z, t, v in zip(pts, taus, values):
            row = []
            for c in z:
                row += [_num(c.real), _num(c.imag)]
            if np.isfinite(t):
                row += [_num(t.real), _num(t.imag)]
            else:
                row += ["inf", "0"]
            row.append(_num(v) if isinstance(v, (float, np.floating)) else str(v))
            wr.writerow(row)


def read_csv(path):
    """Inverse of :func:`write_csv`: ``(points, taus, values as strings)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    pts = np.array([[complex(float(r[2 * k]), float(r[2 * k + 1])) for k in range(3)] for r in body],
                   dtype=complex).reshape(-1, 3)
    taus = np.array([complex(float(r[6]), float(r[7])) for r in body], dtype=complex)
    return pts, taus, [r[8] for r in body]
