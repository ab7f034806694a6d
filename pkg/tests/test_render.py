import numpy as np
import pytest

from projspec import dynamics as dyn
from projspec.render import (
    BOUNDED,
    ChartSlice,
    EscapeField,
    escape_field,
    gray_levels,
    image_bytes,
    make_slice,
    read_csv,
    read_image,
    render_slice,
    write_csv,
    write_image,
)


def test_slice_pixel_centres():
    s = ChartSlice(width=2, height=2, x_range=(0, 2), y_range=(0, 2))
    pts = make_slice(s)
    assert pts.shape == (4, 3)
    assert np.allclose(pts[:, 0], 1)
    assert np.allclose(pts[:, 1].real, [0.5, 1.5, 0.5, 1.5])
    assert np.allclose(pts[:, 2].real, [0.5, 0.5, 1.5, 1.5])


def test_slice_validation():
    with pytest.raises(ValueError):
        ChartSlice(chart=0, x_axis="z0.re")
    with pytest.raises(ValueError):
        ChartSlice(x_range=(1, 1))
    with pytest.raises(ValueError):
        ChartSlice(width=0)


def test_imaginary_axis_slice():
    s = ChartSlice(chart=2, x_axis="z0.im", y_axis="z1.re", width=3, height=1)
    pts = make_slice(s)
    assert np.allclose(pts[:, 2], 1) and np.allclose(pts[:, 0].real, 0)


def test_single_pixel_image():
    f = EscapeField(np.array([[BOUNDED]], dtype=np.int32), 100, 10.0)
    data = image_bytes(f)
    assert data == b"P6\n1 1\n255\n" + bytes([0, 0, 0])


def test_payload_length(tmp_path):
    _, f = render_slice(ChartSlice(width=17, height=5))
    path = tmp_path / "x.ppm"
    write_image(f, path)
    w, h, pix = read_image(path)
    assert (w, h) == (17, 5)
    header = b"P6\n17 5\n255\n"
    assert path.stat().st_size == len(header) + 3 * 17 * 5
    assert np.array_equal(pix[..., 0], gray_levels(f))


def test_gray_levels():
    f = EscapeField(np.array([[0, 50, 100, BOUNDED]], dtype=np.int32), 100, 10.0)
    assert gray_levels(f).tolist() == [[0, 128, 255, 0]]


def test_workers_do_not_change_output():
    s = ChartSlice(width=150, height=70)
    pts = make_slice(s)
    a = escape_field(pts, shape=(70, 150), workers=1)
    b = escape_field(pts, shape=(70, 150), workers=3, tile=16)
    assert np.array_equal(a.counts, b.counts)


def test_sentinel_matches_escape_membership():
    s = ChartSlice(width=40, height=40)
    pts, f = render_slice(s)
    for z, c in zip(pts, f.counts.reshape(-1)):
        assert (c == BOUNDED) == dyn.julia_membership(tuple(z), "escape")


def test_csv_roundtrip(tmp_path):
    pts = np.array([[1, 0.1 + 2j, 1 / 3], [2, 1, 0]], dtype=complex)
    path = tmp_path / "a.csv"
    write_csv(pts, np.array([0.25, -1.0]), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert lines[2].split(",")[6:8] == ["inf", "0"]
    back, taus, vals = read_csv(path)
    assert np.array_equal(back, pts)
    assert vals == ["0.25", "-1"]


def test_csv_empty(tmp_path):
    path = tmp_path / "e.csv"
    write_csv(np.zeros((0, 3)), [], path)
    assert len(path.read_text().splitlines()) == 1


def test_csv_length_mismatch(tmp_path):
    with pytest.raises(ValueError):
        write_csv(np.ones((2, 3)), [1], tmp_path / "x.csv")
