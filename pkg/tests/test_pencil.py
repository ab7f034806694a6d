import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projspec.pencil import (
    DimensionError,
    LinearForm,
    MatrixPencil,
    ProjPoint,
    char_poly,
    evaluate,
    format_complex,
    hyperplane_contained,
    is_singular,
    linear_multiplicity,
    load_pencil,
    matrices_from_json,
    parse_complex,
    random_line_singular_point,
    save_pencil,
    spectrum_membership,
)
from projspec.polynomial import MultiPoly

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Z = np.array([[1, 0], [0, -1]])


def test_projpoint_canonical_and_equality():
    p = ProjPoint((2, 4, -2))
    assert p.canonical() == (0.5, 1, -0.5)
    assert p == ProjPoint((1, 2, -1))
    assert hash(p) == hash(ProjPoint((1, 2, -1)))
    assert str(ProjPoint((-1, 1, 0))) == "[1:-1:0]"


def test_projpoint_tie_breaks_on_lowest_index():
    assert ProjPoint((1, -1, 0)).canonical() == (1, -1, 0)
    assert ProjPoint((-1, 1, 0)).canonical() == (1, -1, 0)


def test_projpoint_rejects_zero():
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0))


def test_parse_roundtrip():
    p = ProjPoint.parse("[1:2-1i:0.5i]")
    assert p.coords == (1, 2 - 1j, 0.5j)
    assert parse_complex(format_complex(3 - 2.5j)) == 3 - 2.5j
    assert format_complex(-0.0) == "0"


def test_pencil_validation():
    with pytest.raises(DimensionError):
        MatrixPencil((I2, np.eye(3)))
    with pytest.raises(DimensionError):
        MatrixPencil((I2,))


def test_singular_point_of_pauli_pencil():
    # det(z0 I + z1 X + z2 Z) = z0^2 - z1^2 - z2^2
    p = MatrixPencil((I2, X, Z))
    assert spectrum_membership(p, (np.sqrt(2), 1, 1))
    assert not spectrum_membership(p, (1, 1, 1))


def test_char_poly_pauli():
    q = char_poly(MatrixPencil((I2, X, Z)))
    z0, z1, z2 = (MultiPoly.variable(3, k) for k in range(3))
    assert q.allclose(z0 * z0 - z1 * z1 - z2 * z2, 1e-12)


def test_char_poly_methods_agree():
    rng = np.random.default_rng(1)
    mats = [rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)) for _ in range(3)]
    p = MatrixPencil(tuple(mats))
    a = char_poly(p, "expansion")
    b = char_poly(p, "interpolation")
    assert a.allclose(b, 1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_char_poly_matches_det(d, seed):
    rng = np.random.default_rng(seed)
    mats = [rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for _ in range(3)]
    p = MatrixPencil(tuple(mats))
    q = char_poly(p)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    det = np.linalg.det(evaluate(p, z))
    assert abs(q(z) - det) <= 1e-8 * max(1.0, abs(det))


def test_char_poly_degree_equals_dimension():
    p = MatrixPencil((np.eye(4), np.diag([1, 2, 3, 4.0])))
    assert char_poly(p).degree == 4


def test_hyperplanes_of_diagonal_pencil():
    p = MatrixPencil((np.eye(2), np.diag([1.0, 2.0]), np.diag([3.0, -1.0])))
    q = char_poly(p)
    assert hyperplane_contained(q, (1, 1, 3))
    assert hyperplane_contained(q, (1, 2, -1))
    assert not hyperplane_contained(q, (1, 1, 1))
    m, rest = linear_multiplicity(q, (1, 1, 3))
    assert m == 1 and rest.degree == 1


def test_linear_multiplicity_repeated():
    p = MatrixPencil((np.eye(3), np.eye(3), np.diag([1.0, 1.0, 2.0])))
    assert linear_multiplicity(char_poly(p), (1, 1, 1))[0] == 2


def test_is_singular():
    assert is_singular(np.zeros((2, 2)))
    assert is_singular(np.diag([1.0, 1e-12]))
    assert not is_singular(np.eye(3))
    with pytest.raises(DimensionError):
        is_singular(np.ones((2, 3)))


def test_random_line_point_is_singular():
    rng = np.random.default_rng(3)
    mats = [rng.normal(size=(4, 4)) for _ in range(3)]
    p = MatrixPencil(tuple(mats))
    z = random_line_singular_point(p, rng)
    assert spectrum_membership(p, z)


def test_file_roundtrip(tmp_path):
    p = MatrixPencil((I2, X, 1j * Z))
    path = tmp_path / "p.json"
    save_pencil(p, path)
    q = load_pencil(path)
    assert all(np.array_equal(a, b) for a, b in zip(p.matrices, q.matrices))


def test_file_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown"):
        matrices_from_json('{"kind": "pencil", "n": 0, "d": 1, "matrices": [[[[1, 0]]]], "x": 1}')


def test_linear_form_canonical():
    assert LinearForm((2, 0, -2)) == LinearForm((-1, 0, 1))
