import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projspec.polynomial import MultiPoly

z0, z1, z2 = (MultiPoly.variable(3, k) for k in range(3))


def test_degree_and_homogeneity():
    q = z0 * z0 + 2 * z1 * z2
    assert q.degree == 2
    assert q.is_homogeneous()
    assert not (q + z0).is_homogeneous()
    assert MultiPoly.zero(3).is_zero()


def test_pruning_drops_tiny_coefficients():
    q = z0 + 1e-14 * z1
    assert set(q.terms) == {(1, 0, 0)}


def test_evaluation_matches_arithmetic():
    q = (z0 - z1) ** 3 + z2 * z0
    pt = np.array([1.5 - 1j, 0.25, 2j])
    expect = (pt[0] - pt[1]) ** 3 + pt[2] * pt[0]
    assert abs(q(pt) - expect) < 1e-12


def test_divide_linear_exact():
    w = (1.0, -2.0, 0.5)
    form = MultiPoly.linear(w)
    other = z0 * z1 + z2 * z2
    quo, rem = (form * other).divide_linear(w)
    assert rem.is_zero()
    assert quo.allclose(other, 1e-12)


def test_divide_linear_remainder():
    _, rem = (z0 * z0 + z1 * z1).divide_linear((1.0, 1.0, 0.0))
    assert not rem.is_zero()


coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=3, max_size=3), st.lists(coef, min_size=3, max_size=3))
def test_product_of_linear_forms_divides(a, b):
    if max(abs(x) for x in a) < 1e-3 or max(abs(x) for x in b) < 1e-3:
        return
    la, lb = MultiPoly.linear(a), MultiPoly.linear(b)
    quo, rem = (la * lb).divide_linear(a)
    assert rem.max_coeff() <= 1e-9 * max(1.0, (la * lb).max_coeff())
    assert quo.allclose(lb, 1e-8)


def test_substitute_linear_kills_form():
    w = (2.0, 1.0, -1.0)
    q = MultiPoly.linear(w) * (z0 + z2)
    sub = MultiPoly.linear((0.0, -w[1] / w[0], -w[2] / w[0]))
    assert q.substitute_linear(0, sub).is_zero()
