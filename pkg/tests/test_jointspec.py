import numpy as np
import pytest

from projspec.jointspec import (
    MatrixTuple,
    NotCommutingError,
    SpectrumError,
    approx_point_membership,
    cho_takaguchi_inverse,
    harte_membership,
    hyperplane_union_verdict,
    in_joint_eigenvalues,
    joint_eigenvalues,
    koszul_build,
    koszul_homology_dims,
    koszul_is_exact,
    splitting_homotopy,
    taylor_membership,
    wedge_basis,
)
from projspec.verify import PAULI_X, PAULI_Z, random_commuting_tuple

D1 = np.diag([1.0, 2.0, 3.0])
D2 = np.diag([0.0, 5.0, 5.0])


def test_wedge_basis_counts():
    assert wedge_basis(3, 2) == [(0, 1), (0, 2), (1, 2)]
    assert len(wedge_basis(4, 2)) == 6


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_koszul_squares_to_zero(n):
    rng = np.random.default_rng(n)
    t = random_commuting_tuple(rng, n, 3)
    k = koszul_build(t)
    for p in range(n - 1):
        assert np.abs(k.boundary(p + 1) @ k.boundary(p)).max() < 1e-10


def test_koszul_requires_commuting():
    with pytest.raises(NotCommutingError):
        taylor_membership(MatrixTuple((PAULI_X, PAULI_Z)), (0, 0))


def test_diagonal_pair_spectrum():
    t = MatrixTuple.of(D1, D2)
    for lam in [(1, 0), (2, 5), (3, 5)]:
        assert taylor_membership(t, lam)
        assert harte_membership(t, lam)
        assert approx_point_membership(t, lam)
        assert in_joint_eigenvalues(t, lam)
    for lam in [(1, 5), (2, 0), (0.5, 0.5)]:
        assert not taylor_membership(t, lam)
        assert not approx_point_membership(t, lam)


def test_homology_dims_at_joint_eigenvalue():
    t = MatrixTuple.of(D1, D2)
    dims = koszul_homology_dims(koszul_build(t.shifted((1, 0))))
    assert dims[0] == 1 and sum(dims) > 0
    assert koszul_is_exact(koszul_build(t.shifted((1, 1))))


def test_jordan_block_single_operator():
    # for one operator all four spectra reduce to the eigenvalues
    j = np.array([[2.0, 1.0], [0.0, 2.0]])
    t = MatrixTuple.of(j)
    assert taylor_membership(t, (2,)) and harte_membership(t, (2,))
    assert not taylor_membership(t, (1,))


def test_cho_takaguchi_and_homotopy():
    t = MatrixTuple.of(D1, D2)
    lam = (1.5, 2.0)
    b = cho_takaguchi_inverse(t, lam)
    s = t.shifted(lam)
    total = sum(a @ bb for a, bb in zip(s.matrices, b.matrices))
    assert np.allclose(total, np.eye(3))
    h = splitting_homotopy(s, b)
    assert h.residual <= 1e-8


def test_cho_takaguchi_raises_on_spectrum():
    with pytest.raises(SpectrumError):
        cho_takaguchi_inverse(MatrixTuple.of(D1, D2), (1, 0))


def test_joint_eigenvalues_of_polynomial_tuple():
    rng = np.random.default_rng(7)
    t = random_commuting_tuple(rng, 3, 5)
    ev = joint_eigenvalues(t)
    assert ev.shape == (5, 3)
    for lam in ev:
        assert taylor_membership(t, lam)


def test_hyperplane_verdicts():
    commuting = hyperplane_union_verdict(MatrixTuple((D1, D2)))
    assert commuting.factors and commuting.consistent
    assert sum(m for _, m in commuting.forms) == 3
    pauli = hyperplane_union_verdict(MatrixTuple((PAULI_X, PAULI_Z)))
    assert not pauli.factors and pauli.verdict == "does-not-factor"


def test_hyperplane_rejects_non_normal():
    with pytest.raises(ValueError):
        hyperplane_union_verdict(MatrixTuple((np.array([[1.0, 1.0], [0.0, 1.0]]),)))
