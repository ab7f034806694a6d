"""Joint spectra of matrix tuples.

Koszul complexes and Taylor membership, Harte and joint approximate point
membership, the splitting homotopy built from a solution of
``sum A_i B_i = I``, joint eigenvalues of commuting tuples, and the
hyperplane-union test that detects commutativity of normal matrices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np
from scipy.linalg import schur

from . import defaults
from .pencil import DimensionError, MatrixPencil, as_matrix, char_poly, linear_multiplicity


class NotCommutingError(ValueError):
    pass


class SpectrumError(ValueError):
    """Raised when a point lies in a spectrum that the operation must avoid."""


def _norm(m):
    return np.linalg.norm(m, 2) if m.size else 0.0


def max_commutator(mats) -> float:
    worst = 0.0
    for a, b in itertools.combinations(mats, 2):
        worst = max(worst, _norm(a @ b - b @ a))
    return worst


def commutes(mats, tol=defaults.COMMUTE_TOL) -> bool:
    scale = max((_norm(m) for m in mats), default=0.0) ** 2
    return max_commutator(mats) <= tol * max(scale, np.finfo(float).tiny)


def is_normal(m, tol=defaults.NORMAL_TOL) -> bool:
    m = np.asarray(m)
    return _norm(m @ m.conj().T - m.conj().T @ m) <= tol * max(1.0, _norm(m) ** 2)


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """``(A_1, ..., A_n)`` of equal-size square matrices.

    ``commuting`` is ``True``/``False`` once checked and ``None`` before.
    """

    matrices: tuple
    commuting: bool | None = None

    def __post_init__(self):
        mats = tuple(as_matrix(m) for m in self.matrices)
        if not mats:
            raise DimensionError("empty tuple")
        d = mats[0].shape[0]
        if any(m.shape != (d, d) for m in mats):
            raise DimensionError("tuple matrices must be square of one common size")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def of(cls, *mats, check=True) -> MatrixTuple:
        t = cls(tuple(mats))
        return t.verified() if check else t

    @property
    def n(self):
        return len(self.matrices)

    @property
    def d(self):
        return self.matrices[0].shape[0]

    def verified(self, tol=defaults.COMMUTE_TOL) -> MatrixTuple:
        if self.commuting is not None:
            return self
        return replace(self, commuting=commutes(self.matrices, tol))

    def require_commuting(self) -> MatrixTuple:
        t = self.verified()
        if not t.commuting:
            raise NotCommutingError(
                f"tuple does not commute (max commutator {max_commutator(t.matrices):.3g})"
            )
        return t

    def shifted(self, lam) -> MatrixTuple:
        lam = np.asarray(lam, dtype=complex).reshape(-1)
        if lam.size != self.n:
            raise DimensionError(f"expected {self.n} shift values, got {lam.size}")
        eye = np.eye(self.d)
        # shifting by scalars preserves commutativity
        return MatrixTuple(
            tuple(a - l * eye for a, l in zip(self.matrices, lam)), self.commuting
        )


# ---------------------------------------------------------------------------
# Koszul complex


def wedge_basis(n: int, p: int) -> list[tuple[int, ...]]:
    """Lexicographically ordered index sets spanning the p-forms."""
    return list(itertools.combinations(range(n), p))


def _wedge_sign(i: int, subset) -> int:
    """Sign of ``e_i ^ e_S`` relative to the sorted form of ``S + {i}``."""
    return -1 if sum(1 for s in subset if s < i) % 2 else 1


@dataclass(frozen=True, eq=False)
class KoszulComplex:
    n: int
    d: int
    boundaries: tuple  # d_0 .. d_{n-1}

    def dim(self, p):
        return self.d * comb(self.n, p)

    def boundary(self, p) -> np.ndarray:
        """``d_p`` with the conventions ``d_{-1} = 0`` and ``d_n = 0``."""
        if 0 <= p < self.n:
            return self.boundaries[p]
        if p == -1:
            return np.zeros((self.dim(0), 0), dtype=complex)
        if p == self.n:
            return np.zeros((0, self.dim(self.n)), dtype=complex)
        raise IndexError(p)


def koszul_build(t: MatrixTuple) -> KoszulComplex:
    """Boundary maps ``d_p(x (x) w) = sum_i A_i x (x) (e_i ^ w)``.

    Block rows and columns follow the lexicographic order of the wedge
    basis; inside each block the vector index runs fastest.
    """
    n, d = t.n, t.d
    maps = []
    for p in range(n):
        src = wedge_basis(n, p)
        dst = {s: k for k, s in enumerate(wedge_basis(n, p + 1))}
        m = np.zeros((d * len(dst), d * len(src)), dtype=complex)
        for col, s in enumerate(src):
            for i in range(n):
                if i in s:
                    continue
                row = dst[tuple(sorted(s + (i,)))]
                m[row * d:(row + 1) * d, col * d:(col + 1) * d] = _wedge_sign(i, s) * t.matrices[i]
        maps.append(m)
    return KoszulComplex(n, d, tuple(maps))


def numeric_rank(m, tol=defaults.RANK_TOL) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def koszul_homology_dims(k: KoszulComplex, tol=defaults.RANK_TOL) -> list[int]:
    """``nullity(d_p) - rank(d_{p-1})`` for p = 0..n."""
    ranks = {p: numeric_rank(k.boundary(p), tol) for p in range(-1, k.n + 1)}
    return [k.dim(p) - ranks[p] - ranks[p - 1] for p in range(k.n + 1)]


def koszul_is_exact(k: KoszulComplex, tol=defaults.RANK_TOL) -> bool:
    return all(h == 0 for h in koszul_homology_dims(k, tol))


def taylor_membership(t: MatrixTuple, lam, tol=defaults.RANK_TOL) -> bool:
    t = t.require_commuting()
    return not koszul_is_exact(koszul_build(t.shifted(lam)), tol)


# ---------------------------------------------------------------------------
# splitting homotopy


@dataclass(frozen=True, eq=False)
class HomotopyMaps:
    n: int
    d: int
    maps: tuple  # t_1 .. t_n ; t_p maps p-forms to (p-1)-forms
    residual: float

    def t(self, p) -> np.ndarray:
        if 1 <= p <= self.n:
            return self.maps[p - 1]
        if p == 0:
            return np.zeros((0, self.d), dtype=complex)
        if p == self.n + 1:
            return np.zeros((self.d, 0), dtype=complex)
        raise IndexError(p)


def splitting_homotopy(t: MatrixTuple, b: MatrixTuple, tol=1e-8) -> HomotopyMaps:
    """Contracting homotopy for the Koszul complex of ``t``.

    ``t_p(x (x) e_{i_1} ^ ... ^ e_{i_p}) =
    sum_m (-1)^(m-1) B_{i_m} x (x) (e_{i_1} ^ ... omit i_m ... ^ e_{i_p})``.
    The residual is ``max_p ||t_{p+1} d_p + d_{p-1} t_p - I||``.
    """
    if b.n != t.n or b.d != t.d:
        raise DimensionError("B must match the shape of A")
    eye = np.eye(t.d)
    if _norm(sum(a @ bb for a, bb in zip(t.matrices, b.matrices)) - eye) > tol:
        raise SpectrumError("sum A_i B_i differs from the identity")
    if not commutes(t.matrices + b.matrices, 1e-8):
        raise NotCommutingError("the matrices A_i, B_j must commute pairwise")
    n, d = t.n, t.d
    maps = []
    for p in range(1, n + 1):
        src = wedge_basis(n, p)
        dst = {s: k for k, s in enumerate(wedge_basis(n, p - 1))}
        m = np.zeros((d * len(dst), d * len(src)), dtype=complex)
        for col, s in enumerate(src):
            for pos, i in enumerate(s):
                row = dst[s[:pos] + s[pos + 1:]]
                m[row * d:(row + 1) * d, col * d:(col + 1) * d] = (-1) ** pos * b.matrices[i]
        maps.append(m)
    k = koszul_build(t)
    h = HomotopyMaps(n, d, tuple(maps), 0.0)
    residual = 0.0
    for p in range(n + 1):
        total = h.t(p + 1) @ k.boundary(p) + k.boundary(p - 1) @ h.t(p)
        residual = max(residual, _norm(total - np.eye(k.dim(p))))
    return replace(h, residual=float(residual))


# ---------------------------------------------------------------------------
# Harte and approximate point spectra


def _vertical(t: MatrixTuple, lam):
    return np.vstack(t.shifted(lam).matrices)


def _horizontal(t: MatrixTuple, lam):
    return np.hstack(t.shifted(lam).matrices)


def approx_point_membership(t: MatrixTuple, lam, tol=defaults.SINGULAR_TOL) -> bool:
    """Is there a common approximate null vector of the shifted tuple?"""
    s = np.linalg.svd(_vertical(t, lam), compute_uv=False)
    return bool(s[-1] <= tol * max(1.0, s[0]))


def harte_membership(t: MatrixTuple, lam, tol=defaults.SINGULAR_TOL) -> bool:
    if approx_point_membership(t, lam, tol):
        return True
    return numeric_rank(_horizontal(t, lam), tol) < t.d


def cho_takaguchi_inverse(t: MatrixTuple, lam) -> MatrixTuple:
    """``B_k = S_k^* (sum_j S_j S_j^*)^{-1}`` for the shifted tuple ``S = A - lam``."""
    if approx_point_membership(t, lam):
        raise SpectrumError(f"{tuple(np.ravel(lam))} lies in the approximate point spectrum")
    s = t.shifted(lam).matrices
    gram = sum(m @ m.conj().T for m in s)
    inv = np.linalg.inv(gram)
    return MatrixTuple(tuple(m.conj().T @ inv for m in s))


# ---------------------------------------------------------------------------
# joint eigenvalues


def joint_eigenvalues(t: MatrixTuple, seed=defaults.SEED) -> np.ndarray:
    """Joint eigenvalues with multiplicity, as a ``(d, n)`` array.

    One Schur decomposition of a generic combination ``sum c_i A_i``
    triangularizes the whole commuting tuple; the diagonals of each
    ``Z^* A_j Z`` are then read off in the same order.
    """
    t = t.require_commuting()
    rng = np.random.default_rng(seed)
    c = rng.normal(size=t.n) + 1j * rng.normal(size=t.n)
    combo = sum(ci * a for ci, a in zip(c, t.matrices))
    _, z = schur(combo, output="complex")
    return np.array([np.diag(z.conj().T @ a @ z) for a in t.matrices]).T


def in_joint_eigenvalues(t: MatrixTuple, lam, tol=1e-8) -> bool:
    lam = np.asarray(lam, dtype=complex).reshape(1, -1)
    ev = joint_eigenvalues(t)
    return bool(np.any(np.max(np.abs(ev - lam), axis=1) <= tol))


# ---------------------------------------------------------------------------
# hyperplane union test


@dataclass(frozen=True)
class HyperplaneVerdict:
    factors: bool
    forms: tuple = field(default=())  # (w, multiplicity) pairs, w = (1, l_1, ..., l_n)
    commuting: bool = False

    @property
    def consistent(self):
        return self.factors == self.commuting

    @property
    def verdict(self):
        return "factors" if self.factors else "does-not-factor"


def _distinct(values, tol=1e-8):
    out = []
    for v in values:
        if all(abs(v - u) > tol for u in out):
            out.append(v)
    return out


def hyperplane_union_verdict(t: MatrixTuple, tol=defaults.HYPERPLANE_TOL) -> HyperplaneVerdict:
    """Decide whether the spectrum of ``(I, A_1, ..., A_n)`` is a union of hyperplanes.

    Candidate forms ``(1, l_1, ..., l_n)`` come from the product of the
    individual eigenvalue lists; accepted forms are divided out of ``Q``
    as often as possible.  For normal matrices the verdict "factors" is
    equivalent to pairwise commutativity, which is reported alongside.
    """
    if not all(is_normal(m) for m in t.matrices):
        raise ValueError("hyperplane_union_verdict needs normal matrices")
    q = char_poly(MatrixPencil.from_unitaries(t.matrices))
    eig_lists = [_distinct(np.linalg.eigvals(m)) for m in t.matrices]
    rest = q
    accepted = []
    for lam in itertools.product(*eig_lists):
        if rest.degree <= 0:
            break
        w = (1.0,) + tuple(lam)
        m, rest_new = linear_multiplicity(rest, w, tol)
        if m:
            accepted.append((w, m))
            rest = rest_new
    total = sum(m for _, m in accepted)
    return HyperplaneVerdict(
        factors=total == q.degree,
        forms=tuple(accepted),
        commuting=commutes(t.matrices),
    )
