"""Multiparameter linear pencils ``A(z) = z_0 A_0 + ... + z_n A_n``.

Projective points, singularity tests, the characteristic polynomial
``Q(z) = det A(z)`` and hyperplane containment for homogeneous polynomials.
The shared JSON matrix file format is also defined here.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import defaults
from .polynomial import MultiPoly


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# projective points


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` style numbers (``i`` or ``j`` both accepted)."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if s in ("j", "+j"):
        return 1j
    if s == "-j":
        return -1j
    return complex(s)


def format_complex(c: complex) -> str:
    c = complex(c) + 0.0  # no "-0"
    if c.imag == 0:
        return f"{c.real:.17g}"
    return f"{c.real:.17g}{c.imag:+.17g}i"


def canonical_coords(coords):
    """Divide by the max-modulus coordinate (lowest index wins ties)."""
    mags = [abs(c) for c in coords]
    top = max(mags)
    if top == 0:
        raise ValueError("the zero vector is not a projective point")
    k = next(i for i, m in enumerate(mags) if m >= top * (1 - 1e-12))
    pivot = coords[k]
    return tuple(c / pivot for c in coords)


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Homogeneous coordinates of a point of P^n.

    The raw coordinates are kept (pencil evaluation uses them as given);
    equality and hashing go through :meth:`canonical`.
    """

    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) < 2:
            raise ValueError("need at least two homogeneous coordinates")
        if all(c == 0 for c in coords):
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def parse(cls, text: str) -> ProjPoint:
        return cls(tuple(parse_complex(t) for t in text.strip().strip("[]").replace(":", ",").split(",")))

    @property
    def dim(self):
        return len(self.coords) - 1

    def canonical(self):
        return canonical_coords(self.coords)

    def normalized(self) -> ProjPoint:
        return ProjPoint(self.canonical())

    def array(self):
        return np.array([complex(c) for c in self.coords])

    def scaled(self, c) -> ProjPoint:
        return ProjPoint(tuple(c * x for x in self.coords))

    def isclose(self, other, tol=defaults.POINT_EQ_TOL):
        if len(self.coords) != len(other.coords):
            return False
        a, b = self.canonical(), other.canonical()
        return all(abs(x - y) <= tol for x, y in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.isclose(other)

    def __hash__(self):
        # exact points only; nearby points on either side of a rounding
        # boundary hash differently even though they compare equal
        key = []
        for c in self.canonical():
            c = complex(c)
            key.append((round(c.real, 8) + 0.0, round(c.imag, 8) + 0.0))
        return hash(tuple(key))

    def __str__(self):
        return "[" + ":".join(format_complex(c) for c in self.canonical()) + "]"

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class LinearForm:
    """``L(z) = w_0 z_0 + ... + w_n z_n``; its zero set is the hyperplane H_w."""

    coeffs: tuple

    def __post_init__(self):
        w = tuple(complex(c) for c in self.coeffs)
        if not any(w):
            raise ValueError("linear form must be nonzero")
        object.__setattr__(self, "coeffs", canonical_coords(w))

    def __call__(self, z):
        return sum(w * c for w, c in zip(self.coeffs, z))

    def poly(self):
        return MultiPoly.linear(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return ProjPoint(self.coeffs).isclose(ProjPoint(other.coeffs))

    def __hash__(self):
        return hash(ProjPoint(self.coeffs))

    def __repr__(self):
        return f"LinearForm{ProjPoint(self.coeffs)}"


# ---------------------------------------------------------------------------
# pencils


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionError("matrices must be two dimensional")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class MatrixPencil:
    matrices: tuple

    def __post_init__(self):
        mats = tuple(as_matrix(a) for a in self.matrices)
        if len(mats) < 2:
            raise DimensionError("a pencil needs at least two matrices")
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise DimensionError("pencil matrices must be square of one common size")
        if d < 1:
            raise DimensionError("empty matrices")
        if all(not m.any() for m in mats):
            raise ValueError("all pencil matrices are zero")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def from_unitaries(cls, unitaries) -> MatrixPencil:
        """The group pencil ``z_0 I + z_1 U_1 + ... + z_n U_n``."""
        unitaries = [as_matrix(u) for u in unitaries]
        return cls((np.eye(unitaries[0].shape[0]),) + tuple(unitaries))

    @property
    def n(self):
        return len(self.matrices) - 1

    @property
    def d(self):
        return self.matrices[0].shape[0]

    @property
    def stack(self):
        return np.stack(self.matrices)


def _coords(z):
    if isinstance(z, ProjPoint):
        return np.array([complex(c) for c in z.coords])
    return np.asarray(z, dtype=complex)


def evaluate(p: MatrixPencil, z) -> np.ndarray:
    """``sum z_i A_i`` with the raw coordinates of ``z``.

    ``z`` may also be an array of shape ``(..., n+1)``; the result then has
    shape ``(..., d, d)``.
    """
    c = _coords(z)
    if c.shape[-1] != p.n + 1:
        raise DimensionError(f"expected {p.n + 1} coordinates, got {c.shape[-1]}")
    return np.tensordot(c, p.stack, axes=([-1], [0]))


def is_singular(m, tol=defaults.SINGULAR_TOL) -> bool:
    """``sigma_min <= tol * max(1, sigma_max)``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("is_singular needs a square matrix")
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s[-1] <= tol * max(1.0, s[0]))


def spectrum_membership(p: MatrixPencil, z, tol=defaults.SINGULAR_TOL) -> bool:
    """Is ``z`` in the projective spectrum, i.e. is ``A(z)`` singular?

    Points are normalized first so the answer does not depend on the
    representative chosen for ``z``.
    """
    if not isinstance(z, ProjPoint):
        z = ProjPoint(tuple(_coords(z)))
    return is_singular(evaluate(p, z.normalized()), tol)


# ---------------------------------------------------------------------------
# characteristic polynomial


def _charpoly_expansion(p: MatrixPencil) -> MultiPoly:
    """Cofactor expansion with memoized minors (rows taken top-down)."""
    nv = p.n + 1
    d = p.d
    entries = [
        [MultiPoly.linear([m[i, j] for m in p.matrices]) for j in range(d)]
        for i in range(d)
    ]

    @lru_cache(maxsize=None)
    def minor(cols: tuple) -> MultiPoly:
        row = d - len(cols)
        if not cols:
            return MultiPoly.constant(nv, 1.0)
        total = MultiPoly.zero(nv)
        for k, j in enumerate(cols):
            e = entries[row][j]
            if e.is_zero():
                continue
            sub = minor(cols[:k] + cols[k + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            total = total + (term if k % 2 == 0 else -term)
        return total

    return minor(tuple(range(d)))


def _charpoly_interpolation(p: MatrixPencil) -> MultiPoly:
    """Recover the coefficients from determinants at roots of unity.

    Exponents of a degree-d monomial lie in [0, d], so sampling every
    coordinate on the (d+1)-th roots of unity and applying an FFT
    separates all monomials exactly.
    """
    nv = p.n + 1
    d = p.d
    m = d + 1
    total = m ** nv
    if total > defaults.INTERP_MAX_SAMPLES:
        raise ValueError(f"interpolation would need {total} determinants")
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    grid = np.stack(np.meshgrid(*([roots] * nv), indexing="ij"), axis=-1).reshape(-1, nv)
    values = np.empty(total, dtype=complex)
    chunk = max(1, 2_000_000 // (d * d))
    for start in range(0, total, chunk):
        values[start:start + chunk] = np.linalg.det(evaluate(p, grid[start:start + chunk]))
    coeffs = np.fft.fftn(values.reshape((m,) * nv)) / total
    tol = defaults.PRUNE_TOL * max(1.0, float(np.abs(coeffs).max()))
    terms = {}
    for mono in itertools.product(range(m), repeat=nv):
        if sum(mono) == d and abs(coeffs[mono]) >= tol:
            terms[mono] = coeffs[mono]
    return MultiPoly(nv, terms)


def char_poly(p: MatrixPencil, method: str = "auto") -> MultiPoly:
    """``Q(z) = det(z_0 A_0 + ... + z_n A_n)`` as a homogeneous polynomial.

    ``method`` is ``"expansion"`` (exact cofactor expansion, used up to
    dimension 8 by default), ``"interpolation"`` (FFT on roots of unity,
    used for dimensions 9..16) or ``"auto"``.
    """
    if p.d > defaults.CHARPOLY_MAX_DIM:
        raise ValueError(
            f"dimension {p.d} exceeds the characteristic polynomial bound "
            f"{defaults.CHARPOLY_MAX_DIM}"
        )
    if method == "auto":
        method = "expansion" if p.d <= defaults.EXPANSION_MAX_DIM else "interpolation"
    if method == "expansion":
        return _charpoly_expansion(p)
    if method == "interpolation":
        return _charpoly_interpolation(p)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# hyperplanes


def _form(w) -> LinearForm:
    return w if isinstance(w, LinearForm) else LinearForm(tuple(w))


def restrict_to_hyperplane(q: MultiPoly, w) -> MultiPoly:
    """``Q`` composed with a rank-n parametrization of ``H_w``.

    The variable with the largest ``|w_k|`` is eliminated.
    """
    w = _form(w).coeffs
    if len(w) != q.nvars:
        raise DimensionError("linear form and polynomial disagree on variable count")
    k = int(np.argmax(np.abs(w)))
    sub = MultiPoly.linear([0 if i == k else -c / w[k] for i, c in enumerate(w)])
    return q.substitute_linear(k, sub)


def hyperplane_contained(q: MultiPoly, w, tol=defaults.HYPERPLANE_TOL) -> bool:
    """Does ``Q`` vanish identically on the hyperplane ``H_w``?"""
    if q.is_zero():
        raise ValueError("zero polynomial")
    r = restrict_to_hyperplane(q, w)
    return r.max_coeff() <= tol * q.max_coeff()


def linear_multiplicity(q: MultiPoly, w, tol=defaults.HYPERPLANE_TOL) -> tuple[int, MultiPoly]:
    """Largest ``m`` with ``L_w^m | Q``, and the cofactor ``Q / L_w^m``."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    w = _form(w).coeffs
    scale = q.max_coeff()
    m = 0
    rest = q
    while rest.degree > 0:
        quot, rem = rest.divide_linear(w)
        if rem.max_coeff() > tol * scale:
            break
        rest = quot
        m += 1
    return m, rest


# ---------------------------------------------------------------------------
# shared matrix file format


def matrices_to_json(matrices, kind="pencil") -> str:
    mats = [as_matrix(m) for m in matrices]
    n = len(mats) - 1 if kind == "pencil" else len(mats)
    doc = {
        "kind": kind,
        "n": n,
        "d": mats[0].shape[0],
        "matrices": [
            [[[float(x.real), float(x.imag)] for x in row] for row in m] for m in mats
        ],
    }
    return json.dumps(doc, indent=1)


def matrices_from_json(text: str):
    """Parse the shared format; returns ``(kind, list of matrices)``."""
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("matrix file must hold a JSON object")
    unknown = set(doc) - {"kind", "n", "d", "matrices"}
    if unknown:
        raise ValueError(f"unknown keys in matrix file: {sorted(unknown)}")
    kind = doc.get("kind", "pencil")
    if kind not in ("pencil", "tuple"):
        raise ValueError(f"unknown matrix file kind {kind!r}")
    mats = []
    for m in doc["matrices"]:
        arr = np.array(m, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError("each entry must be a [re, im] pair")
        mats.append(as_matrix(arr[..., 0] + 1j * arr[..., 1]))
    expected = doc["n"] + 1 if kind == "pencil" else doc["n"]
    if len(mats) != expected:
        raise ValueError(f"n={doc['n']} implies {expected} matrices, found {len(mats)}")
    if any(m.shape != (doc["d"], doc["d"]) for m in mats):
        raise ValueError(f"matrices are not all {doc['d']}x{doc['d']}")
    return kind, mats


def load_pencil(path) -> MatrixPencil:
    with open(path) as fh:
        kind, mats = matrices_from_json(fh.read())
    if kind != "pencil":
        mats = [np.eye(mats[0].shape[0])] + mats
    return MatrixPencil(tuple(mats))


def save_pencil(p: MatrixPencil, path):
    with open(path, "w") as fh:
        fh.write(matrices_to_json(p.matrices, "pencil"))


def random_line_singular_point(p: MatrixPencil, rng=None) -> ProjPoint:
    """A point of the projective spectrum on a random line ``u + s v``.

    ``det A(u + s v)`` is a polynomial in ``s`` of degree at most d; its
    roots are the generalized eigenvalues of ``(A(u), -A(v))``.
    """
    from scipy.linalg import eigvals

    rng = np.random.default_rng(rng)
    for _ in range(20):
        u = rng.normal(size=p.n + 1) + 1j * rng.normal(size=p.n + 1)
        v = rng.normal(size=p.n + 1) + 1j * rng.normal(size=p.n + 1)
        au, av = evaluate(p, u), evaluate(p, v)
        if is_singular(au):
            return ProjPoint(tuple(u))
        s = eigvals(au, -av)
        finite = s[np.isfinite(s)]
        if finite.size:
            return ProjPoint(tuple(u + finite[0] * v))
        if is_singular(av):
            return ProjPoint(tuple(v))
    raise RuntimeError("no singular point found")
