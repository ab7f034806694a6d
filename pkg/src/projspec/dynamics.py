"""Renormalization dynamics of the infinite dihedral group on P^2.

``tau(z) = (z0^2 - z1^2 - z2^2) / (2 z1 z2)`` semiconjugates the map
``F_pi(z) = [2 tau z0 : z1 : 2 tau z2 + z1]`` to the Chebyshev map
``T(x) = 2x^2 - 1``, so orbits of ``F_pi`` are read off from orbits of
``T`` and the Julia set of ``F_pi`` is ``{z : tau(z) in [-1, 1]}``.

Scalar functions use plain arithmetic and accept ``mpmath`` numbers as
coordinates; the ``*_array`` functions are vectorized float versions for
grid sweeps.  The point at infinity of the Riemann sphere is
``INF = complex(inf, 0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from . import defaults
from .pencil import LinearForm, ProjPoint, canonical_coords

INF = complex(math.inf, 0.0)
_OVERFLOW = 1e150


class IndeterminacyError(ValueError):
    """The map has no value at this point."""


class DegenerateLocusError(ValueError):
    """The point lies where the semiconjugacy identity degenerates."""


class SpectrumPointError(ValueError):
    """The operation is only defined off the spectrum ``tau in [-1, 1]``."""


def is_infinite(x) -> bool:
    return abs(x) == math.inf


def _coords(z):
    if isinstance(z, ProjPoint):
        return z.canonical()
    return canonical_coords(tuple(z))


def chordal(a, b) -> float:
    """Chordal distance on the Riemann sphere (diameter 2)."""
    if is_infinite(a) and is_infinite(b):
        return 0.0
    if is_infinite(a):
        a, b = b, a
    if is_infinite(b):
        return float(2 / math.sqrt(1 + abs(a) ** 2))
    return float(2 * abs(a - b) / math.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2)))


# ---------------------------------------------------------------------------
# tau and the Chebyshev map


def tau(z):
    c0, c1, c2 = _coords(z)
    num = c0 * c0 - c1 * c1 - c2 * c2
    if abs(num) <= defaults.ZERO_TOL:
        return 0 * num
    den = 2 * c1 * c2
    if den == 0:
        return INF
    t = num / den
    if abs(t) > _OVERFLOW:
        return INF
    return t


def chebyshev(x):
    if is_infinite(x) or abs(x) > _OVERFLOW:
        return INF
    return 2 * x * x - 1


def chebyshev_iterate(x, k: int):
    for _ in range(k):
        x = chebyshev(x)
        if is_infinite(x):
            return INF
    return x


def on_interval(t, tol=defaults.REAL_AXIS_TOL) -> bool:
    """Is ``t`` real within ``tol`` and inside ``[-1, 1]``?"""
    if is_infinite(t):
        return False
    t = complex(t)
    return abs(t.imag) <= tol and -1 - tol <= t.real <= 1 + tol


# ---------------------------------------------------------------------------
# the maps


def F_raw(z) -> ProjPoint:
    """The cubic map ``[z0 (z0^2-z1^2-z2^2) : z1^2 z2 : z2 (z0^2-z2^2)]``."""
    c0, c1, c2 = _coords(z)
    out = (c0 * (c0 * c0 - c1 * c1 - c2 * c2), c1 * c1 * c2, c2 * (c0 * c0 - c2 * c2))
    if max(abs(v) for v in out) <= defaults.ZERO_TOL:
        raise IndeterminacyError(f"F is indeterminate at {ProjPoint(_coords(z))}")
    return ProjPoint(out).normalized()


def F_pi(z) -> ProjPoint:
    """The renormalization map ``[2 tau z0 : z1 : 2 tau z2 + z1]``.

    For ``|tau| >= 1`` the equivalent form ``[z0 : z1/(2 tau) : z2 + z1/(2 tau)]``
    is used to avoid overflow; at ``tau = inf`` it reduces to ``[z0 : 0 : z2]``.
    The point ``[0:1:0]`` is fixed (it lies on the invariant line ``z0 = 0``).
    """
    c0, c1, c2 = _coords(z)
    t = tau((c0, c1, c2))
    if is_infinite(t):
        if abs(c0) <= defaults.ZERO_TOL and abs(c2) <= defaults.ZERO_TOL:
            out = (c0, c1, c2)
        else:
            out = (c0, 0 * c1, c2)
    elif abs(t) >= 1:
        h = c1 / (2 * t)
        out = (c0, h, c2 + h)
    else:
        out = (2 * t * c0, c1, 2 * t * c2 + c1)
    if max(abs(v) for v in out) <= defaults.ZERO_TOL:
        raise IndeterminacyError(f"F_pi is indeterminate at {ProjPoint((c0, c1, c2))}")
    return ProjPoint(out).normalized()


def F_pi_iterate(z, n: int) -> ProjPoint:
    z = ProjPoint(_coords(z))
    for _ in range(n):
        z = F_pi(z)
    return z


# ---------------------------------------------------------------------------
# indeterminacy


@dataclass(frozen=True)
class IndeterminacyLocus:
    """Finite points plus whole projective lines."""

    points: frozenset
    lines: tuple = ()

    def is_finite(self):
        return not self.lines

    def __contains__(self, z):
        z = z if isinstance(z, ProjPoint) else ProjPoint(tuple(z))
        if any(z.isclose(p) for p in self.points):
            return True
        c = z.canonical()
        return any(abs(l(c)) <= defaults.POINT_EQ_TOL for l in self.lines)

    def __len__(self):
        if self.lines:
            raise TypeError("locus contains lines")
        return len(self.points)


_Z = sp.symbols("z0 z1 z2")


def _cubic_components(z, depth):
    comps = tuple(z)
    for _ in range(depth):
        a, b, c = comps
        comps = (sp.expand(a * (a**2 - b**2 - c**2)), sp.expand(b**2 * c), sp.expand(c * (a**2 - c**2)))
    return comps


def _common_zeros(comps) -> IndeterminacyLocus:
    """Common zeros in P^2 of homogeneous polynomials, chart by chart.

    Charts: ``[1:y:z]``, ``[0:1:z]`` and ``[0:0:1]``.  Solution curves must
    be lines, which is the case for the maps handled here.
    """
    z0, z1, z2 = _Z
    points, lines = set(), []
    charts = [({z0: 1}, (z1, z2)), ({z0: 0, z1: 1}, (z2,)), ({z0: 0, z1: 0, z2: 1}, ())]
    for fix, free in charts:
        eqs = [sp.expand(c.subs(fix)) for c in comps]
        eqs = [e for e in eqs if e != 0]
        if not free:
            if not eqs:
                points.add(ProjPoint((0, 0, 1)))
            continue
        if not eqs:
            raise NotImplementedError("entire chart is indeterminate")
        for sol in sp.solve(eqs, free, dict=True):
            if all(v in sol for v in free):
                vals = {**fix, **{v: sol[v] for v in free}}
                points.add(ProjPoint(tuple(complex(sp.N(vals[v])) for v in _Z)))
                continue
            # one free parameter left: the solution is a curve in this chart
            (var, expr), = sol.items()
            rel = sp.Poly(sp.expand(var - expr), *free)
            if rel.total_degree() != 1:
                raise NotImplementedError(f"non-linear indeterminacy curve {var} = {expr}")
            hom = {z0: 0, z1: 0, z2: 0}
            for mono, coeff in zip(rel.monoms(), rel.coeffs()):
                k = mono.index(1) if 1 in mono else None
                target = free[k] if k is not None else next(v for v in _Z if fix.get(v) == 1)
                hom[target] += coeff
            lines.append(LinearForm(tuple(complex(hom[v]) for v in _Z)))
    lines = tuple(dict.fromkeys(lines))
    pts = frozenset(p for p in points if not any(abs(l(p.canonical())) <= 1e-12 for l in lines))
    return IndeterminacyLocus(pts, lines)


def _f_pi_first_locus():
    """``F_pi`` vanishes only where ``z1 = 0`` and ``tau = 0``; on ``z1 = 0``
    that is ``z0^2 - z2^2 = 0``."""
    z0, z1, z2 = _Z
    return _common_zeros((z1, sp.expand(z0**2 - z2**2)))


def _f_pi_preimages(w: ProjPoint) -> set:
    """Points z outside the first indeterminacy locus with ``F_pi(z) = w``,
    for ``w`` on the invariant line ``z1 = 0``.

    ``F_pi`` maps ``{z1 != 0}`` into itself, and on ``{z1 = 0}`` it is the
    identity wherever ``tau = inf``.  So the only candidate is ``w``.
    """
    c = w.canonical()
    if abs(c[1]) > defaults.ZERO_TOL:
        raise NotImplementedError("preimages off the line z1 = 0")
    return {w} if is_infinite(tau(c)) else set()


def indeterminacy_set(which: str, k: int) -> IndeterminacyLocus:
    """``I_k``: points where some iterate ``F^m``, ``m <= k``, has all
    homogeneous components zero.  ``which`` is ``"F"`` (k in {1, 2}) or
    ``"F_pi"`` (any k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return IndeterminacyLocus(frozenset())
    if which == "F":
        if k > 2:
            raise ValueError("I_k of F is only supported for k in {1, 2}")
        return _common_zeros(_cubic_components(_Z, k))
    if which == "F_pi":
        first = _f_pi_first_locus()
        current = set(first.points)
        for _ in range(k - 1):
            new = set(first.points)
            for w in current:
                new |= _f_pi_preimages(w)
            current = new
        return IndeterminacyLocus(frozenset(current))
    raise ValueError(f"unknown map {which!r}")


# ---------------------------------------------------------------------------
# semiconjugacy and closed forms


def semiconjugacy_residual(z, delta=defaults.DEGENERATE_DELTA) -> float:
    """Chordal distance between ``tau(F_pi(z))`` and ``T(tau(z))``."""
    c0, c1, c2 = _coords(z)
    t = tau((c0, c1, c2))
    if is_infinite(t) or c1 * c2 == 0 or abs(c0 * c0 - c2 * c2) < delta:
        raise DegenerateLocusError(f"{ProjPoint((c0, c1, c2))} is on the degenerate locus")
    return chordal(tau(F_pi((c0, c1, c2))), chebyshev(t))


def _finite_tau(z):
    t = tau(z)
    if is_infinite(t):
        raise ValueError("tau(z) is infinite")
    return t


def _off_spectrum_tau(z):
    t = tau(z)
    if on_interval(t):
        raise SpectrumPointError(f"tau = {t} lies in [-1, 1]")
    return t


def pn_from_tau(t, n: int):
    """``2^n * prod_{k<n} T^k(t)``."""
    p = 1
    x = t
    for _ in range(n):
        if is_infinite(x):
            return INF
        p = p * 2 * x
        if abs(p) > _OVERFLOW:
            return INF
        x = chebyshev(x)
    return p


def p_n(z, n: int):
    return pn_from_tau(_finite_tau(z), n)


def fn_from_tau(t, n: int):
    """``sum_{j=1..n} 1 / p_j``; terms past overflow are zero."""
    total = 0 * t
    p = 1
    x = t
    for _ in range(n):
        if is_infinite(x):
            break
        p = p * 2 * x
        if abs(p) > _OVERFLOW:
            break
        total = total + 1 / p
        x = chebyshev(x)
    return total


def f_n(z, n: int):
    if n < 1:
        raise ValueError("n must be at least 1")
    t = _off_spectrum_tau(z)
    if is_infinite(t):
        return 0.0
    return fn_from_tau(t, n)


def f_limit_from_tau(t):
    """The root of ``w^2 - 2 t w + 1 = 0`` inside the unit disc."""
    if is_infinite(t):
        return 0 * 1j
    s = (t * t - 1) ** 0.5
    big = t + s if abs(t + s) >= abs(t - s) else t - s
    return 1 / big


def f_limit(z):
    return f_limit_from_tau(_off_spectrum_tau(z))


def iterate_closed(z, n: int) -> ProjPoint:
    """``F_pi^n(z) = [z0 : z1 / p_n(z) : z2 + z1 f_n(z)]`` off the spectrum."""
    c0, c1, c2 = _coords(z)
    t = _off_spectrum_tau((c0, c1, c2))
    if is_infinite(t):
        raise SpectrumPointError("tau = inf; use F_pi directly")
    p = pn_from_tau(t, n)
    mid = 0 * c1 if is_infinite(p) else c1 / p
    return ProjPoint((c0, mid, c2 + c1 * fn_from_tau(t, n))).normalized()


def limit_map(z) -> ProjPoint:
    """``F_*(z) = [z0 : 0 : z2 + z1 f(z)]``, the limit of ``F_pi^n`` off the spectrum."""
    c0, c1, c2 = _coords(z)
    f = f_limit_from_tau(_off_spectrum_tau((c0, c1, c2)))
    return ProjPoint((c0, 0 * c1, c2 + c1 * f)).normalized()


# ---------------------------------------------------------------------------
# Julia set


@dataclass(frozen=True)
class OrbitRecord:
    start: ProjPoint
    tau0: complex
    escape: int | None  # None: bounded for maxiter steps
    final_abs: float


def tau_orbit(z, maxiter=defaults.MAXITER, radius=defaults.ESCAPE_RADIUS) -> OrbitRecord:
    """Follow ``T^n(tau(z))`` for ``n = 0..maxiter`` until it leaves the disc of ``radius``."""
    start = z if isinstance(z, ProjPoint) else ProjPoint(tuple(z))
    t0 = tau(start)
    x = t0
    for n in range(maxiter + 1):
        if is_infinite(x) or abs(x) > radius:
            return OrbitRecord(start, t0, n, float(abs(x)))
        if n < maxiter:
            x = chebyshev(x)
    return OrbitRecord(start, t0, None, float(abs(x)))


def julia_membership(z, mode="analytic", maxiter=defaults.MAXITER,
                     radius=defaults.ESCAPE_RADIUS) -> bool:
    if mode == "analytic":
        return on_interval(tau(z))
    if mode == "escape":
        return tau_orbit(z, maxiter, radius).escape is None
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# vectorized versions


def canonical_array(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    k = np.argmax(np.abs(z), axis=-1)[..., None]
    return z / np.take_along_axis(z, k, axis=-1)


def tau_array(z: np.ndarray) -> np.ndarray:
    c = canonical_array(z)
    c0, c1, c2 = c[..., 0], c[..., 1], c[..., 2]
    num = c0 * c0 - c1 * c1 - c2 * c2
    den = 2 * c1 * c2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = num / np.where(den == 0, 1, den)
    t = np.where(den == 0, INF, t)
    t = np.where(~np.isfinite(t) | (np.abs(t) > _OVERFLOW), INF, t)
    return np.where(np.abs(num) <= defaults.ZERO_TOL, 0j, t)


def F_pi_array(z: np.ndarray) -> np.ndarray:
    """Vectorized ``F_pi`` returning canonical coordinates; rows in the
    indeterminacy locus come back as NaN."""
    c = canonical_array(z)
    t = tau_array(c)
    c0, c1, c2 = c[..., 0], c[..., 1], c[..., 2]
    inf = ~np.isfinite(t)
    big = ~inf & (np.abs(t) >= 1)
    small = ~inf & ~big
    out = np.empty_like(c)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(big, c1 / np.where(big, 2 * t, 1), 0)
    out[..., 0] = np.where(small, 2 * t * c0, c0)
    out[..., 1] = np.where(small, c1, np.where(big, h, 0))
    out[..., 2] = np.where(small, 2 * t * c2 + c1, np.where(big, c2 + h, c2))
    fixed = inf & (np.abs(c0) <= defaults.ZERO_TOL) & (np.abs(c2) <= defaults.ZERO_TOL)
    out[fixed] = c[fixed]
    bad = np.max(np.abs(out), axis=-1) <= defaults.ZERO_TOL
    out[bad] = np.nan
    good = ~bad
    out[good] = canonical_array(out[good])
    return out


def chebyshev_escape(t: np.ndarray, maxiter=defaults.MAXITER, radius=defaults.ESCAPE_RADIUS,
                     sentinel=-1) -> np.ndarray:
    """First ``n`` in ``0..maxiter`` with ``|T^n(t)| > radius``, else ``sentinel``."""
    t = np.asarray(t, dtype=complex)
    counts = np.full(t.shape, sentinel, dtype=np.int32)
    x = t.copy()
    active = np.isfinite(x)
    counts[~active] = 0
    x[~active] = 0
    for n in range(maxiter + 1):
        esc = active & (np.abs(x) > radius)
        counts[esc] = n
        active &= ~esc
        if not active.any() or n == maxiter:
            break
        x = np.where(active, 2 * x * x - 1, x)
    return counts


def on_interval_array(t: np.ndarray, tol=defaults.REAL_AXIS_TOL) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    fin = np.isfinite(t)
    return fin & (np.abs(t.imag) <= tol) & (t.real >= -1 - tol) & (t.real <= 1 + tol)


def interval_distance(t: np.ndarray) -> np.ndarray:
    """Distance from ``t`` to the segment ``[-1, 1]`` (inf at infinity)."""
    t = np.asarray(t, dtype=complex)
    with np.errstate(invalid="ignore"):
        dx = np.maximum(np.abs(t.real) - 1, 0)
        d = np.hypot(dx, t.imag)
    return np.where(np.isfinite(t), d, np.inf)


def chordal_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ia, ib = ~np.isfinite(a), ~np.isfinite(b)
    fa, fb = np.where(ia, 0, a), np.where(ib, 0, b)
    both = 2 * np.abs(fa - fb) / np.sqrt((1 + np.abs(fa) ** 2) * (1 + np.abs(fb) ** 2))
    one_a = 2 / np.sqrt(1 + np.abs(fb) ** 2)
    one_b = 2 / np.sqrt(1 + np.abs(fa) ** 2)
    return np.where(ia & ib, 0.0, np.where(ia, one_a, np.where(ib, one_b, both)))


def degenerate_mask(z: np.ndarray, delta=defaults.DEGENERATE_DELTA) -> np.ndarray:
    """Rows violating the semiconjugacy preconditions."""
    c = canonical_array(z)
    t = tau_array(c)
    return (~np.isfinite(t)) | (c[..., 1] * c[..., 2] == 0) | (np.abs(c[..., 0] ** 2 - c[..., 2] ** 2) < delta)


def semiconjugacy_residual_array(z: np.ndarray, delta=defaults.DEGENERATE_DELTA) -> np.ndarray:
    """Vectorized :func:`semiconjugacy_residual`; NaN on the degenerate locus."""
    c = canonical_array(z)
    t = tau_array(c)
    bad = degenerate_mask(c, delta)
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = tau_array(np.where(bad[..., None], 1.0, F_pi_array(np.where(bad[..., None], 1.0, c))))
        rhs = np.where(np.abs(t) > _OVERFLOW, INF, 2 * t * t - 1)
    return np.where(bad, np.nan, chordal_array(lhs, rhs))
