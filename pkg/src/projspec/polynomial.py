"""Sparse multivariate polynomials with complex coefficients.

A polynomial is a mapping from exponent tuples to coefficients.  Only the
operations needed for characteristic polynomials of pencils are provided:
ring arithmetic, evaluation, substitution of a linear form for one variable
and synthetic division by a linear form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from . import defaults

Monomial = tuple[int, ...]


def _prune(terms, tol):
    return {m: c for m, c in terms.items() if abs(c) >= tol}


@dataclass(frozen=True, eq=False)
class MultiPoly:
    nvars: int
    terms: Mapping[Monomial, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.nvars or min(mono, default=0) < 0:
                raise ValueError(f"bad monomial {mono} for {self.nvars} variables")
            c = complex(c)
            if abs(c) >= defaults.PRUNE_TOL:
                clean[mono] = clean.get(mono, 0j) + c
        object.__setattr__(self, "terms", MappingProxyType(clean))

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1.0})

    @classmethod
    def linear(cls, coeffs: Sequence[complex]):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = c
        return cls(n, terms)

    # -- inspection ---------------------------------------------------
    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def max_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def coeff(self, mono):
        return self.terms.get(tuple(mono), 0j)

    def allclose(self, other: MultiPoly, tol=1e-10):
        """Coefficientwise comparison relative to the larger coefficient."""
        if self.nvars != other.nvars:
            return False
        scale = max(1.0, self.max_coeff(), other.max_coeff())
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coeff(k) - other.coeff(k)) <= tol * scale for k in keys)

    def rounded(self, tol=1e-9):
        """Snap coefficients to the nearest Gaussian integer when within ``tol``."""
        out = {}
        for m, c in self.terms.items():
            r = complex(round(c.real), round(c.imag))
            out[m] = r if abs(c - r) <= tol else c
        return MultiPoly(self.nvars, out)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            var = "*".join(
                f"z{i}" if e == 1 else f"z{i}^{e}" for i, e in enumerate(mono) if e
            )
            if abs(c.imag) < 1e-14:
                cs = f"{c.real:.12g}"
            else:
                cs = f"({c.real:.12g}{c.imag:+.12g}i)"
            parts.append(f"{cs}*{var}" if var else cs)
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0j) + c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        terms: dict[Monomial, complex] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0j) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.nvars, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.nvars:
            raise ValueError("wrong number of coordinates")
        total = np.zeros(z.shape[:-1], dtype=complex)
        for mono, c in self.terms.items():
            total = total + c * np.prod(z ** np.array(mono), axis=-1)
        return total

    # -- linear forms -------------------------------------------------
    def _split_on(self, k):
        """Group terms by the power of variable ``k``; returns {power: poly}."""
        groups: dict[int, dict] = {}
        for m, c in self.terms.items():
            rest = m[:k] + (0,) + m[k + 1:]
            groups.setdefault(m[k], {})[rest] = c
        return {e: MultiPoly(self.nvars, t) for e, t in groups.items()}

    def substitute_linear(self, k: int, form: MultiPoly) -> MultiPoly:
        """Replace variable ``k`` by the polynomial ``form`` (which must not involve it)."""
        out = MultiPoly.zero(self.nvars)
        powers = {0: MultiPoly.constant(self.nvars, 1.0)}
        for e, part in sorted(self._split_on(k).items()):
            if e not in powers:
                powers[e] = form ** e
            out = out + part * powers[e]
        return out

    def divide_linear(self, w: Sequence[complex]) -> tuple[MultiPoly, MultiPoly]:
        """Synthetic division by ``L(z) = sum w_i z_i``.

        Division is carried out in the variable with the largest ``|w_k|``.
        Returns ``(quotient, remainder)`` with ``self = L*quotient + remainder``
        and the remainder free of that variable.
        """
        w = [complex(c) for c in w]
        if len(w) != self.nvars:
            raise ValueError("linear form has the wrong length")
        k = int(np.argmax(np.abs(w)))
        if abs(w[k]) == 0:
            raise ValueError("zero linear form")
        # L = w_k (z_k - r) with r = -sum_{i != k} w_i z_i / w_k
        r = MultiPoly.linear([0 if i == k else -c / w[k] for i, c in enumerate(w)])
        groups = self._split_on(k)
        top = max(groups, default=-1)
        if top < 0:
            return MultiPoly.zero(self.nvars), MultiPoly.zero(self.nvars)
        # Horner on coefficients a_top, ..., a_0 (polynomials in the other variables)
        b = MultiPoly.zero(self.nvars)
        quotient_parts = []
        for e in range(top, -1, -1):
            b = groups.get(e, MultiPoly.zero(self.nvars)) + b * r
            if e > 0:
                quotient_parts.append((e - 1, b))
        zk = MultiPoly.variable(self.nvars, k)
        q = MultiPoly.zero(self.nvars)
        for e, part in quotient_parts:
            q = q + part * (zk ** e)
        return q * (1 / w[k]), b
