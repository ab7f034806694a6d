"""Projective spectrum of a small pencil.

The pencil z0 I + z1 X + z2 Z built from two Pauli matrices has
determinant z0^2 - z1^2 - z2^2, a smooth conic.  A diagonal pencil, by
contrast, splits into hyperplanes.
"""
import numpy as np

from projspec import MatrixPencil, char_poly, linear_multiplicity, spectrum_membership
from projspec.pencil import random_line_singular_point

X = np.array([[0, 1], [1, 0]])
Z = np.diag([1.0, -1.0])

pauli = MatrixPencil((np.eye(2), X, Z))
print("Q =", char_poly(pauli).rounded())
print("[sqrt2:1:1] in spectrum:", spectrum_membership(pauli, (np.sqrt(2), 1, 1)))
print("[1:1:1] in spectrum:", spectrum_membership(pauli, (1, 1, 1)))

# a random point of the spectrum, found on a random line
pt = random_line_singular_point(pauli, np.random.default_rng(0))
print("random spectral point", pt)

diag = MatrixPencil((np.eye(3), np.diag([1.0, 1.0, 2.0]), np.diag([0.0, 0.0, 5.0])))
q = char_poly(diag)
for w in [(1, 1, 0), (1, 2, 5)]:
    m, _ = linear_multiplicity(q, w)
    print(f"hyperplane {w}: multiplicity {m}")
