"""Spectral amenability test on finite groups and on the Koopman
representation of the infinite dihedral group.

H0 = {z0 + z1 + ... + zn = 0} sits inside the projective spectrum of the
regular representation of any finite group.  A non-trivial irreducible
representation can miss it.
"""
import numpy as np

from projspec import (
    char_poly,
    dihedral_cayley,
    gl3_reps,
    h0_containment_test,
    koopman_truncation,
    markov_operator,
    regular_rep,
)
from projspec.groups import koopman_tau_values

for n in (3, 4, 6):
    r = regular_rep(dihedral_cayley(n))
    m = markov_operator(r)
    print(f"D{n}: order {r.d}, ||M|| = {np.linalg.norm(m, 2):.6f}, H0 contained: {h0_containment_test(r)}")

plus, minus = gl3_reps()
print("rho+ char poly:", char_poly(plus.pencil()).rounded())
print("rho- char poly:", char_poly(minus.pencil()).rounded())
print("rho+ H0 contained:", h0_containment_test(plus))

for level in range(1, 7):
    taus = koopman_tau_values(level, 0.8, -1.1)
    print(f"Koopman level {level}: {len(np.unique(np.round(taus, 9)))} distinct tau values, "
          f"all in [-1,1]: {bool(np.all(np.abs(taus) <= 1 + 1e-9))}")
