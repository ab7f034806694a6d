"""Taylor, Harte and approximate point spectra of a commuting tuple.

For commuting normal matrices all of these coincide with the joint
eigenvalues.  Off the spectrum the Koszul complex is exact and the
Cho-Takaguchi inverse gives an explicit contracting homotopy.
"""
import numpy as np

from projspec import (
    MatrixTuple,
    approx_point_membership,
    cho_takaguchi_inverse,
    harte_membership,
    hyperplane_union_verdict,
    joint_eigenvalues,
    koszul_build,
    koszul_homology_dims,
    splitting_homotopy,
    taylor_membership,
)

rng = np.random.default_rng(1)
q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
a1 = q @ np.diag([1.0, 1.0, 2.0, 3.0]) @ q.T
a2 = q @ np.diag([0.0, 4.0, 4.0, -1.0]) @ q.T
t = MatrixTuple.of(a1, a2)

print("joint eigenvalues:\n", np.round(joint_eigenvalues(t), 10))

for lam in [(1, 0), (2, 4), (2, 0)]:
    print(lam, "approx point", approx_point_membership(t, lam), "harte", harte_membership(t, lam),
          "taylor", taylor_membership(t, lam),
          "homology", koszul_homology_dims(koszul_build(t.shifted(lam))))

lam = (2, 0)
b = cho_takaguchi_inverse(t, lam)
h = splitting_homotopy(t.shifted(lam), b)
print("homotopy residual at", lam, h.residual)

print("commuting pair:", hyperplane_union_verdict(t).verdict)
pauli = MatrixTuple((np.array([[0, 1], [1, 0]]), np.diag([1.0, -1.0])))
print("Pauli pair:", hyperplane_union_verdict(pauli).verdict)
