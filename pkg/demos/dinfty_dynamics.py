"""The renormalization map F_pi on P^2 and its Chebyshev shadow.

tau(F_pi(z)) = T(tau(z)) with T(x) = 2x^2 - 1, so the Julia set of F_pi is
where tau lands in [-1, 1].  Off that set the iterates converge to a
limit map given by a closed formula.
"""
import math

from projspec import (
    F_pi,
    ProjPoint,
    f_limit,
    indeterminacy_set,
    iterate_closed,
    julia_membership,
    limit_map,
    semiconjugacy_residual,
    tau,
)

z = ProjPoint((1, 2, 3))
print("tau(z) =", tau(z), " residual", semiconjugacy_residual(z))

print("I1(F):", sorted(map(str, indeterminacy_set("F", 1).points)))
print("I1(F_pi):", sorted(map(str, indeterminacy_set("F_pi", 1).points)))
loc = indeterminacy_set("F", 2)
print("I2(F) lines:", loc.lines, "points:", sorted(map(str, loc.points)))

fatou = ProjPoint((math.sqrt(4.5), 1, 1))  # tau = 5/4
w = fatou
for n in range(1, 6):
    w = F_pi(w)
    print(n, w, iterate_closed(fatou, n))
print("f =", f_limit(fatou), " limit map:", limit_map(fatou))

julia = ProjPoint((math.sqrt(2 + 2 * math.cos(1.0)), 1, 1))  # tau = cos 1
print("Julia point:", julia_membership(julia), julia_membership(julia, "escape"))
