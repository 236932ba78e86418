"""Special Kähler bases from a prepotential.

Builds the cubic model h = x^3 and the complex hyperbolic line, prints their
base metrics and checks the r-map algebra by hand.
"""

import numpy as np

from qkmetric.prepotential import CubicForm, Quadratic, VerySpecial, special_matrices
from qkmetric.special_kahler import (
    PskPoint,
    admissible_k,
    base_metric,
    base_metric_chn,
    base_metric_fd,
    complex_hessian_cubic,
    base_metric_inverse_cubic,
    kahler_potential,
)

np.set_printoptions(precision=5, suppress=True)

cubic = CubicForm.from_monomials(1, {(1, 1, 1): 1.0})
x3 = VerySpecial(cubic)
p = PskPoint([0.3 + 1.2j])

print("h = x^3 at X =", p.X[0])
print("  Kahler potential K = -log 8h:", kahler_potential(x3, p), "=", -np.log(8 * 1.2**3))
print("  base metric (y, x chart):\n", base_metric(x3, p))
print("  same metric from a finite-difference Hessian of K:\n", base_metric_fd(x3, p))

K = complex_hessian_cubic(cubic, p.x)
print("  K_{mu nu~} times its closed-form inverse:", K @ base_metric_inverse_cubic(cubic, p.x))
f = special_matrices(x3, p.z).f
print(f"  z N conj(z) = {f:.12f}, 8 h(x) = {8 * cubic.h(p.x):.12f}")
print("  largest k with gbar >= (k/4)(d^c K)^2:", admissible_k(x3, p), "(1/3 for every cubic)")

ball = Quadratic(1)
q = PskPoint([0.3 - 0.4j])
print("\ncomplex hyperbolic line at X =", q.X[0])
print("  from the prepotential:\n", base_metric(ball, q))
print("  closed form:\n", base_metric_chn(q))
