"""Frame forms, the three Kähler forms and the quaternionic relations.

omega_1 is computed three ways: from the theta forms, from its expanded
expression, and as g(J1 ., .) with J1 read off from the holomorphic
coordinates. The last lines show that omega_1 is not closed but obeys its
structure equation.
"""

import numpy as np

from qkmetric.cmap import (
    QkPoint,
    complex_structure,
    deformed_fs_metric,
    frame_form_metric,
    j1_from_holomorphic,
    kahler_forms,
    omega1_differential,
    omega1_expanded,
    omega1_structure_rhs,
    quaternion_sign,
    two_form_of,
)
from qkmetric.prepotential import CubicForm, VerySpecial

model = VerySpecial(CubicForm.from_monomials(1, {(1, 1, 1): 1.0}))
c = 1.0
q = QkPoint([0.3 + 1.1j], rho=0.9, phi=-0.2, zeta_t=[0.4, 0.1], zeta=[-0.3, 0.6])

g = deformed_fs_metric(model, c, q)
print(f"metric from tau, A_I and the base: defect {np.max(np.abs(frame_form_metric(model, c, q) - g)):.1e}")

w1, w2, w3 = kahler_forms(model, c, q)
w_exp = omega1_expanded(model, c, q)
w_hol = two_form_of(g, j1_from_holomorphic(model, c, q))
print(f"omega_1 routes: theta vs expanded {np.max(np.abs(w1 - w_exp)):.1e}, theta vs holomorphic {np.max(np.abs(w1 - w_hol)):.1e}")

J1, J2, J3 = (complex_structure(g, w) for w in (w1, w2, w3))
eye = np.eye(g.shape[0])
sigma = quaternion_sign(J1, J2, J3)
print(f"J_i^2 + 1: {max(np.max(np.abs(J @ J + eye)) for J in (J1, J2, J3)):.1e}")
print(f"J1 J2 = {sigma:+d} J3 to {np.max(np.abs(J1 @ J2 - sigma * J3)):.1e}")

dw = omega1_differential(model, c, q)
rhs = omega1_structure_rhs(model, c, q)
print(f"\n|d omega_1| = {np.max(np.abs(dw)):.3f}  (not closed)")
print(f"|d omega_1 - 2(theta_2 ^ omega_3 - theta_3 ^ omega_2)| = {np.max(np.abs(dw - rhs)):.1e}")
