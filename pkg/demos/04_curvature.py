"""Curvature of the deformed metric over h = x^3.

The metric is Einstein with scalar curvature -64 for every c; |Riem|^2 is
constant at c = 0 (a symmetric space) and depends on rho once c > 0.
"""

import numpy as np

from qkmetric.cmap import QkPoint, metric_field
from qkmetric.curvature import curvature_report, riem_norm2_cubic_line
from qkmetric.prepotential import CubicForm, VerySpecial

model = VerySpecial(CubicForm.from_monomials(1, {(1, 1, 1): 1.0}))

print(" c    rho   scalar     Einstein defect   |Riem|^2 (numeric / closed form)")
for c in (0.0, 1.0):
    gf = metric_field(model, c)
    for rho in (0.5, 1.0, 2.0):
        q = QkPoint([0.2 + 0.9j], rho, 0.1, [0.3, -0.2], [0.5, 0.1])
        rep = curvature_report(gf, q.chart)
        print(
            f"{c:3} {rho:5}   {rep.scalar:8.4f}   {rep.einstein_residual / rep.metric_norm:10.1e}"
            f"        {rep.riem_norm2:9.4f} / {riem_norm2_cubic_line(c, rho):9.4f}"
        )

q = QkPoint([0.2 + 0.9j], 1.0, 0.1, [0.3, -0.2], [0.5, 0.1])
rep = curvature_report(metric_field(model, 0.0), q.chart, covariant_derivative=True)
print(f"\nc = 0: |nabla R| = {rep.nabla_R_norm:.1e}, contracted Bianchi defect {rep.bianchi2_residual:.1e}")
