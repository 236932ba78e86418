"""Geodesics and the two completeness probes.

Integrates a geodesic of the deformed metric, measures the rho-segment
towards rho = 0 and the base segment towards the boundary of the ball.
"""

import math

import numpy as np

from qkmetric.cmap import QkPoint, metric_field
from qkmetric.geodesics import (
    GeodesicState,
    base_boundary_length,
    energy,
    geodesic_integrate,
    radial_divergence_probe,
    radial_length_exact,
)
from qkmetric.prepotential import Quadratic

model = Quadratic(0)
q = QkPoint([], rho=1.0, phi=0.2, zeta_t=[0.1], zeta=[-0.3])
gf = metric_field(model, 0.5)
start = GeodesicState(q.chart, [0.3, 0.1, -0.2, 0.4])
traj = geodesic_integrate(gf, start, T=5.0, steps=100)
print("geodesic end point:", np.round(traj.final.position, 5), f"({traj.termination.value})")
print(f"energy drift over T = 5: {abs(energy(gf, traj.final) - energy(gf, start)):.1e}")

print("\nlength of the rho-segment from 1 to eps (bound log(1/eps)/2):")
for c in (0.0, 1.0):
    for k in (2, 4, 8):
        eps = math.exp(-k)
        length, bound = radial_divergence_probe(model, c, 1.0, eps, q)
        print(f"  c = {c}, eps = e^-{k}: {length:.5f} (closed form {radial_length_exact(c, 1.0, eps):.5f}, bound {bound})")

print("\nbase length from X = 0 to |X| = 1 - delta on the complex hyperbolic line:")
for delta in (1e-2, 1e-3, 1e-4, 1e-6):
    print(f"  delta = {delta:g}: {base_boundary_length(Quadratic(1), delta):.4f} >= {0.5 * abs(math.log(delta)):.4f}")
