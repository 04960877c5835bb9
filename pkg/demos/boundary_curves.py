"""Trace the theoretical phase-transition boundary.

Below the curve kappa = h(beta0, gamma0) the logistic MLE exists with
probability tending to one as p/n -> kappa; above it, the data become
separable and the MLE escapes to infinity.  This script sweeps the curve
along rays beta0 = rho*gamma, gamma0 = sqrt(1-rho^2)*gamma and prints a
small table, including the intercept-only ray against the marginal
P(y = 1) axis.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np

from mle_phase import boundary_curve, sigmoid, solve_boundary, ModelParams

gammas = np.linspace(0.0, 10.0, 11)

print("Boundary h along rays beta0 = rho*gamma, gamma0 = sqrt(1-rho^2)*gamma")
print(f"{'gamma':>6} " + " ".join(f"rho={r:<4}" for r in (0.0, 0.5, 1.0)))
curves = {rho: boundary_curve(rho, gammas) for rho in (0.0, 0.5, 1.0)}
for i, g in enumerate(gammas):
    row = " ".join(f"{curves[rho][i].h:8.4f}" for rho in (0.0, 0.5, 1.0))
    print(f"{g:6.1f} {row}")

print()
print("No signal: h(0,0) =", solve_boundary(ModelParams(0, 0)).h, "(the classical 1/2)")

print()
print("Intercept-only model, indexed by the marginal label probability:")
print(f"{'P(y=1)':>8} {'h':>8}")
for gamma in (0.0, 0.847, 1.386, 2.197, 3.0, 4.0):
    pt = boundary_curve(1.0, [gamma])[0]
    print(f"{sigmoid(gamma):8.3f} {pt.h:8.4f}")
print()
print("At P(y=1) = 0.9 (gamma = ln 9) the boundary sits at kappa = 0.2556:")
print("more imbalanced responses tolerate fewer dimensions before the MLE is lost.")
