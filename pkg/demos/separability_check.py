"""Separation detection on concrete datasets.

The MLE of a logistic regression exists exactly when no hyperplane puts
every observation on its correct side.  The LP behind check_separation
decides that, returns the LP optimum (0 exactly means overlap), and when
the data are separated produces the separating hyperplane as a witness.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np

from mle_phase import (
    Dataset,
    ModelParams,
    RngSeed,
    check_separation,
    check_single_variable_separation,
    simulate_dataset,
)

print("1. Two points, opposite labels, split at the origin:")
data = Dataset(x=np.array([[-1.0], [1.0]]), y=np.array([-1.0, 1.0]))
v = check_separation(data)
b0, b = v.witness
print(f"   separated={v.separated}, witness b0={b0:.3f}, b={b.round(3)}, "
      f"LP optimum={v.lp_objective:.3f} -> no MLE")

print("\n2. Interleaved labels on a line (no hyperplane works):")
data = Dataset(x=np.array([[-1.0], [-0.5], [0.5], [1.0]]),
               y=np.array([1.0, -1.0, 1.0, -1.0]))
v = check_separation(data)
print(f"   separated={v.separated}, LP optimum={v.lp_objective:.1e} -> MLE exists")

print("\n3. Simulated logistic data on both sides of the boundary")
print("   (gamma0 = 1, boundary at kappa = 0.439, n = 600):")
for kappa in (0.30, 0.55):
    data = simulate_dataset(ModelParams(0, 1), 600, round(kappa * 600), RngSeed(7))
    v = check_separation(data)
    side = "below" if kappa < 0.439 else "above"
    print(f"   kappa={kappa} ({side} the boundary): separated={v.separated}")

print("\n4. Single-variable shortcut (order statistics, no LP):")
v1 = np.array([1.0, 2.0, 3.0, 4.0])
print("   v=(1,2,3,4), y=(+,+,-,-):",
      check_single_variable_separation(v1, np.array([1.0, 1.0, -1.0, -1.0])),
      "(threshold at 2.5)")
print("   v=(1,2,3,4), y=(+,-,+,-):",
      check_single_variable_separation(v1, np.array([1.0, -1.0, 1.0, -1.0])),
      "(interleaved)")
