"""Efficiency-dressed measurements under the two bookkeeping conventions."""

import numpy as np

import belldet as bd
from belldet.detmodel import MeasurementSetting

eta_crit = 2.0 / (1.0 + np.sqrt(2.0))
setting = MeasurementSetting(theta=0.0)  # measure |0><0| vs |1><1|
rho = bd.basis_state("0").density()

print("FOLD convention: a missed detection counts as '-'")
for eta in (1.0, eta_crit, 0.5, 0.0):
    plus, minus = bd.dressed_effects(setting, eta)
    p_plus = bd.expectation(rho, plus)
    p_minus = bd.expectation(rho, minus)
    obs = bd.dressed_observable(setting, eta)
    print(f"  eta={eta:.4f}: p(+)={p_plus:.4f}  p(-)={p_minus:.4f}  "
          f"A(eta) eigenvalues={np.sort(np.linalg.eigvalsh(obs))}")

print()
print("TRINARY convention: the no-click branch is its own outcome")
mixed = np.eye(2) / 2
for eta in (1.0, 2.0 / 3.0, 0.9):
    p = bd.click_probabilities(setting, eta, mixed)
    print(f"  eta={eta:.4f} on I/2: (p+, p-, p0) = ({p[0]:.4f}, {p[1]:.4f}, {p[2]:.4f})")

print()
print("The dressed observable is affine in eta, so thresholds solve cleanly:")
reduced = bd.partial_trace(bd.bell_phi_plus().density(), [1])
values = [float(np.trace(reduced.matrix @ bd.dressed_observable(setting, eta)).real)
          for eta in (0.0, 0.5, 1.0)]
print(f"  <A(eta)> at eta=0, 0.5, 1: {values} (midpoint = average of endpoints)")
