"""Build the named multiqubit states and reduce them to Bell pairs.

The whole protocol rests on one observation: for GHZ, Dicke and cluster
states one can pick single-qubit projectors for all but two parties such
that the surviving pair is maximally entangled.
"""

import numpy as np

import belldet as bd
from belldet.detmodel import X_PLUS, Z_ONE, Z_ZERO

np.set_printoptions(precision=4, suppress=True)

print("=== GHZ_4, project |+> on qubits 0 and 1 ===")
rho = bd.ghz(4).density()
for step in range(2):
    weight, post = bd.project(rho, bd.Effect(X_PLUS.projector_plus(), (0,)))
    rho = bd.partial_trace(post, (0,))
    print(f"projection {step + 1}: weight = {weight:.4f}, {rho.n_qubits} qubits left")
print("final state matches the phi+ Bell pair:",
      np.allclose(rho.matrix, bd.bell_phi_plus().density().matrix, atol=1e-12))

print()
print("=== Dicke(4,2), project |1> then |0> ===")
rho = bd.dicke(4, 2).density()
for setting in (Z_ONE, Z_ZERO):
    weight, post = bd.project(rho, bd.Effect(setting.projector_plus(), (0,)))
    rho = bd.partial_trace(post, (0,))
    print(f"weight = {weight:.4f}")
print("final state matches the psi+ Bell pair:",
      np.allclose(rho.matrix, bd.bell_psi_plus().density().matrix, atol=1e-12))

print()
print("=== Cluster state: qubit 0 may even be lost entirely ===")
traced = bd.partial_trace(bd.cluster4().density(), [0])
weight, post = bd.project(traced, bd.Effect(Z_ZERO.projector_plus(), (0,)))
final = bd.partial_trace(post, (0,))
print(f"after losing qubit 0 and projecting |0>: weight = {weight:.4f}")
print("Bell pair recovered:",
      np.allclose(final.matrix, bd.bell_phi_plus().density().matrix, atol=1e-12))

print()
print("=== Tilting the first projector prepares a partially entangled pair ===")
alpha = 0.3
config = bd.ScenarioConfig(
    state=bd.StateSpec("GHZ", 4), k=2, eta_L=0.1, eta_H=1.0, bell=bd.preset("CHSH"),
    projectors=(bd.MeasurementSetting(2 * alpha), X_PLUS),
)
p_list, rho_prime = bd.projected_state(config)
print(f"projection probabilities: {p_list}")
print("equals cos(a)|00> + sin(a)|11>:",
      np.allclose(rho_prime.matrix, bd.partial_pair(alpha).density().matrix, atol=1e-12))
