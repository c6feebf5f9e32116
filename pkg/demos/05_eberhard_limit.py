"""Pushing the critical efficiency toward 2/3 with weak entanglement.

Tilting the first projector to cos(a)|0> + sin(a)|1> leaves the Bell
pair in cos(a)|00> + sin(a)|11>. Under the CH probability expression
with trinary click bookkeeping, the threshold of the two efficient
detectors drops below the maximally entangled value 0.8284 and
approaches 2/3 as a -> 0, at the price of a shrinking violation.
"""

import belldet as bd
from belldet.detmodel import Convention, MeasurementSetting, X_PLUS

eberhard = bd.preset("EBERHARD_CH")

print("alpha    eta_H^crit   gap to 2/3")
for alpha in (0.6, 0.4, 0.2, 0.1, 0.05):
    config = bd.ScenarioConfig(
        state=bd.StateSpec("GHZ", 4),
        k=2,
        eta_L=0.1,
        eta_H=1.0,
        bell=eberhard,
        convention=Convention.TRINARY,
        projectors=(MeasurementSetting(2 * alpha), X_PLUS),
    )
    result = bd.critical_eta_high(config)
    print(f"{alpha:5.2f}    {result.critical_value:.6f}    {result.critical_value - 2/3:+.6f}")

print()
print("for comparison, the CHSH correlation form cannot go below 0.8284:")
config = bd.ScenarioConfig(
    state=bd.StateSpec("GHZ", 4), k=2, eta_L=0.1, eta_H=1.0, bell=bd.preset("CHSH")
)
print(f"  CHSH threshold: {bd.critical_eta_high(config).critical_value:.6f}")
