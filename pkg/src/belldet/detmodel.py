"""Detection model: dress measurement effects with detector efficiency.

Two bookkeeping conventions coexist and every Bell evaluation declares
which one it uses:

* FOLD: a missed detection counts as a "-" click, so the dressed pair is
  (eta Pi+, I - eta Pi+). Used with correlation-type inequalities.
* TRINARY: a missed detection is a third outcome with probability 1 - eta,
  independent of the state. Used with probability-type (CH/Eberhard)
  inequalities, where only registered clicks enter the expression.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .qstate import DensityMatrix, Effect


class Convention(str, Enum):
    FOLD = "fold"
    TRINARY = "trinary"


class ConventionError(ValueError):
    """Bell-expression form and inefficiency convention do not match."""


@dataclass(frozen=True)
class MeasurementSetting:
    """Qubit projective setting on the Bloch sphere.

    Defines Pi+ = |m><m| with |m> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
    and Pi- = I - Pi+, so the two projectors sum to the identity exactly.
    """

    theta: float
    phi: float = 0.0

    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2.0), cmath.exp(1j * self.phi) * math.sin(self.theta / 2.0)],
            dtype=complex,
        )

    def projector_plus(self) -> np.ndarray:
        m = self.ket()
        return np.outer(m, m.conj())

    def projector_minus(self) -> np.ndarray:
        return np.eye(2, dtype=complex) - self.projector_plus()


# Recurring projector choices: |+><+|, |0><0| and |1><1|.
X_PLUS = MeasurementSetting(theta=math.pi / 2.0)
Z_ZERO = MeasurementSetting(theta=0.0)
Z_ONE = MeasurementSetting(theta=math.pi)


def validate_efficiency(eta: float) -> float:
    """Check eta lies in [0, 1] and return it as a float."""
    value = float(eta)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"efficiency {value} outside [0, 1]")
    return value


def dressed_effects(
    setting: MeasurementSetting, eta: float, target: int = 0
) -> tuple[Effect, Effect]:
    """Efficiency-dressed outcome pair (eta Pi+, I - eta Pi+).

    The pair sums to the identity exactly; at eta = 0 the "-" effect is the
    identity (a blind detector always reports "-").
    """
    eta = validate_efficiency(eta)
    plus = eta * setting.projector_plus()
    minus = np.eye(2, dtype=complex) - plus
    return Effect(plus, (target,)), Effect(minus, (target,))


def dressed_observable(setting: MeasurementSetting, eta: float) -> np.ndarray:
    """A(eta) = 2 eta Pi+ - I, the folded +/- observable.

    Eigenvalues are {2 eta - 1, -1}; at eta = 1 this is the ideal +/-1
    observable and the expectation is affine in eta for any fixed state.
    """
    eta = validate_efficiency(eta)
    return 2.0 * eta * setting.projector_plus() - np.eye(2, dtype=complex)


def click_probabilities(
    setting: MeasurementSetting, eta: float, rho: DensityMatrix | np.ndarray
) -> tuple[float, float, float]:
    """Trinary outcome probabilities (p+, p-, p0) for a single-qubit state.

    p+ = eta Tr(rho Pi+), p- = eta Tr(rho Pi-), and the no-click branch
    p0 = 1 - eta is state independent; the three always sum to one.
    """
    eta = validate_efficiency(eta)
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError(f"expected a single-qubit state, got shape {mat.shape}")
    p_plus = eta * float(np.trace(mat @ setting.projector_plus()).real)
    p_minus = eta * float(np.trace(mat @ setting.projector_minus()).real)
    return p_plus, p_minus, 1.0 - eta
