"""Factories for the named multiqubit states and the white-noise mixer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import DEFAULT_MAX_QUBITS, DensityMatrix, PureState, QubitCapacityError

STATE_KINDS = ("GHZ", "Dicke", "W", "Cluster4", "BellPhiPlus", "BellPsiPlus", "PartialPair")

# Kinds whose qubit count is fixed; used to fill defaults when parsing configs.
_FIXED_N = {"Cluster4": 4, "BellPhiPlus": 2, "BellPsiPlus": 2, "PartialPair": 2}


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a state, as it appears in config files.

    ``excitations`` is meaningful for Dicke only; ``alpha`` (radians) for
    PartialPair only.
    """

    kind: str
    n: int
    excitations: int | None = None
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in STATE_KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind in _FIXED_N and self.n != _FIXED_N[self.kind]:
            raise ValueError(f"{self.kind} requires n = {_FIXED_N[self.kind]}, got {self.n}")
        if self.kind in ("GHZ", "W") and self.n < 2:
            raise ValueError(f"{self.kind} requires n >= 2")
        if self.kind == "Dicke":
            if self.excitations is None:
                raise ValueError("Dicke requires an excitation count")
            if not 0 <= self.excitations <= self.n:
                raise ValueError(f"Dicke excitations must lie in [0, {self.n}]")
        if self.kind == "PartialPair" and self.alpha is None:
            raise ValueError("PartialPair requires alpha")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StateSpec":
        kind = doc["kind"]
        n = int(doc.get("n", _FIXED_N.get(kind, 0)))
        excitations = doc.get("excitations")
        alpha = doc.get("alpha")
        return cls(
            kind=kind,
            n=n,
            excitations=None if excitations is None else int(excitations),
            alpha=None if alpha is None else float(alpha),
        )

    def to_json_dict(self) -> dict:
        doc: dict = {"kind": self.kind, "n": self.n}
        if self.excitations is not None:
            doc["excitations"] = self.excitations
        if self.alpha is not None:
            doc["alpha"] = self.alpha
        return doc


def ghz(n: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) on n qubits."""
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, amp)


def dicke(n: int, excitations: int) -> PureState:
    """Uniform superposition of all n-qubit basis states with the given weight."""
    if not 0 <= excitations <= n:
        raise ValueError(f"excitations must lie in [0, {n}]")
    amp = np.zeros(2**n, dtype=complex)
    hit = [i for i in range(2**n) if bin(i).count("1") == excitations]
    amp[hit] = 1.0 / math.sqrt(len(hit))
    return PureState(n, amp)


def w_state(n: int) -> PureState:
    """The W state, an alias for one excitation shared over n qubits."""
    return dicke(n, 1)


def cluster4() -> PureState:
    """Four-qubit linear cluster state.

    Local-basis convention is pinned so that tracing out qubit 0 yields the
    even mixture of |0>(|00>+|11>)/sqrt(2) and |1>(|11>-|00>)/sqrt(2);
    explicitly (|0000> + |0011> - |1100> + |1111>)/2.
    """
    amp = np.zeros(16, dtype=complex)
    amp[0b0000] = 0.5
    amp[0b0011] = 0.5
    amp[0b1100] = -0.5
    amp[0b1111] = 0.5
    return PureState(4, amp)


def bell_phi_plus() -> PureState:
    return PureState(2, np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0))


def bell_psi_plus() -> PureState:
    return PureState(2, np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0))


def partial_pair(alpha: float) -> PureState:
    """cos(alpha)|00> + sin(alpha)|11>, the partially entangled pair."""
    return PureState(2, np.array([math.cos(alpha), 0.0, 0.0, math.sin(alpha)]))


def make_state(spec: StateSpec, max_qubits: int = DEFAULT_MAX_QUBITS) -> PureState:
    """Build the state described by ``spec``."""
    if spec.n > max_qubits:
        raise QubitCapacityError(f"state needs {spec.n} qubits, cap is {max_qubits}")
    if spec.kind == "GHZ":
        return ghz(spec.n)
    if spec.kind == "Dicke":
        assert spec.excitations is not None
        return dicke(spec.n, spec.excitations)
    if spec.kind == "W":
        return w_state(spec.n)
    if spec.kind == "Cluster4":
        return cluster4()
    if spec.kind == "BellPhiPlus":
        return bell_phi_plus()
    if spec.kind == "BellPsiPlus":
        return bell_psi_plus()
    if spec.kind == "PartialPair":
        assert spec.alpha is not None
        return partial_pair(spec.alpha)
    raise ValueError(f"unknown state kind {spec.kind!r}")


def add_white_noise(psi: PureState, visibility: float) -> DensityMatrix:
    """Mix |psi><psi| with the maximally mixed state.

    Returns v |psi><psi| + (1 - v) I / 2^n for v in [0, 1].
    """
    v = float(visibility)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility {v} outside [0, 1]")
    dim = 2**psi.n_qubits
    mat = v * np.outer(psi.amplitudes, psi.amplitudes.conj())
    mat += (1.0 - v) / dim * np.eye(dim, dtype=complex)
    return DensityMatrix(psi.n_qubits, mat)
