"""Bell expressions: quantum values under dressed measurements and exact
local-hidden-variable bounds by deterministic-strategy enumeration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .detmodel import Convention, ConventionError, MeasurementSetting, validate_efficiency
from .qstate import DensityMatrix

OUTCOME_PLUS = "+"
OUTCOME_MINUS = "-"
OUTCOME_NONE = "0"  # no click (trinary bookkeeping)
OUTCOME_ANY = "*"  # marginalized party
_OUTCOME_LABELS = (OUTCOME_PLUS, OUTCOME_MINUS, OUTCOME_NONE, OUTCOME_ANY)

# Deterministic strategies per trinary party and setting.
_TRINARY_OUTCOMES = (OUTCOME_PLUS, OUTCOME_MINUS, OUTCOME_NONE)

STRATEGY_LIMIT = 1_000_000


class BellForm(str, Enum):
    CORRELATION = "correlation"
    PROBABILITY = "probability"


@dataclass(frozen=True)
class BellTerm:
    """One weighted term: a joint setting choice and, for probability-form
    expressions, a joint outcome label per party ('*' marginalizes)."""

    settings: tuple[int, ...]
    weight: float
    outcomes: tuple[str, ...] | None = None


@dataclass(frozen=True)
class BellExpression:
    """Coefficient table over joint settings (and outcomes) with its
    classical bound."""

    n_parties: int
    settings_per_party: int
    form: BellForm
    terms: tuple[BellTerm, ...]
    classical_bound: float

    def __post_init__(self) -> None:
        if self.n_parties < 1:
            raise ValueError("n_parties must be >= 1")
        if self.settings_per_party < 1:
            raise ValueError("settings_per_party must be >= 1")
        for term in self.terms:
            if len(term.settings) != self.n_parties:
                raise ValueError(f"term {term} does not cover {self.n_parties} parties")
            if any(not 0 <= j < self.settings_per_party for j in term.settings):
                raise ValueError(f"term {term} uses a setting index out of range")
            if self.form == BellForm.CORRELATION:
                if term.outcomes is not None:
                    raise ValueError("correlation terms carry no outcome labels")
            else:
                if term.outcomes is None or len(term.outcomes) != self.n_parties:
                    raise ValueError(f"probability term {term} needs one outcome per party")
                if any(o not in _OUTCOME_LABELS for o in term.outcomes):
                    raise ValueError(f"term {term} uses an unknown outcome label")

    def to_json_dict(self) -> dict:
        terms = []
        for term in self.terms:
            doc: dict = {"settings": list(term.settings), "weight": term.weight}
            if term.outcomes is not None:
                doc["outcomes"] = list(term.outcomes)
            terms.append(doc)
        return {
            "n_parties": self.n_parties,
            "settings_per_party": self.settings_per_party,
            "form": self.form.value,
            "classical_bound": self.classical_bound,
            "terms": terms,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BellExpression":
        form = BellForm(doc["form"])
        terms = []
        for item in doc["terms"]:
            outcomes = item.get("outcomes")
            terms.append(
                BellTerm(
                    settings=tuple(int(j) for j in item["settings"]),
                    weight=float(item["weight"]),
                    outcomes=None if outcomes is None else tuple(str(o) for o in outcomes),
                )
            )
        expr = cls(
            n_parties=int(doc["n_parties"]),
            settings_per_party=int(doc["settings_per_party"]),
            form=form,
            terms=tuple(terms),
            classical_bound=float(doc["classical_bound"]) if "classical_bound" in doc else 0.0,
        )
        if "classical_bound" not in doc:
            expr = cls(
                n_parties=expr.n_parties,
                settings_per_party=expr.settings_per_party,
                form=expr.form,
                terms=expr.terms,
                classical_bound=lhv_bound(expr),
            )
        return expr


def preset(name: str) -> BellExpression:
    """Built-in expressions: "CHSH" (correlation, bound 2) and
    "EBERHARD_CH" (probability/CH form, bound 0, detected clicks only)."""
    if name == "CHSH":
        terms = (
            BellTerm((0, 0), 1.0),
            BellTerm((0, 1), 1.0),
            BellTerm((1, 0), 1.0),
            BellTerm((1, 1), -1.0),
        )
        return BellExpression(2, 2, BellForm.CORRELATION, terms, 2.0)
    if name == "EBERHARD_CH":
        pp = (OUTCOME_PLUS, OUTCOME_PLUS)
        terms = (
            BellTerm((0, 0), 1.0, pp),
            BellTerm((0, 1), 1.0, pp),
            BellTerm((1, 0), 1.0, pp),
            BellTerm((1, 1), -1.0, pp),
            BellTerm((0, 0), -1.0, (OUTCOME_PLUS, OUTCOME_ANY)),
            BellTerm((0, 0), -1.0, (OUTCOME_ANY, OUTCOME_PLUS)),
        )
        return BellExpression(2, 2, BellForm.PROBABILITY, terms, 0.0)
    raise ValueError(f"unknown preset {name!r}")


def _strategy_count(expr: BellExpression) -> int:
    per_party = (len(_TRINARY_OUTCOMES) if expr.form == BellForm.PROBABILITY else 2) ** (
        expr.settings_per_party
    )
    return per_party**expr.n_parties


def lhv_bound(expr: BellExpression) -> float:
    """Exact maximum over all deterministic local strategies.

    Correlation form assigns +/-1 per setting and party; probability form
    assigns one of {+, -, no-click}. The maximum over this finite set is
    the classical bound of the local polytope.
    """
    if _strategy_count(expr) > STRATEGY_LIMIT:
        raise ValueError(
            f"enumeration would visit {_strategy_count(expr)} strategies, "
            f"limit is {STRATEGY_LIMIT}"
        )
    s = expr.settings_per_party
    if expr.form == BellForm.CORRELATION:
        party_strategies = list(itertools.product((1.0, -1.0), repeat=s))
        best = -math.inf
        for assignment in itertools.product(party_strategies, repeat=expr.n_parties):
            value = 0.0
            for term in expr.terms:
                prod = term.weight
                for i, j in enumerate(term.settings):
                    prod *= assignment[i][j]
                value += prod
            best = max(best, value)
        return best

    party_strategies = list(itertools.product(_TRINARY_OUTCOMES, repeat=s))
    best = -math.inf
    for assignment in itertools.product(party_strategies, repeat=expr.n_parties):
        value = 0.0
        for term in expr.terms:
            assert term.outcomes is not None
            hit = True
            for i, j in enumerate(term.settings):
                label = term.outcomes[i]
                if label != OUTCOME_ANY and assignment[i][j] != label:
                    hit = False
                    break
            if hit:
                value += term.weight
        best = max(best, value)
    return best


_VARIANT_INDEX = {OUTCOME_PLUS: 0, OUTCOME_MINUS: 1, OUTCOME_NONE: 2, OUTCOME_ANY: 3}


class _Evaluator:
    """Vectorized quantum-value kernel for a fixed expression and state.

    Precomputes the term structure and an einsum path so that one
    evaluation costs a handful of array operations; used directly by the
    settings optimizer, where it runs tens of thousands of times.
    """

    def __init__(
        self,
        expr: BellExpression,
        rho: np.ndarray,
        etas: Sequence[float],
        convention: Convention,
    ) -> None:
        if expr.form == BellForm.CORRELATION and convention != Convention.FOLD:
            raise ConventionError("correlation-form expressions require the FOLD convention")
        n = expr.n_parties
        self.expr = expr
        self.convention = convention
        self.etas = np.array([validate_efficiency(e) for e in etas], dtype=float)
        if self.etas.shape != (n,):
            raise ValueError(f"expected {n} efficiencies, got {self.etas.shape}")
        dim = 2**n
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (dim, dim):
            raise ValueError(f"state dimension {rho.shape} does not match {n} parties")
        self.rho_tensor = rho.reshape([2] * (2 * n))
        self.weights = np.array([t.weight for t in expr.terms], dtype=float)
        self.term_settings = np.array([t.settings for t in expr.terms], dtype=int)
        if expr.form == BellForm.PROBABILITY:
            self.term_variants = np.array(
                [[_VARIANT_INDEX[o] for o in t.outcomes] for t in expr.terms], dtype=int
            )
        else:
            self.term_variants = None
        # Tr(rho kron_i M_i) = sum rho[r, c] prod_i M_i[c_i, r_i]
        rows = [chr(ord("a") + i) for i in range(n)]
        cols = [chr(ord("a") + n + i) for i in range(n)]
        operands = ["".join(rows) + "".join(cols)]
        for i in range(n):
            operands.append("t" + cols[i] + rows[i])
        self.subscript = ",".join(operands) + "->t"

    def _projectors(self, thetas: np.ndarray, phis: np.ndarray | None) -> np.ndarray:
        half = 0.5 * np.asarray(thetas, dtype=float)
        upper = np.cos(half).astype(complex)
        lower = np.sin(half).astype(complex)
        if phis is not None:
            lower = lower * np.exp(1j * np.asarray(phis, dtype=float))
        kets = np.stack([upper, lower], axis=-1)  # (n, s, 2)
        return kets[..., :, None] * kets[..., None, :].conj()  # (n, s, 2, 2)

    def value(self, thetas: np.ndarray, phis: np.ndarray | None = None) -> float:
        proj = self._projectors(thetas, phis)
        eye = np.eye(2, dtype=complex)
        eta = self.etas[:, None, None, None]
        if self.expr.form == BellForm.CORRELATION:
            table = 2.0 * eta * proj - eye  # (n, s, 2, 2)
            ops = [table[i, self.term_settings[:, i]] for i in range(self.expr.n_parties)]
        else:
            if self.convention == Convention.TRINARY:
                variants = np.stack(
                    [
                        eta * proj,
                        eta * (eye - proj),
                        (1.0 - eta) * np.broadcast_to(eye, proj.shape),
                        np.broadcast_to(eye, proj.shape),
                    ],
                    axis=2,
                )  # (n, s, 4, 2, 2)
            else:
                variants = np.stack(
                    [
                        eta * proj,
                        eye - eta * proj,
                        np.zeros_like(proj),
                        np.broadcast_to(eye, proj.shape),
                    ],
                    axis=2,
                )
            ops = [
                variants[i, self.term_settings[:, i], self.term_variants[:, i]]
                for i in range(self.expr.n_parties)
            ]
        per_term = np.einsum(self.subscript, self.rho_tensor, *ops)
        return float(np.real(self.weights @ per_term))


def quantum_value(
    expr: BellExpression,
    rho: DensityMatrix | np.ndarray,
    settings: Sequence[Sequence[MeasurementSetting]],
    etas: Sequence[float],
    convention: Convention = Convention.FOLD,
) -> float:
    """Evaluate the expression on ``rho`` with efficiency-dressed measurements.

    Correlation form uses folded observables 2 eta Pi+ - I and requires the
    FOLD convention; probability form counts click probabilities under the
    requested convention ('*' parties contribute the identity).
    """
    if len(settings) != expr.n_parties:
        raise ValueError(f"expected settings for {expr.n_parties} parties, got {len(settings)}")
    if any(len(party) != expr.settings_per_party for party in settings):
        raise ValueError(f"every party needs {expr.settings_per_party} settings")
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    thetas, phis = settings_to_angles(settings)
    return _Evaluator(expr, mat, etas, convention).value(thetas, phis)


def angles_to_settings(
    thetas: np.ndarray, phis: np.ndarray | None = None
) -> list[list[MeasurementSetting]]:
    """Pack per-party, per-setting angles into MeasurementSetting lists."""
    thetas = np.asarray(thetas, dtype=float)
    if phis is None:
        phis = np.zeros_like(thetas)
    return [
        [MeasurementSetting(float(t), float(p)) for t, p in zip(row_t, row_p)]
        for row_t, row_p in zip(thetas, phis)
    ]


def settings_to_angles(
    settings: Sequence[Sequence[MeasurementSetting]],
) -> tuple[np.ndarray, np.ndarray]:
    thetas = np.array([[s.theta for s in party] for party in settings], dtype=float)
    phis = np.array([[s.phi for s in party] for party in settings], dtype=float)
    return thetas, phis


def chsh_seed_angles(n_parties: int, settings_per_party: int) -> np.ndarray:
    """Known-good start: {0, pi/2} for the leading parties and
    {pi/4, -pi/4} for the last, the ideal CHSH geometry."""
    thetas = np.zeros((n_parties, settings_per_party), dtype=float)
    for i in range(n_parties):
        base = [0.0, math.pi / 2.0] if i < n_parties - 1 else [math.pi / 4.0, -math.pi / 4.0]
        for j in range(settings_per_party):
            thetas[i, j] = base[j % 2]
    return thetas


@dataclass
class OptimizeOptions:
    """Knobs for the multistart simplex search over measurement angles."""

    restarts: int = 64
    seed: int = 0
    include_phi: bool = False
    xatol: float = 1e-7
    fatol: float = 1e-12
    maxiter: int = 2000
    warm_starts: tuple = field(default_factory=tuple)


def optimize_settings(
    expr: BellExpression,
    rho: DensityMatrix | np.ndarray,
    etas: Sequence[float],
    convention: Convention = Convention.FOLD,
    options: OptimizeOptions | None = None,
) -> tuple[list[list[MeasurementSetting]], float]:
    """Maximize the quantum value over measurement angles.

    Derivative-free simplex search from the CHSH seed, any warm starts, and
    ``restarts`` random starts; the returned value is the best over every
    start's own evaluation and convergence point, so it never falls below
    the value at the seed. Angles stay in the real (x-z) Bloch plane unless
    ``include_phi`` is set.
    """
    opts = options or OptimizeOptions()
    n, s = expr.n_parties, expr.settings_per_party
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    evaluator = _Evaluator(expr, mat, etas, convention)
    n_theta = n * s

    def split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        thetas = x[:n_theta].reshape(n, s)
        phis = x[n_theta:].reshape(n, s) if opts.include_phi else None
        return thetas, phis

    def objective(x: np.ndarray) -> float:
        thetas, phis = split(x)
        return -evaluator.value(thetas, phis)

    starts: list[np.ndarray] = []
    seed_vec = chsh_seed_angles(n, s).reshape(-1)
    if opts.include_phi:
        seed_vec = np.concatenate([seed_vec, np.zeros(n_theta)])
    starts.append(seed_vec)
    for warm in opts.warm_starts:
        thetas, phis = settings_to_angles(warm)
        vec = thetas.reshape(-1)
        if opts.include_phi:
            vec = np.concatenate([vec, phis.reshape(-1)])
        starts.append(vec)
    rng = np.random.default_rng(opts.seed)
    dim = n_theta * (2 if opts.include_phi else 1)
    for _ in range(opts.restarts):
        starts.append(rng.uniform(0.0, 2.0 * math.pi, size=dim))

    best_x, best_val = None, -math.inf
    for x0 in starts:
        start_val = -objective(x0)
        if start_val > best_val:
            best_x, best_val = x0, start_val
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": opts.xatol,
                "fatol": opts.fatol,
                "maxiter": opts.maxiter,
                "maxfev": opts.maxiter,
            },
        )
        if -result.fun > best_val:
            best_x, best_val = result.x, -float(result.fun)
    assert best_x is not None
    thetas, phis = split(np.asarray(best_x, dtype=float))
    return angles_to_settings(thetas, phis), float(best_val)
