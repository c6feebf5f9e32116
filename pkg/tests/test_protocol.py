import math

import numpy as np
import pytest

from belldet import (
    Convention,
    MeasurementSetting,
    ScenarioConfig,
    StateSpec,
    ZeroProjectionError,
    bell_phi_plus,
    composite_lhs,
    critical_eta_high,
    critical_visibility,
    default_projectors,
    partial_pair,
    preset,
    projected_state,
    quantum_value,
    symmetric_critical_eta,
)
from belldet.detmodel import X_PLUS, Z_ONE, Z_ZERO
from belldet.qstate import embed_operator
from belldet.states import make_state, add_white_noise

ETA_CRIT = 2.0 / (1.0 + math.sqrt(2.0))
TSIRELSON = 2.0 * math.sqrt(2.0)


def ghz_chsh_config(n=4, **kwargs):
    defaults = dict(state=StateSpec("GHZ", n), k=2, eta_L=0.1, eta_H=1.0, bell=preset("CHSH"))
    defaults.update(kwargs)
    return ScenarioConfig(**defaults)


def pinned_threshold_closed_form(alpha):
    # one ideal party, the other dressed: exact root for cos(a)|00>+sin(a)|11>
    c, s = math.cos(2 * alpha), math.sin(2 * alpha)
    return 2.0 * (1.0 - c) / (2.0 * math.sqrt(1.0 + s * s) - 2.0 * c)


class TestProjectedState:
    def test_ghz4_default_plus_projections(self):
        p_list, rho = projected_state(ghz_chsh_config())
        assert p_list == pytest.approx([0.5, 0.5], abs=1e-12)
        np.testing.assert_allclose(rho.matrix, bell_phi_plus().density().matrix, atol=1e-12)

    def test_ghz_with_tilted_first_projector_leaves_partial_pair(self):
        alpha = 0.3
        config = ghz_chsh_config(projectors=(MeasurementSetting(2 * alpha), X_PLUS))
        p_list, rho = projected_state(config)
        assert p_list[0] == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(rho.matrix, partial_pair(alpha).density().matrix, atol=1e-12)

    def test_orthogonal_projector_raises_zero_projection(self):
        config = ScenarioConfig(
            state=StateSpec("Dicke", 4, excitations=4),
            k=2,
            eta_L=0.1,
            eta_H=1.0,
            bell=preset("CHSH"),
            projectors=(Z_ZERO, Z_ZERO),
        )
        with pytest.raises(ZeroProjectionError):
            projected_state(config)

    def test_sequential_weights_match_single_shot_combined_projector(self):
        config = ScenarioConfig(
            state=StateSpec("Dicke", 5, excitations=2),
            k=2,
            eta_L=0.1,
            eta_H=1.0,
            bell=preset("CHSH"),
            visibility=0.8,
        )
        p_list, _ = projected_state(config)
        rho = add_white_noise(make_state(config.state), 0.8).matrix
        combined = np.eye(2**5, dtype=complex)
        for qubit, setting in enumerate(config.resolved_projectors()):
            combined = combined @ embed_operator(setting.projector_plus(), [qubit], 5)
        single_shot = float(np.trace(combined @ rho @ combined.conj().T).real)
        assert abs(np.prod(p_list) - single_shot) < 1e-12

    def test_blind_cluster_path(self):
        config = ScenarioConfig(
            state=StateSpec("Cluster4", 4),
            k=2,
            eta_L=0.1,
            eta_H=1.0,
            bell=preset("CHSH"),
            lost=1,
            projectors=(Z_ZERO,),
        )
        p_list, rho = projected_state(config)
        assert p_list == pytest.approx([0.5], abs=1e-12)
        np.testing.assert_allclose(rho.matrix, bell_phi_plus().density().matrix, atol=1e-12)


class TestComposite:
    def test_ghz4_reference_value(self):
        lhs = composite_lhs(ghz_chsh_config())
        assert lhs == pytest.approx(0.01 * 0.25 * (TSIRELSON - 2.0), abs=1e-9)

    def test_zero_at_threshold(self):
        lhs = composite_lhs(ghz_chsh_config(eta_H=ETA_CRIT))
        assert abs(lhs) < 1e-9

    def test_maximally_mixed_never_violates(self):
        lhs = composite_lhs(ghz_chsh_config(visibility=0.0))
        assert lhs <= 0.0

    def test_eta_L_cannot_flip_the_sign(self):
        settings = None
        signs = []
        for eta_L in (1e-3, 1e-1, 1.0):
            config = ghz_chsh_config(eta_L=eta_L, eta_H=0.9)
            signs.append(math.copysign(1.0, composite_lhs(config, restarts=12)))
        assert len(set(signs)) == 1 and signs[0] > 0


class TestCriticalEta:
    def test_ghz3_default_projections(self):
        result = critical_eta_high(ghz_chsh_config(n=3), restarts=24)
        assert result.found
        assert result.critical_value == pytest.approx(ETA_CRIT, abs=1e-6)
        assert result.achieved_residual < 1e-9

    def test_threshold_consistency_with_composite(self):
        result = critical_eta_high(ghz_chsh_config(), restarts=24)
        lhs = composite_lhs(ghz_chsh_config(eta_H=result.critical_value), restarts=24)
        assert abs(lhs) < 1e-8

    def test_not_found_without_violation(self):
        # frozen settings that cannot violate: both parties measure sigma_z
        frozen = ((Z_ZERO, Z_ZERO), (Z_ZERO, Z_ZERO))
        result = critical_eta_high(ghz_chsh_config(settings=frozen))
        assert not result.found
        assert result.critical_value is None

    def test_monotone_in_eta_at_fixed_settings(self):
        config = ghz_chsh_config()
        _, rho = projected_state(config)
        settings = [
            [MeasurementSetting(0.0), MeasurementSetting(math.pi / 2)],
            [MeasurementSetting(math.pi / 4), MeasurementSetting(-math.pi / 4)],
        ]
        values = [
            quantum_value(preset("CHSH"), rho, settings, [eta, eta]) for eta in (0.83, 0.9, 1.0)
        ]
        assert values[0] <= values[1] <= values[2]


class TestSymmetricCriticalEta:
    def test_chsh_on_bell_pair(self):
        result = symmetric_critical_eta(preset("CHSH"), bell_phi_plus().density(), restarts=24)
        assert result.found
        assert result.critical_value == pytest.approx(ETA_CRIT, abs=1e-6)

    def test_pinned_party_matches_closed_form(self):
        # thresholds approach 1/2 for weak entanglement but never cross it;
        # at alpha = pi/4 the marginal term vanishes and the root is 1/sqrt(2)
        thresholds = []
        for alpha in (math.pi / 4, 0.2, 0.1):
            state = partial_pair(alpha).density()
            result = symmetric_critical_eta(
                preset("CHSH"), state, eta_fixed=[1.0, None], restarts=24
            )
            assert result.found
            assert result.critical_value == pytest.approx(
                pinned_threshold_closed_form(alpha), abs=1e-6
            )
            thresholds.append(result.critical_value)
        assert thresholds[0] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)
        assert thresholds == sorted(thresholds, reverse=True)
        assert 0.5 < min(thresholds) < 0.51

    def test_pinned_is_easier_than_symmetric(self):
        pinned = symmetric_critical_eta(
            preset("CHSH"), bell_phi_plus().density(), eta_fixed=[1.0, None], restarts=24
        )
        assert pinned.critical_value < ETA_CRIT

    def test_not_found_on_product_state(self):
        result = symmetric_critical_eta(
            preset("CHSH"), partial_pair(0.0).density(), restarts=12
        )
        assert not result.found


class TestCriticalVisibility:
    def test_bell_pair_threshold(self):
        config = ScenarioConfig(
            state=StateSpec("BellPhiPlus", 2), k=2, eta_L=1.0, eta_H=1.0, bell=preset("CHSH")
        )
        result = critical_visibility(config, restarts=24)
        assert result.found
        assert result.critical_value == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)
        assert result.achieved_residual < 1e-9

    def test_noise_branch_closed_form_agrees(self):
        config = ScenarioConfig(
            state=StateSpec("BellPhiPlus", 2), k=2, eta_L=1.0, eta_H=1.0, bell=preset("CHSH")
        )
        result = critical_visibility(config, restarts=24)
        assert result.diagnostics["closed_form_noise_branch"] == pytest.approx(
            result.critical_value, abs=1e-9
        )

    def test_not_found_below_efficiency_threshold(self):
        config = ScenarioConfig(
            state=StateSpec("BellPhiPlus", 2), k=2, eta_L=1.0, eta_H=0.5, bell=preset("CHSH")
        )
        result = critical_visibility(config, restarts=12)
        assert not result.found


class TestConfigValidation:
    def test_k_exceeds_n(self):
        config = ghz_chsh_config(k=5)
        assert any("k" in issue for issue in config.validate())

    def test_efficiency_out_of_range(self):
        config = ghz_chsh_config(eta_H=1.2)
        assert any("eta_H" in issue for issue in config.validate())

    def test_projector_count_mismatch(self):
        config = ghz_chsh_config(projectors=(X_PLUS,))
        assert any("projectors" in issue for issue in config.validate())

    def test_convention_mismatch(self):
        config = ghz_chsh_config(convention=Convention.TRINARY)
        assert any("convention" in issue for issue in config.validate())

    def test_valid_config_has_no_issues(self):
        assert ghz_chsh_config().validate() == []

    def test_json_round_trip(self):
        config = ghz_chsh_config(projectors=(MeasurementSetting(0.2), X_PLUS))
        assert ScenarioConfig.from_json_dict(config.to_json_dict()) == config


class TestDefaultProjectors:
    def test_ghz_all_plus(self):
        assert default_projectors(StateSpec("GHZ", 5), 3) == [X_PLUS, X_PLUS, X_PLUS]

    def test_cluster_pattern(self):
        assert default_projectors(StateSpec("Cluster4", 4), 2) == [X_PLUS, Z_ZERO]
        assert default_projectors(StateSpec("Cluster4", 4), 1, skip=1) == [Z_ZERO]

    def test_dicke_pattern_has_excitations_minus_one_ones(self):
        assert default_projectors(StateSpec("Dicke", 5, excitations=3), 3) == [
            Z_ONE,
            Z_ONE,
            Z_ZERO,
        ]

    def test_dicke_defaults_leave_a_bell_state(self):
        config = ScenarioConfig(
            state=StateSpec("Dicke", 4, excitations=2),
            k=2,
            eta_L=0.1,
            eta_H=1.0,
            bell=preset("CHSH"),
        )
        p_list, rho = projected_state(config)
        assert p_list == pytest.approx([0.5, 2.0 / 3.0], abs=1e-12)
        psi = np.zeros(4, dtype=complex)
        psi[1] = psi[2] = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(rho.matrix, np.outer(psi, psi.conj()), atol=1e-12)
