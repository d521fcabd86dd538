"""Inequality machinery: analytic values, LHV survey, interception, sampling."""
import math

import numpy as np
import pytest

from qkd2e.eavesdrop import EavesdropConfig
from qkd2e.protocol import SessionConfig
from qkd2e.source import SourceParams
from qkd2e.wigner import (
    DEFAULT_SETTINGS,
    WignerSettings,
    coincidence_probability,
    estimate_wigner,
    intercepted_wigner,
    interception_slope,
    lhv_survey,
    max_undetected_fraction,
    undetected_sweep,
    wigner_session,
    wigner_value,
    WignerRunData,
)

SEED = 1905


def session(n, eta=0.0, channel="single-pol", seed=SEED, efficiency=1.0,
            settings=DEFAULT_SETTINGS):
    strategy = "none" if eta == 0.0 else "fixed-basis"
    config = SessionConfig(
        protocol="ekert-wigner",
        channel=channel,
        n_pairs=n,
        eve=EavesdropConfig(strategy=strategy, eta=eta),
        seed=seed,
    )
    return wigner_session(config, settings, efficiency=efficiency)


def test_settings_default_angles():
    s = WignerSettings.from_degrees(0, 30, 60)
    assert s.chi == 0.0
    assert s.psi == pytest.approx(math.pi / 6)
    assert s.omega == pytest.approx(math.pi / 3)
    assert s.alice_angles() == (s.chi, s.psi)
    assert s.bob_angles() == (s.psi, s.omega)


def test_settings_validation():
    with pytest.raises(ValueError):
        WignerSettings(chi=float("nan"))


def test_coincidence_probability_sine_law():
    """p(a, b) = sin^2(a - b) / 2, computed from the Born rule."""
    for a, b in [(0.0, math.pi / 6), (math.pi / 6, math.pi / 3), (0.0, math.pi / 3),
                 (0.3, 1.1)]:
        p = coincidence_probability(a, b)
        assert p == pytest.approx(0.5 * math.sin(a - b) ** 2, abs=1e-12)


def test_wigner_value_at_standard_angles():
    assert wigner_value(DEFAULT_SETTINGS) == pytest.approx(-0.125, abs=1e-9)


def test_wigner_value_nonnegative_at_degenerate_angles():
    flat = WignerSettings(chi=0.0, psi=0.0, omega=0.0)
    assert wigner_value(flat) == pytest.approx(0.0, abs=1e-12)


def test_intercepted_wigner_at_full_interception():
    assert intercepted_wigner(DEFAULT_SETTINGS, 1.0) == pytest.approx(1 / 16, abs=1e-9)


def test_intercepted_wigner_affine_in_eta():
    w0 = wigner_value(DEFAULT_SETTINGS)
    slope = interception_slope(DEFAULT_SETTINGS)
    for eta in (0.0, 0.05, 0.1, 0.5, 1.0):
        expected = w0 + eta * slope
        assert intercepted_wigner(DEFAULT_SETTINGS, eta) == pytest.approx(expected, abs=1e-12)


def test_interception_slope_value():
    assert interception_slope(DEFAULT_SETTINGS) == pytest.approx(3 / 16, abs=1e-9)


def test_max_undetected_fraction_thresholds():
    assert max_undetected_fraction(0.1, 1) == pytest.approx(0.0667, abs=0.003)
    assert max_undetected_fraction(0.1, 2) == pytest.approx(0.0471, abs=0.003)
    # double the resolvable uncertainty, double the hideable fraction
    assert max_undetected_fraction(0.2, 1) == pytest.approx(
        2 * max_undetected_fraction(0.1, 1), abs=1e-12
    )


def test_max_undetected_fraction_rejects_zero_slope():
    flat = WignerSettings(chi=0.0, psi=0.0, omega=0.0)
    with pytest.raises(ValueError):
        max_undetected_fraction(0.1, 1, flat)


def test_lhv_survey_exhaustive():
    survey = lhv_survey()
    assert survey.n_cases == 64
    assert len(survey.admissible) == 8
    assert survey.all_admissible_nonnegative
    assert survey.min_admissible_w == 0.0
    # without the perfect-correlation constraint the inequality CAN go negative
    all_w = [case.w for case in survey.cases]
    assert min(all_w) == -1.0


def test_lhv_admissible_means_identical_strategies():
    for case in lhv_survey().admissible:
        assert case.alice == case.bob


def test_estimate_wigner_arithmetic():
    data = WignerRunData(
        dof="pol", settings=DEFAULT_SETTINGS, efficiency=1.0, eta=0.0, n_pairs=100,
        counts={"chi_psi": (10, 100), "psi_omega": (20, 100), "chi_omega": (5, 100)},
    )
    w, se = estimate_wigner(data)
    assert w == pytest.approx(0.10 + 0.20 - 0.05)
    var = (0.1 * 0.9 + 0.2 * 0.8 + 0.05 * 0.95) / 100
    assert se == pytest.approx(math.sqrt(var))


def test_estimate_wigner_requires_trials():
    data = WignerRunData(
        dof="pol", settings=DEFAULT_SETTINGS, efficiency=1.0, eta=0.0, n_pairs=10,
        counts={"chi_psi": (0, 0), "psi_omega": (1, 2), "chi_omega": (0, 1)},
    )
    with pytest.raises(ValueError):
        estimate_wigner(data)


def test_run_data_validates_counts():
    with pytest.raises(ValueError):
        WignerRunData(
            dof="pol", settings=DEFAULT_SETTINGS, efficiency=1.0, eta=0.0,
            n_pairs=10, counts={"chi_psi": (5, 3)},
        )


def test_session_reproduces_quantum_value():
    runs = session(400_000)
    w, se = estimate_wigner(runs["pol"])
    assert abs(w - (-0.125)) < 4 * se


def test_session_phase_dof_same_geometry():
    runs = session(400_000, channel="single-phase")
    w, se = estimate_wigner(runs["phase"])
    assert abs(w - (-0.125)) < 4 * se


def test_session_double_channel_covers_both_dofs():
    runs = session(200_000, channel="double")
    assert set(runs) == {"pol", "phase"}
    for dof in ("pol", "phase"):
        w, se = estimate_wigner(runs[dof])
        assert abs(w - (-0.125)) < 4 * se


def test_session_interception_shifts_w():
    runs = session(400_000, eta=1.0)
    w, se = estimate_wigner(runs["pol"])
    assert abs(w - (1 / 16)) < 4 * se


def test_session_partial_interception():
    eta = 0.5
    runs = session(400_000, eta=eta)
    w, se = estimate_wigner(runs["pol"])
    assert abs(w - intercepted_wigner(DEFAULT_SETTINGS, eta)) < 4 * se


def test_session_key_rounds_error_free_without_eve():
    runs = session(100_000)
    data = runs["pol"]
    assert data.key_qber() == 0.0
    assert len(data.alice_key_bits) > 0


def test_key_basis_interception_is_invisible_in_qber():
    """Eve measuring in the key basis leaves psi/psi rounds error-free;
    only the inequality statistics reveal her. This is why the protocol
    monitors W instead of the sifted error rate."""
    runs = session(100_000, eta=1.0)
    assert runs["pol"].key_qber() == 0.0


def test_off_basis_interception_does_corrupt_the_key():
    """If Eve measures at chi instead, each arm errs with sin^2(30deg) = 1/4
    and the key error becomes 2 q (1 - q) = 3/8."""
    config = SessionConfig(
        protocol="ekert-wigner", channel="single-pol", n_pairs=100_000,
        eve=EavesdropConfig(strategy="fixed-basis", eta=1.0), seed=SEED,
    )
    runs = wigner_session(config, DEFAULT_SETTINGS, efficiency=1.0,
                          eve_basis_angle=DEFAULT_SETTINGS.chi)
    data = runs["pol"]
    qber = data.key_qber()
    n = len(data.alice_key_bits)
    assert abs(qber - 0.375) < 4 * math.sqrt(0.375 * 0.625 / n)


def test_detection_efficiency_thins_trials():
    eff = 0.05
    runs = session(200_000, efficiency=eff)
    data = runs["pol"]
    trials = sum(t for _, t in data.counts.values())
    # pair-level efficiency is eff^2; 3 of 4 setting pairs feed the counts
    expected = 200_000 * eff * eff * 0.75
    assert abs(trials - expected) < 4 * math.sqrt(expected)


def test_stderr_scales_inverse_sqrt_n():
    runs_small = session(50_000)
    runs_big = session(200_000, seed=SEED + 1)
    _, se_small = estimate_wigner(runs_small["pol"])
    _, se_big = estimate_wigner(runs_big["pol"])
    assert se_small / se_big == pytest.approx(2.0, rel=0.15)


def test_session_determinism():
    a = session(50_000)
    b = session(50_000)
    assert a["pol"].counts == b["pol"].counts
    assert np.array_equal(a["pol"].alice_key_bits, b["pol"].alice_key_bits)


def test_session_rejects_wrong_protocol():
    config = SessionConfig(protocol="bb84x2", channel="single-pol", n_pairs=10)
    with pytest.raises(ValueError):
        wigner_session(config)


def test_session_rejects_bad_efficiency():
    config = SessionConfig(protocol="ekert-wigner", channel="single-pol", n_pairs=10)
    with pytest.raises(ValueError):
        wigner_session(config, efficiency=0.0)


def test_undetected_sweep_rows():
    rows = undetected_sweep(DEFAULT_SETTINGS, [0.0, 0.05, 0.1], 0.1, 1)
    assert [r["eta"] for r in rows] == [0.0, 0.05, 0.1]
    assert rows[0]["detected"] is False
    assert rows[-1]["detected"] is True  # 0.1 > 1/15 threshold
    floor = 0.1 * 0.125
    assert rows[0]["stderr"] == pytest.approx(floor)


def test_nonmaximal_source_breaks_the_violation():
    params = SourceParams(pol_weight_h=1.0)
    p = coincidence_probability(0.0, math.pi / 6, params=params)
    # product state: no entanglement, different correlation law
    assert p != pytest.approx(0.5 * math.sin(math.pi / 6) ** 2, abs=1e-3)
