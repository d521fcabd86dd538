"""Session engine: sifting, determinism, QBER under each attack, logging."""
import math

import numpy as np
import pytest

from qkd2e.eavesdrop import EavesdropConfig
from qkd2e.protocol import (
    SessionConfig,
    SessionLog,
    SiftedKey,
    run_session,
    session_summary,
    sift,
    sift_for_xor,
    xor_key,
)

SEED = 90125


def run(channel="double", strategy="none", n=20_000, eta=1.0, seed=SEED, **eve_kw):
    config = SessionConfig(
        protocol="bb84x2",
        channel=channel,
        n_pairs=n,
        eve=EavesdropConfig(strategy=strategy, eta=eta, **eve_kw),
        seed=seed,
    )
    return run_session(config)


def binom_tol(p, n):
    return 4 * math.sqrt(p * (1 - p) / n)


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(protocol="b92")
    with pytest.raises(ValueError):
        SessionConfig(channel="triple")
    with pytest.raises(ValueError):
        SessionConfig(n_pairs=0)
    with pytest.raises(ValueError):
        SessionConfig(seed=-1)
    with pytest.raises(ValueError):
        SessionConfig(
            channel="double",
            eve=EavesdropConfig(strategy="so4", rotation_dim=2),
        )


def test_ekert_wigner_not_served_by_run_session():
    with pytest.raises(ValueError, match="wigner"):
        run_session(SessionConfig(protocol="ekert-wigner"))


def test_no_eve_qber_exactly_zero():
    log = run(n=50_000)
    keys = sift(log)
    assert keys["pol"].qber == 0.0
    assert keys["phase"].qber == 0.0
    assert session_summary(log).qber_key == 0.0


def test_no_eve_single_channels_also_clean():
    for channel in ("single-pol", "single-phase"):
        log = run(channel=channel, n=20_000)
        summary = session_summary(log)
        assert summary.qber_key == 0.0
        assert set(summary.qber_per_dof) == {log.keyed[0]}


def test_double_channel_retention_one_quarter():
    log = run(n=80_000)
    summary = session_summary(log)
    assert abs(summary.retention - 0.25) < binom_tol(0.25, 80_000)


def test_single_channel_retention_one_half():
    log = run(channel="single-pol", n=80_000)
    assert abs(session_summary(log).retention - 0.5) < binom_tol(0.5, 80_000)


def test_basis_choices_uniform():
    log = run(n=40_000)
    for col in range(2):
        for arr in (log.a_choice, log.b_choice):
            frac = arr[:, col].mean()
            assert abs(frac - 0.5) < binom_tol(0.5, 40_000)


def test_seed_determinism_byte_exact():
    a = run(strategy="breidbart", n=5_000)
    b = run(strategy="breidbart", n=5_000)
    for name in ("a_choice", "b_choice", "a_out", "b_out", "eve_mask", "eve_out"):
        assert np.array_equal(getattr(a, name), getattr(b, name)), name


def test_different_seeds_differ():
    a = run(n=2_000, seed=1)
    b = run(n=2_000, seed=2)
    assert not np.array_equal(a.a_out, b.a_out)


def test_fixed_basis_attack_qber():
    """Intercepting every pair in a static legitimate basis: per-DOF 1/4,
    XOR key 3/8."""
    log = run(strategy="fixed-basis", n=100_000)
    keys = sift(log)
    assert abs(keys["pol"].qber - 0.25) < binom_tol(0.25, keys["pol"].length)
    assert abs(keys["phase"].qber - 0.25) < binom_tol(0.25, keys["phase"].length)
    summary = session_summary(log)
    assert abs(summary.qber_key - 0.375) < binom_tol(0.375, summary.n_sifted)


def test_fixed_basis_matched_rounds_are_transparent():
    """Rounds where everyone used Eve's basis carry no error at all."""
    log = run(strategy="fixed-basis", n=20_000, fixed_choice=(0, 0))
    matched = (
        (log.a_choice[:, 0] == 0) & (log.a_choice[:, 1] == 0)
        & (log.b_choice[:, 0] == 0) & (log.b_choice[:, 1] == 0)
    )
    assert matched.sum() > 500
    assert np.array_equal(log.a_out[matched], log.b_out[matched])


def test_breidbart_attack_qber():
    log = run(strategy="breidbart", n=100_000)
    keys = sift(log)
    for dof in ("pol", "phase"):
        assert abs(keys[dof].qber - 0.25) < binom_tol(0.25, keys[dof].length)
    summary = session_summary(log)
    assert abs(summary.qber_key - 0.375) < binom_tol(0.375, summary.n_sifted)


def test_so4_dim4_attack_qber():
    """Whole-photon Haar rotation: single channel 1/3, double channel 5/12."""
    log_s = run(channel="single-pol", strategy="so4", n=60_000)
    summary_s = session_summary(log_s)
    assert abs(summary_s.qber_key - 1 / 3) < binom_tol(1 / 3, summary_s.n_sifted)

    log_d = run(strategy="so4", n=60_000)
    summary_d = session_summary(log_d)
    assert abs(summary_d.qber_key - 5 / 12) < binom_tol(5 / 12, summary_d.n_sifted)


def test_so4_dim2_attack_qber():
    """Keyed-qubit-only rotation: 1/4 on polarization, 3/8 on phase."""
    log_p = run(channel="single-pol", strategy="so4", n=60_000, rotation_dim=2)
    s_p = session_summary(log_p)
    assert abs(s_p.qber_key - 0.25) < binom_tol(0.25, s_p.n_sifted)

    log_f = run(channel="single-phase", strategy="so4", n=60_000, rotation_dim=2)
    s_f = session_summary(log_f)
    assert abs(s_f.qber_key - 0.375) < binom_tol(0.375, s_f.n_sifted)


def test_partial_interception_scales_qber():
    log = run(strategy="fixed-basis", n=100_000, eta=0.5)
    summary = session_summary(log)
    assert abs(summary.eve_fraction - 0.5) < binom_tol(0.5, 100_000)
    keys = sift(log)
    assert abs(keys["pol"].qber - 0.125) < binom_tol(0.125, keys["pol"].length)


def test_no_signaling_to_alice():
    """Eve acts on Bob's photon only; Alice's marginals stay uniform."""
    log = run(strategy="breidbart", n=100_000)
    for col in range(2):
        frac = log.a_out[:, col].mean()
        assert abs(frac - 0.5) < binom_tol(0.5, 100_000)


def test_sift_for_xor_alignment_and_xor_key():
    log = run(strategy="fixed-basis", n=30_000)
    keys = sift_for_xor(log)
    assert np.array_equal(keys["pol"].indices, keys["phase"].indices)
    combined = xor_key(keys["pol"], keys["phase"])
    expected = keys["pol"].bits_alice ^ keys["phase"].bits_alice
    assert np.array_equal(combined.bits_alice, expected)
    assert combined.qber == session_summary(log).qber_key


def test_xor_key_rejects_misaligned_indices():
    a = SiftedKey.from_bits(np.array([0, 1, 2, 3]), np.array([1, 0, 1, 0]),
                            np.array([1, 0, 1, 0]))
    b = SiftedKey.from_bits(np.array([0, 1, 2, 4]), np.array([0, 1, 1, 0]),
                            np.array([0, 1, 1, 0]))
    with pytest.raises(ValueError, match="aligned"):
        xor_key(a, b)


def test_xor_key_worked_example():
    idx = np.arange(4)
    pol = SiftedKey.from_bits(idx, np.array([1, 0, 1, 0]), np.array([1, 0, 1, 0]))
    phase = SiftedKey.from_bits(idx, np.array([0, 1, 1, 0]), np.array([0, 1, 1, 0]))
    key = xor_key(pol, phase)
    assert key.bits_alice.tolist() == [1, 1, 0, 0]
    assert key.qber == 0.0


def test_sifted_key_from_bits_validates_lengths():
    with pytest.raises(ValueError):
        SiftedKey.from_bits(np.array([0]), np.array([1, 0]), np.array([1]))


def test_sifted_key_empty_has_zero_qber():
    key = SiftedKey.from_bits(np.array([], dtype=int), np.array([], dtype=int),
                              np.array([], dtype=int))
    assert key.length == 0 and key.qber == 0.0


def test_jsonl_roundtrip(tmp_path):
    log = run(strategy="breidbart", n=500)
    path = tmp_path / "pairs.jsonl"
    log.to_jsonl(path)
    back = SessionLog.from_jsonl(path, protocol=log.protocol,
                                 strategy=log.strategy, seed=log.seed)
    assert back.keyed == log.keyed
    assert back.channel == log.channel
    for name in ("a_choice", "b_choice", "a_out", "b_out", "eve_mask", "eve_out"):
        assert np.array_equal(getattr(back, name), getattr(log, name)), name


def test_jsonl_roundtrip_joint_eve(tmp_path):
    log = run(strategy="so4", n=300)
    path = tmp_path / "pairs.jsonl"
    log.to_jsonl(path)
    back = SessionLog.from_jsonl(path)
    assert back.eve_joint
    assert np.array_equal(back.eve_out[:, 0], log.eve_out[:, 0])


def test_record_fields_exact():
    log = run(strategy="fixed-basis", n=50)
    rec = next(log.records())
    assert set(rec) == {"idx", "a_basis", "b_basis", "a_out", "b_out",
                        "eve", "eve_out", "sifted"}
    assert set(rec["a_basis"]) == {"pol", "phase"}


def test_eve_outcna_for_quiet_rounds():
    log = run(strategy="fixed-basis", n=2_000, eta=0.3)
    for rec in log.records():
        if not rec["eve"]:
            assert rec["eve_out"] is None
        else:
            assert rec["eve_out"] is not None


def test_summary_retention_matches_sift():
    log = run(n=10_000)
    summary = session_summary(log)
    xor_len = sift_for_xor(log)["pol"].length
    assert summary.n_sifted == xor_len
    assert summary.retention == pytest.approx(xor_len / 10_000)


def test_injected_flips_show_up_in_qber():
    """QBER composition sanity: flipping a known fraction of Bob's sifted
    pol bits moves the measured rate by exactly that amount."""
    log = run(n=40_000)
    keys = sift(log)
    assert keys["pol"].qber == 0.0
    idx = keys["pol"].indices
    flip = idx[::10]
    log.b_out[flip, 0] ^= 1
    assert sift(log)["pol"].qber == pytest.approx(len(flip) / len(idx))
