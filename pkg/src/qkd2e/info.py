"""Closed-form information analytics for intercept-resend attacks.

Two error accountings coexist deliberately. The cascade model composes
Alice->Eve and Eve->Bob as independent binary symmetric channels, giving
3/8 per DOF for the fixed-basis attack; the physical model tracks the
actual intercept-resend correlations, giving 1/4. Published figures mix
the two, so every result row is labeled with its model.

Information is always the binary-symmetric-channel capacity expression
I(p) = 1 + p log2 p + (1-p) log2 (1-p), log base 2, with 0 log 0 = 0.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

STRATEGIES = ("fixed-basis", "breidbart")
CHANNELS = ("single", "double")
MODELS = ("cascade", "physical")

# Upper bounds on leaked information after error correction, per intercepted
# fraction and key-reduction factor. Cited constants, not re-derived here.
HUTTNER_EKERT_COEFFICIENTS = {"single": 0.299, "double": 0.118}

ANALYTICS_CSV_COLUMNS = ("strategy", "channel", "model", "q1", "p2", "I_AE", "q_AB", "I_AB")


def bsc_information(p: float) -> float:
    """Information in bits carried by a binary symmetric channel.

    ``p`` is the probability of correct transmission; the function is
    symmetric under p <-> 1-p (it is folded onto [0, 1/2] before
    evaluation, so the symmetry holds bitwise).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    q = 0.5 - abs(p - 0.5)
    if q == 0.0:
        return 1.0
    return 1.0 + q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q)


def cascade_error(e1: float, e2: float) -> float:
    """Error rate of two independent binary symmetric channels in series."""
    for e in (e1, e2):
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"error rate must lie in [0, 1], got {e!r}")
    return e1 + e2 - 2.0 * e1 * e2

def xor_error(e: float) -> float:
    """Error rate of the XOR of two bits that independently err at rate e.

    Equals 2e(1-e), the complement of e^2 + (1-e)^2. Shares its
    implementation with cascade_error so the algebraic identity
    cascade_error(e, e) == xor_error(e) holds bitwise.
    """
    return cascade_error(e, e)


@dataclass(frozen=True)
class ChannelInfoReport:
    """A transmission probability and the information it carries."""

    correct_prob: float
    information: float

    def __post_init__(self):
        if not 0.0 <= self.correct_prob <= 1.0:
            raise ValueError("correct_prob must lie in [0, 1]")

    @classmethod
    def from_probability(cls, p: float) -> "ChannelInfoReport":
        return cls(p, bsc_information(p))

    def to_dict(self) -> dict:
        return {"correct_prob": self.correct_prob, "information": self.information}


@dataclass(frozen=True)
class ErrorCorrectionParams:
    """Intercepted fraction and key-length reduction factor."""

    eta: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")


def huttner_ekert_bound(
    params: ErrorCorrectionParams, channel: str, coefficients: dict | None = None
) -> float:
    """Upper bound on Eve's post-error-correction information.

    Linear in both the intercepted fraction and the key-reduction factor;
    the per-channel coefficients are cited constants but overridable.
    """
    coeffs = HUTTNER_EKERT_COEFFICIENTS if coefficients is None else coefficients
    if channel not in coeffs:
        raise ValueError(f"unknown channel {channel!r}")
    return coeffs[channel] * params.eta * params.alpha


@dataclass(frozen=True)
class AttackAnalytics:
    """Closed-form figures for one attack on one channel under one model.

    eve_bit_error: Eve's per-basis probability of reading the wrong bit.
    eve_correct_prob: probability her extracted key bit is correct (XOR
        composition on the double channel).
    eve_information: bits/key-bit she gains (BSC formula).
    induced_qber: the Alice-Bob error rate her presence creates.
    alice_bob_information: bits/key-bit surviving on the A-B channel.
    """

    strategy: str
    channel: str
    model: str
    eve_bit_error: float
    eve_correct_prob: float
    eve_information: float
    induced_qber: float
    alice_bob_information: float

    def to_csv_row(self) -> dict:
        return {
            "strategy": self.strategy,
            "channel": self.channel,
            "model": self.model,
            "q1": repr(self.eve_bit_error),
            "p2": repr(self.eve_correct_prob),
            "I_AE": repr(self.eve_information),
            "q_AB": repr(self.induced_qber),
            "I_AB": repr(self.alice_bob_information),
        }

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "channel": self.channel,
            "model": self.model,
            "q1": self.eve_bit_error,
            "p2": self.eve_correct_prob,
            "I_AE": self.eve_information,
            "q_AB": self.induced_qber,
            "I_AB": self.alice_bob_information,
        }


def strategy_analytics(strategy: str, channel: str, model: str) -> AttackAnalytics:
    """Full analytic table entry for a basis-measuring attack.

    The random-rotation attack has no closed form (Monte Carlo only) and is
    rejected here.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"no closed form for strategy {strategy!r}")
    if channel not in CHANNELS:
        raise ValueError(f"unknown channel {channel!r}")
    if model not in MODELS:
        raise ValueError(f"unknown error model {model!r}")

    if strategy == "fixed-basis":
        q1 = 0.25
        per_dof = cascade_error(q1, q1) if model == "cascade" else q1
    else:
        # Breidbart: q1 = (2 - sqrt(2))/4; both error accountings collapse
        # to exactly 1/4 per DOF because 2 q1 (1 - q1) simplifies to 1/4.
        q1 = (2.0 - math.sqrt(2.0)) / 4.0
        per_dof = 0.25

    if channel == "single":
        p2 = 1.0 - q1
        q_ab = per_dof
    else:
        p2 = 0.75 if strategy == "breidbart" else 1.0 - xor_error(q1)
        q_ab = xor_error(per_dof)

    return AttackAnalytics(
        strategy=strategy,
        channel=channel,
        model=model,
        eve_bit_error=q1,
        eve_correct_prob=p2,
        eve_information=bsc_information(p2),
        induced_qber=q_ab,
        alice_bob_information=bsc_information(1.0 - q_ab),
    )


def analytics_table(
    strategies=STRATEGIES, channels=CHANNELS, models=MODELS
) -> list[AttackAnalytics]:
    """Every strategy x channel x model combination, in stable order."""
    return [
        strategy_analytics(s, c, m)
        for s in strategies
        for c in channels
        for m in models
    ]


def write_analytics_csv(path, rows: list[AttackAnalytics]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=ANALYTICS_CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_csv_row())


def equal_info_error_ratio(single: AttackAnalytics, double: AttackAnalytics) -> float:
    """Induced-error ratio when Eve tunes interception for equal information.

    She fixes a target information amount; the interception fractions satisfy
    eta_double/eta_single = I_single/I_double, and the observable error
    ratio is (q_double * eta_double) / (q_single * eta_single).
    """
    if double.eve_information == 0.0:
        raise ValueError("double-channel information is zero; ratio undefined")
    eta_ratio = single.eve_information / double.eve_information
    return (double.induced_qber / single.induced_qber) * eta_ratio


def equal_info_ratio_rows() -> list[dict]:
    """The headline equal-information ratios with their accounting labels."""
    fb_sing_phys = strategy_analytics("fixed-basis", "single", "physical")
    fb_sing_casc = strategy_analytics("fixed-basis", "single", "cascade")
    fb_dbl_phys = strategy_analytics("fixed-basis", "double", "physical")
    fb_dbl_casc = strategy_analytics("fixed-basis", "double", "cascade")
    br_sing = strategy_analytics("breidbart", "single", "physical")
    br_dbl = strategy_analytics("breidbart", "double", "physical")
    return [
        {
            "label": "fixed-basis, cascade double vs physical single (mixed accounting)",
            "value": equal_info_error_ratio(fb_sing_phys, fb_dbl_casc),
            "reference": 7.7,
        },
        {
            "label": "fixed-basis, cascade both channels",
            "value": equal_info_error_ratio(fb_sing_casc, fb_dbl_casc),
            "reference": None,
        },
        {
            "label": "fixed-basis, physical both channels",
            "value": equal_info_error_ratio(fb_sing_phys, fb_dbl_phys),
            "reference": None,
        },
        {
            "label": "breidbart, physical both channels",
            "value": equal_info_error_ratio(br_sing, br_dbl),
            "reference": 19.0 / 6.0,
        },
    ]


def empirical_mutual_information(x, y) -> float:
    """Plug-in mutual information (bits) between two integer-valued arrays."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d arrays of equal length")
    if len(x) == 0:
        return 0.0
    nx, ny = int(x.max()) + 1, int(y.max()) + 1
    joint = np.bincount(x * ny + y, minlength=nx * ny).reshape(nx, ny) / len(x)
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log2(joint[mask] / (px @ py)[mask])))
