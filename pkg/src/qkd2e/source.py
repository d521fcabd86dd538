"""Doubly entangled photon-pair source and analyzer bases.

The source pumps two crystals through an unbalanced interferometer, so the
pair it emits is entangled in polarization (H/V) and, through the pump's
short/long path superposition, in time-bin phase (s/l). With the default
balanced weights the emitted state is

    (1/2) [ |sH,sH> + |sV,sV> + e^{i phi} ( |lH,lH> + |lV,lV> ) ]

which factorizes into a polarization Bell pair times a time-bin Bell pair.
Setting one weight to 1 turns the corresponding factor into a product state,
which is how the single-entanglement channels are built.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, isclose, pi, sin, sqrt

import numpy as np

from .quantum import MeasurementBasis, StateVector

TIMEBIN_LABELS = ("s", "l")
POL_LABELS = ("H", "V")
PHOTON_LABELS = ("sH", "sV", "lH", "lV")
PAIR_LABELS = tuple(f"{a}⊗{b}" for a in PHOTON_LABELS for b in PHOTON_LABELS)

# factor axes of the 16-dim pair state, photon A slower, time-bin before pol
AXIS_A_TIMEBIN, AXIS_A_POL, AXIS_B_TIMEBIN, AXIS_B_POL = 0, 1, 2, 3

BALANCED = 1.0 / sqrt(2.0)


@dataclass(frozen=True)
class SourceParams:
    """Pump phase and (optionally non-maximal) superposition weights.

    pol_weight_h and timebin_weight_s are the amplitudes of the |HH> and
    |ss> components; the orthogonal components carry sqrt(1 - w^2). Both
    default to 1/sqrt(2) (maximal entanglement in both degrees of freedom).
    """

    pump_phase: float = 0.0
    pol_weight_h: float = BALANCED
    timebin_weight_s: float = BALANCED

    def __post_init__(self):
        for name in ("pol_weight_h", "timebin_weight_s"):
            w = getattr(self, name)
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {w!r}")


@dataclass(frozen=True)
class InterferometerSettings:
    """Analyzer phases for a time-bin coincidence measurement."""

    pump_phase: float = 0.0
    alice_phase: float = 0.0
    bob_phase: float = 0.0


@dataclass(frozen=True)
class AnalyzerSetting:
    """One party's analyzer for one degree of freedom."""

    dof: str  # "pol" or "phase"
    angle: float

    def basis(self) -> MeasurementBasis:
        if self.dof == "pol":
            return pol_basis(self.angle)
        if self.dof == "phase":
            return phase_basis(self.angle)
        raise ValueError(f"unknown degree of freedom {self.dof!r}")


def pump_superposition(pump_phase: float) -> StateVector:
    """Pump state (|s> + e^{i phi} |l>) / sqrt(2) over the two pump paths."""
    amps = np.array([1.0, np.exp(1j * pump_phase)]) / sqrt(2.0)
    return StateVector(amps, TIMEBIN_LABELS, (2,))


def biphoton_state(params: SourceParams = SourceParams()) -> StateVector:
    """Emitted pair state over the 16 labeled basis kets.

    Returns
    -------
    StateVector
        dims (2, 2, 2, 2) ordered (A time-bin, A pol, B time-bin, B pol).
    """
    w_s = params.timebin_weight_s
    w_l = sqrt(max(0.0, 1.0 - w_s * w_s))
    w_h = params.pol_weight_h
    w_v = sqrt(max(0.0, 1.0 - w_h * w_h))
    phase = np.exp(1j * params.pump_phase)

    timebin = np.zeros((2, 2), dtype=np.complex128)
    timebin[0, 0] = w_s
    timebin[1, 1] = phase * w_l
    pol = np.zeros((2, 2), dtype=np.complex128)
    pol[0, 0] = w_h
    pol[1, 1] = w_v

    # amps[a_tb, a_pol, b_tb, b_pol] = timebin[a_tb, b_tb] * pol[a_pol, b_pol]
    amps = np.einsum("ik,jl->ijkl", timebin, pol).reshape(-1)
    return StateVector(amps, PAIR_LABELS, (2, 2, 2, 2))


def timebin_pair_state(params: SourceParams = SourceParams()) -> StateVector:
    """Time-bin sector of the pair: w_s |ss> + e^{i phi} w_l |ll>."""
    w_s = params.timebin_weight_s
    w_l = sqrt(max(0.0, 1.0 - w_s * w_s))
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = w_s
    amps[3] = np.exp(1j * params.pump_phase) * w_l
    labels = tuple(f"{a}⊗{b}" for a in TIMEBIN_LABELS for b in TIMEBIN_LABELS)
    return StateVector(amps, labels, (2, 2))


def pol_pair_state(params: SourceParams = SourceParams()) -> StateVector:
    """Polarization sector of the pair: w_h |HH> + w_v |VV>."""
    w_h = params.pol_weight_h
    w_v = sqrt(max(0.0, 1.0 - w_h * w_h))
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = w_h
    amps[3] = w_v
    labels = tuple(f"{a}⊗{b}" for a in POL_LABELS for b in POL_LABELS)
    return StateVector(amps, labels, (2, 2))


def pol_basis(angle: float) -> MeasurementBasis:
    """Linear polarization basis rotated by ``angle`` from H/V."""
    vectors = np.array(
        [
            [cos(angle), sin(angle)],
            [-sin(angle), cos(angle)],
        ],
        dtype=np.complex128,
    )
    return MeasurementBasis(vectors, ("+", "-"))


def phase_basis(analyzer_phase: float) -> MeasurementBasis:
    """Time-bin interference basis (|s> +/- e^{i theta} |l>) / sqrt(2)."""
    e = np.exp(1j * analyzer_phase)
    vectors = np.array([[1.0, e], [1.0, -e]], dtype=np.complex128) / sqrt(2.0)
    return MeasurementBasis(vectors, ("+", "-"))


def basis_invariance_check(params: SourceParams = SourceParams()) -> tuple[bool, float]:
    """Check that the pair state keeps its form in the diagonal pol basis.

    Re-expresses the emitted state with both polarization factors written in
    the +/-45 degree basis and compares the resulting amplitude pattern with
    the original one. For maximal polarization entanglement the pattern is
    identical (the Bell pair is form invariant under common rotations); for
    non-maximal weights it is not.

    Returns
    -------
    (invariant, residual)
        ``invariant`` is True when the largest amplitude deviation is below
        1e-9; ``residual`` is that deviation.
    """
    state = biphoton_state(params)
    diag = pol_basis(pi / 4).vectors  # rows are the new basis vectors
    psi = state.reshaped()
    # amplitude in the rotated frame: contract each pol axis with conj(vectors)
    rotated = np.einsum("aj,bl,ijkl->iakb", diag.conj(), diag.conj(), psi)
    residual = float(np.max(np.abs(rotated.reshape(-1) - state.amps)))
    return residual <= 1e-9, residual


def franson_coincidence(settings: InterferometerSettings) -> tuple[float, float]:
    """Same/different outcome probabilities for a time-bin coincidence.

    Projects the time-bin sector onto the product of the two analyzer bases
    and sums the Born weights; nothing here assumes the closed-form cosine
    law (tests verify the (1 + cos(phi - tau - psi))/2 behavior against it).

    Returns
    -------
    (p_same, p_different)
    """
    state = timebin_pair_state(SourceParams(pump_phase=settings.pump_phase))
    alice = phase_basis(settings.alice_phase).vectors
    bob = phase_basis(settings.bob_phase).vectors
    psi = state.reshaped()
    amps = np.einsum("ai,bj,ij->ab", alice.conj(), bob.conj(), psi)
    probs = np.abs(amps) ** 2
    p_same = float(probs[0, 0] + probs[1, 1])
    p_diff = float(probs[0, 1] + probs[1, 0])
    total = p_same + p_diff
    if not isclose(total, 1.0, abs_tol=1e-9):
        raise ValueError(f"coincidence probabilities sum to {total!r}")
    return p_same, p_diff
