"""Wigner three-setting inequality: analytics, interception shift, sessions.

The inequality W = p(chi,psi) + p(psi,omega) - p(chi,omega) >= 0 holds for
every local deterministic model consistent with the observed equal-setting
correlations; the entangled pair reaches W = -1/8 at (0, 30, 60) degrees.
Coincidence probabilities are always computed from the state by the Born
rule, never from a closed-form sine; the interception slope and the
undetectable-fraction thresholds inherit from that chain.

Both key degrees of freedom support the same geometry. Polarization
analyzers take the setting angle directly; phase analyzers take a doubled
angle (Alice pump-conjugate), which maps the interferometer correlations
onto the identical p(a,b) = sin^2(a-b)/2 form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .protocol import SessionConfig
from .source import SourceParams, phase_basis, pol_basis, pol_pair_state, timebin_pair_state

PAIR_NAMES = ("chi_psi", "psi_omega", "chi_omega")
KEY_NAME = "key"
# (alice setting index, bob setting index): alice draws {chi, psi}, bob {psi, omega}
_PAIR_INDEX = {"chi_psi": (0, 0), "psi_omega": (1, 1), "chi_omega": (0, 1), "key": (1, 0)}
DEFAULT_PATH_EFFICIENCY = 0.05


@dataclass(frozen=True)
class WignerSettings:
    """Analyzer angles in radians; psi doubles as the shared key basis."""

    chi: float = 0.0
    psi: float = math.pi / 6
    omega: float = math.pi / 3

    def __post_init__(self):
        for v in (self.chi, self.psi, self.omega):
            if not math.isfinite(v):
                raise ValueError("analyzer angles must be finite")

    @classmethod
    def from_degrees(cls, chi: float, psi: float, omega: float) -> "WignerSettings":
        return cls(math.radians(chi), math.radians(psi), math.radians(omega))

    def alice_angles(self) -> tuple[float, float]:
        return (self.chi, self.psi)

    def bob_angles(self) -> tuple[float, float]:
        return (self.psi, self.omega)


DEFAULT_SETTINGS = WignerSettings()


def _sector(dof: str, params: SourceParams) -> np.ndarray:
    """Two-qubit amplitude matrix (Alice row, Bob column) for one DOF."""
    if dof == "pol":
        return pol_pair_state(params).amps.reshape(2, 2)
    if dof == "phase":
        return timebin_pair_state(params).amps.reshape(2, 2)
    raise ValueError(f"unknown DOF {dof!r}")


def _analyzer_rows(dof: str, setting: float, side: str, pump_phase: float) -> np.ndarray:
    """Port vectors (rows: +, -) realizing Wigner angle ``setting``."""
    if dof == "pol":
        return pol_basis(setting).vectors
    if side == "alice":
        return phase_basis(pump_phase - 2.0 * setting).vectors
    return phase_basis(2.0 * setting).vectors


def _joint_distribution(
    dof: str,
    a_setting: float,
    b_setting: float,
    eve_setting: float | None,
    params: SourceParams,
) -> np.ndarray:
    """Exact outcome probabilities over (Alice port, Bob port)."""
    M = _sector(dof, params)
    ra = _analyzer_rows(dof, a_setting, "alice", params.pump_phase)
    rb = _analyzer_rows(dof, b_setting, "bob", params.pump_phase)
    if eve_setting is None:
        amps = ra.conj() @ M @ rb.conj().T
        return np.abs(amps) ** 2
    re = _analyzer_rows(dof, eve_setting, "bob", params.pump_phase)
    probs = np.zeros((2, 2))
    for k in range(2):
        resid = M @ re[k].conj()  # Alice residual, unnormalized (norm^2 = p_k)
        pa = np.abs(ra.conj() @ resid) ** 2
        pb = np.abs(rb.conj() @ re[k]) ** 2
        probs += np.outer(pa, pb)
    return probs


def coincidence_probability(
    a: float,
    b: float,
    intercepted_in_basis: float | None = None,
    dof: str = "pol",
    params: SourceParams | None = None,
) -> float:
    """P(Alice fires '+' at setting a AND Bob fires '-' at setting b).

    With ``intercepted_in_basis`` set, the probability is taken over the
    post-interception ensemble: an eavesdropper measured Bob's qubit at that
    Wigner angle and resent the eigenstate she found.
    """
    params = params or SourceParams()
    return float(_joint_distribution(dof, a, b, intercepted_in_basis, params)[0, 1])


def wigner_value(settings: WignerSettings, p_function=None) -> float:
    """W = p(chi,psi) + p(psi,omega) - p(chi,omega)."""
    p = p_function or coincidence_probability
    return (
        p(settings.chi, settings.psi)
        + p(settings.psi, settings.omega)
        - p(settings.chi, settings.omega)
    )


def intercepted_wigner(
    settings: WignerSettings,
    eta: float,
    eve_basis_angle: float | None = None,
    dof: str = "pol",
    params: SourceParams | None = None,
) -> float:
    """W under partial interception: (1-eta) W_quantum + eta W_intercepted."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    angle = settings.psi if eve_basis_angle is None else eve_basis_angle
    params = params or SourceParams()

    def p_quantum(x, y):
        return coincidence_probability(x, y, dof=dof, params=params)

    def p_eve(x, y):
        return coincidence_probability(x, y, intercepted_in_basis=angle, dof=dof, params=params)

    w_q = wigner_value(settings, p_quantum)
    w_i = wigner_value(settings, p_eve)
    return (1.0 - eta) * w_q + eta * w_i


def interception_slope(
    settings: WignerSettings = DEFAULT_SETTINGS,
    eve_basis_angle: float | None = None,
    dof: str = "pol",
    params: SourceParams | None = None,
) -> float:
    """dW/d(eta): the full-interception shift, derived from the Born chain."""
    w_q = intercepted_wigner(settings, 0.0, eve_basis_angle, dof, params)
    w_i = intercepted_wigner(settings, 1.0, eve_basis_angle, dof, params)
    return w_i - w_q


def max_undetected_fraction(
    rel_uncertainty: float,
    n_independent_tests: int,
    settings: WignerSettings = DEFAULT_SETTINGS,
    eve_basis_angle: float | None = None,
) -> float:
    """Largest eta whose W shift hides inside the measurement uncertainty.

    The detection floor is rel_uncertainty * |W_quantum|, tightened by
    sqrt(n) when n independent inequality tests are available (two on the
    double channel: polarization and phase).
    """
    if rel_uncertainty <= 0:
        raise ValueError("rel_uncertainty must be positive")
    if n_independent_tests not in (1, 2):
        raise ValueError("n_independent_tests must be 1 or 2")
    w_q = wigner_value(settings)
    slope = interception_slope(settings, eve_basis_angle)
    if abs(slope) < 1e-12:
        raise ValueError("interception at this basis leaves W unchanged")
    return rel_uncertainty * abs(w_q) / (abs(slope) * math.sqrt(n_independent_tests))


# ---------------------------------------------------------------------------
# local-hidden-variable survey

@dataclass(frozen=True)
class LhvCase:
    """One deterministic assignment of +/-1 outcomes to all six settings."""

    alice: tuple[int, int, int]  # outcomes at (chi, psi, omega)
    bob: tuple[int, int, int]
    admissible: bool  # consistent with perfect equal-setting correlations
    w: float


@dataclass(frozen=True)
class LhvSurvey:
    cases: tuple[LhvCase, ...]

    @property
    def n_cases(self) -> int:
        return len(self.cases)

    @property
    def admissible(self) -> tuple[LhvCase, ...]:
        return tuple(c for c in self.cases if c.admissible)

    @property
    def min_admissible_w(self) -> float:
        return min(c.w for c in self.admissible)

    @property
    def all_admissible_nonnegative(self) -> bool:
        return self.min_admissible_w >= 0.0


def lhv_survey(settings: WignerSettings = DEFAULT_SETTINGS) -> LhvSurvey:
    """Exhaustive deterministic-model check of the inequality, 64 cases.

    Each case fixes Alice's and Bob's outcomes at all three settings. The
    observed physics (equal settings always agree) admits only assignments
    with bob == alice; those provably satisfy W >= 0. Inadmissible cases are
    retained with their W so the necessity of the constraint is visible:
    unconstrained assignments can reach W = -1.
    """
    cases = []
    for a_bits in range(8):
        alice = tuple(1 if (a_bits >> j) & 1 else -1 for j in range(3))
        for b_bits in range(8):
            bob = tuple(1 if (b_bits >> j) & 1 else -1 for j in range(3))

            def p(i, j):
                return 1.0 if alice[i] == 1 and bob[j] == -1 else 0.0

            w = p(0, 1) + p(1, 2) - p(0, 2)
            cases.append(LhvCase(alice, bob, alice == bob, w))
    return LhvSurvey(tuple(cases))


# ---------------------------------------------------------------------------
# Monte Carlo sessions

@dataclass
class WignerRunData:
    """Coincidence statistics from one session, one DOF.

    counts maps the setting-pair name to (coincidences, trials); trials are
    rounds with that setting pair where both photons were detected, and a
    coincidence means Alice's '+' port fired together with Bob's '-' port.
    """

    dof: str
    settings: WignerSettings
    efficiency: float
    eta: float
    n_pairs: int
    counts: dict[str, tuple[int, int]] = field(default_factory=dict)
    alice_key_bits: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int8))
    bob_key_bits: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int8))

    def __post_init__(self):
        for name, (c, t) in self.counts.items():
            if c > t:
                raise ValueError(f"coincidences exceed trials at {name}")

    def key_qber(self) -> float:
        if len(self.alice_key_bits) == 0:
            return 0.0
        return float(np.mean(self.alice_key_bits != self.bob_key_bits))

    def to_dict(self) -> dict:
        return {
            "dof": self.dof,
            "angles_deg": [
                math.degrees(self.settings.chi),
                math.degrees(self.settings.psi),
                math.degrees(self.settings.omega),
            ],
            "efficiency": self.efficiency,
            "eta": self.eta,
            "n_pairs": self.n_pairs,
            "counts": {k: list(v) for k, v in self.counts.items()},
            "key_length": int(len(self.alice_key_bits)),
            "key_qber": self.key_qber(),
        }


def estimate_wigner(data: WignerRunData) -> tuple[float, float]:
    """Empirical W and its standard error by binomial propagation."""
    p_hat, var = {}, 0.0
    for name in PAIR_NAMES:
        c, t = data.counts.get(name, (0, 0))
        if t == 0:
            raise ValueError(f"no trials recorded for setting pair {name}")
        p_hat[name] = c / t
        var += p_hat[name] * (1.0 - p_hat[name]) / t
    w = p_hat["chi_psi"] + p_hat["psi_omega"] - p_hat["chi_omega"]
    return w, math.sqrt(var)


def _session_dofs(channel: str) -> tuple[str, ...]:
    return {
        "single-pol": ("pol",),
        "single-phase": ("phase",),
        "double": ("pol", "phase"),
    }[channel]


def wigner_session(
    config: SessionConfig,
    settings: WignerSettings = DEFAULT_SETTINGS,
    efficiency: float = DEFAULT_PATH_EFFICIENCY,
    eve_basis_angle: float | None = None,
) -> dict[str, WignerRunData]:
    """Run an inequality-monitoring session; one WignerRunData per DOF.

    Alice draws settings from {chi, psi}, Bob from {psi, omega}; the shared
    psi rounds yield key bits, the other combinations feed the inequality.
    Interception (probability config.eve.eta unless strategy is none)
    measures Bob's qubit at the key basis and resends. Detection efficiency
    thins each photon path independently after outcome generation.
    """
    if config.protocol != "ekert-wigner":
        raise ValueError("wigner_session drives the ekert-wigner protocol")
    if not 0.0 < efficiency <= 1.0:
        raise ValueError("efficiency must lie in (0, 1]")
    dofs = _session_dofs(config.channel)
    eta = 0.0 if config.eve.strategy == "none" else config.eve.eta
    eve_angle = settings.psi if eve_basis_angle is None else eve_basis_angle
    n = config.n_pairs
    params = config.source

    rng = np.random.Generator(np.random.Philox(key=config.seed))
    fields = rng.random((n, 9))
    # columns: 0/1 alice setting per DOF, 2/3 bob setting per DOF,
    # 4 interception gate, 5/6 outcome draw per DOF, 7/8 detection per path
    a_set = {d: (fields[:, i] >= 0.5).astype(np.int8) for i, d in enumerate(dofs)}
    b_set = {d: (fields[:, 2 + i] >= 0.5).astype(np.int8) for i, d in enumerate(dofs)}
    intercepted = fields[:, 4] < eta
    detected = (fields[:, 7] < efficiency) & (fields[:, 8] < efficiency)

    alice_angles = settings.alice_angles()
    bob_angles = settings.bob_angles()
    out = {}
    for i, dof in enumerate(dofs):
        tables = {}
        for ia in range(2):
            for ib in range(2):
                for e in range(2):
                    probs = _joint_distribution(
                        dof,
                        alice_angles[ia],
                        bob_angles[ib],
                        eve_angle if e else None,
                        params,
                    ).reshape(4)
                    tables[(ia, ib, e)] = np.cumsum(probs / probs.sum())
        o_a = np.zeros(n, dtype=np.int8)
        o_b = np.zeros(n, dtype=np.int8)
        draws = fields[:, 5 + i]
        for (ia, ib, e), cdf in tables.items():
            mask = (a_set[dof] == ia) & (b_set[dof] == ib) & (intercepted == bool(e))
            if not mask.any():
                continue
            hit = np.minimum(np.searchsorted(cdf, draws[mask], side="right"), 3)
            o_a[mask] = hit >> 1
            o_b[mask] = hit & 1

        counts = {}
        for name, (ia, ib) in _PAIR_INDEX.items():
            mask = (a_set[dof] == ia) & (b_set[dof] == ib) & detected
            if name == KEY_NAME:
                key_mask = mask
                continue
            trials = int(mask.sum())
            coinc = int(((o_a == 0) & (o_b == 1) & mask).sum())
            counts[name] = (coinc, trials)
        out[dof] = WignerRunData(
            dof=dof,
            settings=settings,
            efficiency=efficiency,
            eta=eta,
            n_pairs=n,
            counts=counts,
            alice_key_bits=o_a[key_mask].copy(),
            bob_key_bits=o_b[key_mask].copy(),
        )
    return out


def undetected_sweep(
    settings: WignerSettings,
    etas,
    rel_uncertainty: float,
    n_independent_tests: int,
    eve_basis_angle: float | None = None,
) -> list[dict]:
    """Analytic W(eta) rows with the detection verdict at each eta."""
    w_q = wigner_value(settings)
    floor = rel_uncertainty * abs(w_q) / math.sqrt(n_independent_tests)
    rows = []
    for eta in etas:
        w = intercepted_wigner(settings, float(eta), eve_basis_angle)
        rows.append(
            {
                "eta": float(eta),
                "W": w,
                "stderr": floor,
                "detected": bool(abs(w - w_q) > floor),
            }
        )
    return rows
