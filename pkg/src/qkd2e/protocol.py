"""Seeded key-distribution sessions over the doubly entangled pair source.

Rather than collapsing a 16-dimensional state pair by pair, the engine
enumerates the exact joint outcome distribution once for every combination
of (Alice basis, Bob basis, eavesdropper action) and then draws all pair
outcomes with vectorized inverse-CDF lookups. Haar-random rotation attacks
admit no finite table and take a batched linear-algebra path instead. Both
paths consume one per-pair row of uniform variates laid out identically, so
a session is a pure function of its seed.

Conventions: the key degrees of freedom are polarization (bases 0 and 45
degrees on both sides) and interferometer phase (Bob 0 and pi/2; Alice uses
the pump-conjugate angles so that matched choices correlate perfectly).
Outcome index 0 is the "+" analyzer port. On the double channel the key bit
is the XOR of the polarization and phase bits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .eavesdrop import DofPort, EavesdropConfig
from .quantum import PROB_FLOOR, StateVector, haar_rotation_batch, project_subsystem
from .source import (
    AXIS_A_TIMEBIN,
    AXIS_A_POL,
    AXIS_B_TIMEBIN,
    AXIS_B_POL,
    SourceParams,
    biphoton_state,
)

PROTOCOLS = ("bb84x2", "ekert-wigner")
CHANNELS = ("single-pol", "single-phase", "double")

POL_ANGLES = (0.0, np.pi / 4)
PHASE_ANGLES = (0.0, np.pi / 2)
BASIS_LABELS = {"pol": ("pol0", "pol45"), "phase": ("ph0", "ph90")}

# Per-pair uniform-field columns. The table path spends one variate on the
# joint (Eve, Alice, Bob) outcome; the rotation path spends one on Eve's
# outcome and one on the joint Alice/Bob outcome after her collapse.
COL_A_POL, COL_A_PHASE, COL_B_POL, COL_B_PHASE = 0, 1, 2, 3
COL_EVE_GATE = 4
COL_EVE_POL = 5  # fixed-basis per-pair redraw (pol); rotation path: Alice/Bob joint draw
COL_EVE_PHASE = 6  # fixed-basis per-pair redraw (phase)
COL_OUTCOME = 7  # table path: joint outcome draw; rotation path: Eve outcome draw

ROTATION_CHUNK = 200_000


def keyed_dofs(channel: str) -> tuple[str, ...]:
    """Key-carrying degrees of freedom for a channel, polarization first."""
    if channel == "single-pol":
        return ("pol",)
    if channel == "single-phase":
        return ("phase",)
    if channel == "double":
        return ("pol", "phase")
    raise ValueError(f"unknown channel {channel!r}")


def alice_ports(channel: str, pump_phase: float = 0.0) -> tuple[DofPort, ...]:
    """Alice-side analyzer ports; her phase angles are pump-conjugate."""
    ports = []
    for name in keyed_dofs(channel):
        if name == "pol":
            ports.append(DofPort("pol", AXIS_A_POL, POL_ANGLES))
        else:
            angles = (pump_phase - PHASE_ANGLES[0], pump_phase - PHASE_ANGLES[1])
            ports.append(DofPort("phase", AXIS_A_TIMEBIN, angles))
    return tuple(ports)


def bob_ports(channel: str) -> tuple[DofPort, ...]:
    ports = []
    for name in keyed_dofs(channel):
        if name == "pol":
            ports.append(DofPort("pol", AXIS_B_POL, POL_ANGLES))
        else:
            ports.append(DofPort("phase", AXIS_B_TIMEBIN, PHASE_ANGLES))
    return tuple(ports)


@dataclass(frozen=True)
class SessionConfig:
    protocol: str = "bb84x2"
    channel: str = "double"
    n_pairs: int = 1000
    eve: EavesdropConfig = field(default_factory=EavesdropConfig)
    source: SourceParams = field(default_factory=SourceParams)
    seed: int = 0

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if (
            self.eve.strategy == "so4"
            and self.eve.resolved_rotation_dim() == 2
            and self.channel == "double"
        ):
            raise ValueError("rotation_dim=2 is defined for single channels only")


@dataclass
class SessionLog:
    """Arrays of per-pair data; one row per emitted pair.

    Choice and outcome arrays have one column per keyed degree of freedom in
    ``keyed`` order. ``eve_out`` holds per-DOF bits for basis-measuring
    strategies; for rotation attacks column 0 holds Eve's joint outcome index
    and ``eve_joint`` is set. Non-intercepted rows hold -1.
    """

    protocol: str
    channel: str
    strategy: str
    seed: int
    keyed: tuple[str, ...]
    a_choice: np.ndarray
    b_choice: np.ndarray
    a_out: np.ndarray
    b_out: np.ndarray
    eve_mask: np.ndarray
    eve_out: np.ndarray
    eve_joint: bool = False

    @property
    def n_pairs(self) -> int:
        return self.a_choice.shape[0]

    @property
    def sifted(self) -> np.ndarray:
        """True where basis choices agree on every keyed DOF."""
        return np.all(self.a_choice == self.b_choice, axis=1)

    def alice_key_bits(self) -> np.ndarray:
        """Raw per-pair key bit before sifting (XOR across keyed DOFs)."""
        bits = self.a_out[:, 0].copy()
        for j in range(1, self.a_out.shape[1]):
            bits ^= self.a_out[:, j]
        return bits

    def bob_key_bits(self) -> np.ndarray:
        bits = self.b_out[:, 0].copy()
        for j in range(1, self.b_out.shape[1]):
            bits ^= self.b_out[:, j]
        return bits

    def records(self):
        """Yield one JSON-ready dict per pair (schema: pair_record)."""
        sifted = self.sifted
        for i in range(self.n_pairs):
            a_basis = {d: int(self.a_choice[i, j]) for j, d in enumerate(self.keyed)}
            b_basis = {d: int(self.b_choice[i, j]) for j, d in enumerate(self.keyed)}
            a_out = {d: int(self.a_out[i, j]) for j, d in enumerate(self.keyed)}
            b_out = {d: int(self.b_out[i, j]) for j, d in enumerate(self.keyed)}
            if not self.eve_mask[i]:
                eve_out = None
            elif self.eve_joint:
                eve_out = {"joint": int(self.eve_out[i, 0])}
            else:
                eve_out = {d: int(self.eve_out[i, j]) for j, d in enumerate(self.keyed)}
            yield {
                "idx": i,
                "a_basis": a_basis,
                "b_basis": b_basis,
                "a_out": a_out,
                "b_out": b_out,
                "eve": bool(self.eve_mask[i]),
                "eve_out": eve_out,
                "sifted": bool(sifted[i]),
            }

    def to_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records():
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")

    @classmethod
    def from_jsonl(cls, path, protocol: str = "bb84x2", strategy: str = "", seed: int = 0):
        """Rebuild arrays from a pair-record file; metadata not stored there
        must be supplied by the caller (defaults are placeholders)."""
        with open(path, encoding="utf-8") as fh:
            recs = [json.loads(line) for line in fh if line.strip()]
        if not recs:
            raise ValueError(f"no pair records in {path}")
        keyed = tuple(k for k in ("pol", "phase") if k in recs[0]["a_basis"])
        channel = {("pol",): "single-pol", ("phase",): "single-phase"}.get(keyed, "double")
        n, d = len(recs), len(keyed)
        a_choice = np.zeros((n, d), dtype=np.int8)
        b_choice = np.zeros((n, d), dtype=np.int8)
        a_out = np.zeros((n, d), dtype=np.int8)
        b_out = np.zeros((n, d), dtype=np.int8)
        eve_mask = np.zeros(n, dtype=bool)
        eve_out = np.full((n, d), -1, dtype=np.int8)
        eve_joint = False
        for i, rec in enumerate(recs):
            for j, dof in enumerate(keyed):
                a_choice[i, j] = rec["a_basis"][dof]
                b_choice[i, j] = rec["b_basis"][dof]
                a_out[i, j] = rec["a_out"][dof]
                b_out[i, j] = rec["b_out"][dof]
            eve_mask[i] = rec["eve"]
            out = rec.get("eve_out")
            if out is not None:
                if "joint" in out:
                    eve_joint = True
                    eve_out[i, 0] = out["joint"]
                else:
                    for j, dof in enumerate(keyed):
                        eve_out[i, j] = out[dof]
        return cls(
            protocol, channel, strategy, seed, keyed,
            a_choice, b_choice, a_out, b_out, eve_mask, eve_out, eve_joint,
        )


@dataclass(frozen=True)
class SiftedKey:
    """Aligned Alice/Bob bit strings surviving basis reconciliation."""

    bits_alice: np.ndarray
    bits_bob: np.ndarray
    indices: np.ndarray
    qber: float
    length: int

    @classmethod
    def from_bits(cls, indices: np.ndarray, alice: np.ndarray, bob: np.ndarray) -> "SiftedKey":
        if len(alice) != len(bob) or len(alice) != len(indices):
            raise ValueError("bit strings and indices must have equal length")
        n = len(alice)
        qber = float(np.mean(alice != bob)) if n else 0.0
        return cls(
            np.asarray(alice, dtype=np.int8),
            np.asarray(bob, dtype=np.int8),
            np.asarray(indices, dtype=np.int64),
            qber,
            n,
        )

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "qber": self.qber,
            "bits_alice": self.bits_alice.tolist(),
            "bits_bob": self.bits_bob.tolist(),
            "indices": self.indices.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SiftedKey":
        return cls.from_bits(
            np.asarray(data["indices"]),
            np.asarray(data["bits_alice"]),
            np.asarray(data["bits_bob"]),
        )


def sift(log: SessionLog) -> dict[str, SiftedKey]:
    """Per-DOF sifted keys: keep pairs whose choices match on that DOF."""
    if log.n_pairs == 0:
        raise ValueError("empty session log")
    out = {}
    for j, dof in enumerate(log.keyed):
        mask = log.a_choice[:, j] == log.b_choice[:, j]
        idx = np.flatnonzero(mask)
        out[dof] = SiftedKey.from_bits(idx, log.a_out[idx, j], log.b_out[idx, j])
    return out


def sift_for_xor(log: SessionLog) -> dict[str, SiftedKey]:
    """Per-DOF keys restricted to pairs where EVERY keyed basis matched."""
    idx = np.flatnonzero(log.sifted)
    return {
        dof: SiftedKey.from_bits(idx, log.a_out[idx, j], log.b_out[idx, j])
        for j, dof in enumerate(log.keyed)
    }


def xor_key(pol: SiftedKey, phase: SiftedKey) -> SiftedKey:
    """Combine two per-DOF keys bitwise: key_i = pol_i XOR phase_i."""
    if not np.array_equal(pol.indices, phase.indices):
        raise ValueError("per-DOF keys are not aligned on the same pair indices")
    return SiftedKey.from_bits(
        pol.indices, pol.bits_alice ^ phase.bits_alice, pol.bits_bob ^ phase.bits_bob
    )


@dataclass(frozen=True)
class SessionSummary:
    protocol: str
    channel: str
    strategy: str
    n_pairs: int
    n_sifted: int
    retention: float
    qber_per_dof: dict[str, float]
    qber_key: float
    eve_fraction: float

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "channel": self.channel,
            "strategy": self.strategy,
            "n_pairs": self.n_pairs,
            "n_sifted": self.n_sifted,
            "retention": self.retention,
            "qber_per_dof": dict(self.qber_per_dof),
            "qber_key": self.qber_key,
            "eve_fraction": self.eve_fraction,
        }


def session_summary(log: SessionLog) -> SessionSummary:
    sifted_idx = np.flatnonzero(log.sifted)
    n_s = len(sifted_idx)
    qber_per_dof = {}
    for j, dof in enumerate(log.keyed):
        if n_s:
            qber_per_dof[dof] = float(
                np.mean(log.a_out[sifted_idx, j] != log.b_out[sifted_idx, j])
            )
        else:
            qber_per_dof[dof] = 0.0
    if n_s:
        qber_key = float(
            np.mean(log.alice_key_bits()[sifted_idx] != log.bob_key_bits()[sifted_idx])
        )
    else:
        qber_key = 0.0
    return SessionSummary(
        protocol=log.protocol,
        channel=log.channel,
        strategy=log.strategy,
        n_pairs=log.n_pairs,
        n_sifted=n_s,
        retention=n_s / log.n_pairs,
        qber_per_dof=qber_per_dof,
        qber_key=qber_key,
        eve_fraction=float(np.mean(log.eve_mask)),
    )


# ---------------------------------------------------------------------------
# engine internals

def _uniform_fields(seed: int, n: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    return rng.random((n, 8))


def _rotation_rng(seed: int) -> np.random.Generator:
    # Separate counter stream so table-path draws never shift rotations.
    return np.random.Generator(np.random.Philox(key=seed).jumped(1))


def _enumerate(state: StateVector, steps) -> list[tuple[tuple[int, ...], float]]:
    """Exact joint distribution of a chain of partial measurements.

    steps: sequence of (axes, MeasurementBasis). Returns (outcomes, prob)
    for every branch with probability above the floor.
    """
    branches = [((), 1.0, state)]
    for axes, basis in steps:
        grown = []
        for outs, p, st in branches:
            for k in range(len(basis.labels)):
                pk, collapsed = project_subsystem(st, axes, basis, k)
                if pk < PROB_FLOOR:
                    continue
                grown.append((outs + (k,), p * pk, collapsed))
        branches = grown
    return [(outs, p) for outs, p, _ in branches]


def _pack_bits(outs, start: int, count: int) -> int:
    value = 0
    for j in range(count):
        value |= outs[start + j] << j
    return value


class _TableSampler:
    """Lazy exact-distribution tables keyed by (alice, bob, eve-variant)."""

    def __init__(self, config: SessionConfig):
        self.state = biphoton_state(config.source)
        self.a_ports = alice_ports(config.channel, config.source.pump_phase)
        self.b_ports = bob_ports(config.channel)
        self.strategy = config.eve.strategy
        self.d = len(self.a_ports)
        self.tables: dict[tuple[int, int, int], tuple] = {}

    def _eve_steps(self, variant: int):
        if variant < 0:
            return []
        if self.strategy == "breidbart":
            return [((p.axis,), p.analyzer(p.midpoint_angle())) for p in self.b_ports]
        # fixed-basis: variant packs one basis bit per keyed DOF
        return [
            ((p.axis,), p.analyzer(p.angles[(variant >> j) & 1]))
            for j, p in enumerate(self.b_ports)
        ]

    def _build(self, key: tuple[int, int, int]):
        ai, bi, variant = key
        steps = self._eve_steps(variant)
        n_e = len(steps)
        steps += [
            ((p.axis,), p.analyzer(p.angles[(ai >> j) & 1]))
            for j, p in enumerate(self.a_ports)
        ]
        steps += [
            ((p.axis,), p.analyzer(p.angles[(bi >> j) & 1]))
            for j, p in enumerate(self.b_ports)
        ]
        branches = _enumerate(self.state, steps)
        probs = np.array([p for _, p in branches])
        probs /= probs.sum()
        epack = np.array(
            [_pack_bits(o, 0, n_e) if n_e else -1 for o, _ in branches], dtype=np.int16
        )
        apack = np.array([_pack_bits(o, n_e, self.d) for o, _ in branches], dtype=np.int16)
        bpack = np.array(
            [_pack_bits(o, n_e + self.d, self.d) for o, _ in branches], dtype=np.int16
        )
        return np.cumsum(probs), epack, apack, bpack

    def table(self, key: tuple[int, int, int]):
        tab = self.tables.get(key)
        if tab is None:
            tab = self.tables[key] = self._build(key)
        return tab


def _sample_tables(sampler, a_idx, b_idx, variants, draws, a_out, b_out, eve_out, rows):
    """Fill outcome arrays for ``rows`` using exact tables.

    variants[i] = -1 means no interception on that pair.
    """
    d = sampler.d
    combo = (a_idx[rows].astype(np.int64) * (1 << d) + b_idx[rows]) * 8 + (variants[rows] + 1)
    for cid in np.unique(combo):
        sel = rows[combo == cid]
        vi = int(cid % 8) - 1
        rem = cid // 8
        bi = int(rem % (1 << d))
        ai = int(rem // (1 << d))
        cdf, epack, apack, bpack = sampler.table((ai, bi, vi))
        hits = np.searchsorted(cdf, draws[sel], side="right")
        hits = np.minimum(hits, len(cdf) - 1)
        for j in range(d):
            a_out[sel, j] = (apack[hits] >> j) & 1
            b_out[sel, j] = (bpack[hits] >> j) & 1
            if vi >= 0:
                eve_out[sel, j] = (epack[hits] >> j) & 1


def _analyzer_matrix(ports: dict) -> np.ndarray:
    """Full 4-dim photon basis: keyed analyzers on their factors, identity on
    unkeyed factors. Row index is 2*(time-bin outcome) + (pol outcome), which
    on the double channel equals the packed keyed outcome (bit0 pol, bit1
    phase) because the phase analyzer acts on the time-bin factor."""
    eye = np.eye(2, dtype=np.complex128)
    tb = ports["phase"].vectors if "phase" in ports else eye
    pol = ports["pol"].vectors if "pol" in ports else eye
    return np.kron(tb, pol)


def _joint_keyed(joint4: np.ndarray, keyed: tuple[str, ...]) -> np.ndarray:
    """Reduce (n, 4, 4) composite-outcome probabilities to keyed outcomes.

    Unkeyed factors carry identity analyzers; their dummy outcomes are summed
    out. Result axis 1 is Alice's packed keyed outcome, axis 2 is Bob's.
    """
    if keyed == ("pol", "phase"):
        return joint4  # composite index already equals the packed outcome
    n = joint4.shape[0]
    big = joint4.reshape(n, 2, 2, 2, 2)  # (a_tb, a_pol, b_tb, b_pol) outcomes
    if keyed == ("pol",):
        return big.sum(axis=(1, 3))  # time-bin outcomes are the dummies
    return big.sum(axis=(2, 4))


def _rows_sample(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse-CDF sampling; rows need not be normalized."""
    cdf = np.cumsum(probs, axis=1)
    cdf /= cdf[:, -1][:, None]
    return (u[:, None] > cdf).sum(axis=1)


def _run_rotation(config, fields, a_idx, b_idx, a_out, b_out, eve_out, int_rows):
    """Haar-rotation interception, batched over intercepted pairs."""
    dim = config.eve.resolved_rotation_dim()
    keyed = keyed_dofs(config.channel)
    d = len(keyed)
    psi = biphoton_state(config.source).amps.reshape(2, 2, 2, 2)
    a_ports = {p.name: p for p in alice_ports(config.channel, config.source.pump_phase)}
    b_ports = {p.name: p for p in bob_ports(config.channel)}
    rng = _rotation_rng(config.seed)

    for lo in range(0, len(int_rows), ROTATION_CHUNK):
        rows = int_rows[lo : lo + ROTATION_CHUNK]
        m = len(rows)
        rot = haar_rotation_batch(dim, m, rng)
        take = np.arange(m)

        # Eve's collapse: one unnormalized (4, 4) Alice-by-Bob amplitude
        # matrix per pair, conditioned on her sampled outcome k.
        if dim == 4:
            M = psi.reshape(4, 4)
            resid = np.einsum("ab,nbk->nak", M, rot.conj())
            p_eve = (np.abs(resid) ** 2).sum(axis=1)  # (m, 4)
            k = _rows_sample(p_eve, fields[rows, COL_OUTCOME])
            alice_part = resid[take, :, k]  # (m, 4)
            bob_part = rot[take, :, k].astype(np.complex128)
            post = alice_part[:, :, None] * bob_part[:, None, :]
        elif keyed == ("pol",):
            # rotate only Bob's polarization qubit; time bin is a spectator
            M = psi.reshape(4, 2, 2)  # (Alice, b_tb, b_pol)
            amp = np.einsum("atp,npk->natk", M, rot.conj())
            p_eve = (np.abs(amp) ** 2).sum(axis=(1, 2))  # (m, 2)
            k = _rows_sample(p_eve, fields[rows, COL_OUTCOME])
            part = amp[take, :, :, k]  # (m, Alice, b_tb)
            vec = rot[take, :, k].astype(np.complex128)  # resent pol eigenstate
            post = np.einsum("nat,np->natp", part, vec).reshape(m, 4, 4)
        else:
            # rotate only Bob's time-bin qubit; polarization is a spectator
            M = psi.reshape(4, 2, 2)
            amp = np.einsum("atp,ntk->napk", M, rot.conj())
            p_eve = (np.abs(amp) ** 2).sum(axis=(1, 2))
            k = _rows_sample(p_eve, fields[rows, COL_OUTCOME])
            part = amp[take, :, :, k]  # (m, Alice, b_pol)
            vec = rot[take, :, k].astype(np.complex128)  # resent time-bin eigenstate
            post = np.einsum("nap,nt->natp", part, vec).reshape(m, 4, 4)

        # Alice and Bob then measure their keyed DOFs on the collapsed pair.
        for ai in range(1 << d):
            sel_a = a_idx[rows] == ai
            if not sel_a.any():
                continue
            ua = _analyzer_matrix(
                {nm: a_ports[nm].analyzer(a_ports[nm].angles[(ai >> j) & 1])
                 for j, nm in enumerate(keyed)}
            )
            for bi in range(1 << d):
                sel = sel_a & (b_idx[rows] == bi)
                if not sel.any():
                    continue
                ub = _analyzer_matrix(
                    {nm: b_ports[nm].analyzer(b_ports[nm].angles[(bi >> j) & 1])
                     for j, nm in enumerate(keyed)}
                )
                amps = np.einsum("oa,nab,pb->nop", ua.conj(), post[sel], ub.conj())
                joint = _joint_keyed(np.abs(amps) ** 2, keyed)
                picks = _rows_sample(
                    joint.reshape(joint.shape[0], -1), fields[rows[sel], COL_EVE_POL]
                )
                oa, ob = picks >> d, picks & ((1 << d) - 1)
                for j in range(d):
                    a_out[rows[sel], j] = (oa >> j) & 1
                    b_out[rows[sel], j] = (ob >> j) & 1
        eve_out[rows, 0] = k.astype(np.int8)


def run_session(config: SessionConfig) -> SessionLog:
    """Execute a full session; every draw derives from ``config.seed``."""
    if config.protocol != "bb84x2":
        raise ValueError(
            "run_session drives the bb84x2 protocol; use wigner_session for ekert-wigner"
        )
    keyed = keyed_dofs(config.channel)
    d = len(keyed)
    n = config.n_pairs
    fields = _uniform_fields(config.seed, n)

    col_a = {"pol": COL_A_POL, "phase": COL_A_PHASE}
    col_b = {"pol": COL_B_POL, "phase": COL_B_PHASE}
    a_choice = np.stack(
        [(fields[:, col_a[dof]] >= 0.5).astype(np.int8) for dof in keyed], axis=1
    )
    b_choice = np.stack(
        [(fields[:, col_b[dof]] >= 0.5).astype(np.int8) for dof in keyed], axis=1
    )
    a_idx = np.zeros(n, dtype=np.int64)
    b_idx = np.zeros(n, dtype=np.int64)
    for j in range(d):
        a_idx |= a_choice[:, j].astype(np.int64) << j
        b_idx |= b_choice[:, j].astype(np.int64) << j

    eve = config.eve
    if eve.strategy == "none":
        eve_mask = np.zeros(n, dtype=bool)
    else:
        eve_mask = fields[:, COL_EVE_GATE] < eve.eta

    a_out = np.zeros((n, d), dtype=np.int8)
    b_out = np.zeros((n, d), dtype=np.int8)
    eve_out = np.full((n, d), -1, dtype=np.int8)

    sampler = _TableSampler(config)
    variants = np.full(n, -1, dtype=np.int64)
    if eve.strategy in ("fixed-basis", "breidbart"):
        if eve.strategy == "breidbart":
            variants[eve_mask] = 0
        elif eve.random_fixed_choice:
            v = np.zeros(n, dtype=np.int64)
            for j, col in enumerate((COL_EVE_POL, COL_EVE_PHASE)[:d]):
                v |= (fields[:, col] >= 0.5).astype(np.int64) << j
            variants[eve_mask] = v[eve_mask]
        else:
            packed = 0
            for j in range(d):
                packed |= (eve.fixed_choice[j] & 1) << j
            variants[eve_mask] = packed
        rows = np.arange(n)
        _sample_tables(sampler, a_idx, b_idx, variants, fields[:, COL_OUTCOME],
                       a_out, b_out, eve_out, rows)
        eve_joint = False
    elif eve.strategy == "so4":
        quiet = np.flatnonzero(~eve_mask)
        _sample_tables(sampler, a_idx, b_idx, variants, fields[:, COL_OUTCOME],
                       a_out, b_out, eve_out, quiet)
        int_rows = np.flatnonzero(eve_mask)
        if len(int_rows):
            _run_rotation(config, fields, a_idx, b_idx, a_out, b_out, eve_out, int_rows)
        eve_joint = True
    else:
        rows = np.arange(n)
        _sample_tables(sampler, a_idx, b_idx, variants, fields[:, COL_OUTCOME],
                       a_out, b_out, eve_out, rows)
        eve_joint = False

    return SessionLog(
        protocol=config.protocol,
        channel=config.channel,
        strategy=eve.strategy,
        seed=config.seed,
        keyed=keyed,
        a_choice=a_choice,
        b_choice=b_choice,
        a_out=a_out,
        b_out=b_out,
        eve_mask=eve_mask,
        eve_out=eve_out,
        eve_joint=eve_joint,
    )
