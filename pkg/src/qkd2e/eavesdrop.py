"""Intercept-resend attacks on the photon flying to Bob.

Every strategy measures Bob's photon in transit and forwards the collapsed
eigenstate, so "resend" is exactly the post-measurement state of the joint
system. Analyzer angles are Bob-side conventions (the attacker taps Bob's
wire, not Alice's).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quantum import (
    MeasurementBasis,
    StateVector,
    haar_rotation,
    partial_measure,
    rotate_basis,
)
from .source import POL_LABELS, TIMEBIN_LABELS, phase_basis, pol_basis

STRATEGIES = ("none", "fixed-basis", "breidbart", "so4")
# "so4" follows the CLI spelling; the long form is accepted and normalized.
STRATEGY_ALIASES = {"random-rotation": "so4"}


@dataclass(frozen=True)
class EavesdropConfig:
    """Attack selection for a session.

    strategy : one of ``none``, ``fixed-basis``, ``breidbart``, ``so4``.
    eta : per-pair interception probability (Bernoulli, not thinning).
    fixed_choice : basis label per keyed degree of freedom for ``fixed-basis``.
    random_fixed_choice : redraw ``fixed_choice`` uniformly on every
        intercepted pair instead of keeping it static for the session.
    rotation_dim : 4 rotates the whole photon's basis (any channel, the
        default for ``so4``); 2 rotates only the keyed qubit and is defined
        for single channels only.
    """

    strategy: str = "none"
    eta: float = 1.0
    fixed_choice: tuple[int, ...] = (0, 0)
    random_fixed_choice: bool = False
    rotation_dim: int | None = None

    def __post_init__(self):
        if self.strategy in STRATEGY_ALIASES:
            object.__setattr__(self, "strategy", STRATEGY_ALIASES[self.strategy])
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.rotation_dim not in (None, 2, 4):
            raise ValueError(f"rotation_dim must be 2 or 4, got {self.rotation_dim!r}")

    def resolved_rotation_dim(self) -> int:
        return 4 if self.rotation_dim is None else self.rotation_dim


@dataclass(frozen=True)
class DofPort:
    """One keyed degree of freedom: its factor axis and analyzer angles.

    Interception always receives Bob-side ports; the session engine also
    builds Alice-side ports (same shape, conjugate phase angles).
    """

    name: str  # "pol" or "phase"
    axis: int  # factor axis of the pair state
    angles: tuple[float, float]  # analyzer angle per basis label

    def analyzer(self, angle: float) -> MeasurementBasis:
        return pol_basis(angle) if self.name == "pol" else phase_basis(angle)

    def midpoint_angle(self) -> float:
        return 0.5 * (self.angles[0] + self.angles[1])


@dataclass(frozen=True)
class EveRecord:
    strategy: str
    outcomes: tuple[int, ...]  # per keyed DOF, or a single joint index for so4
    joint: bool = False
    basis_labels: tuple[str, ...] = ()
    rotation: np.ndarray | None = field(default=None, repr=False)


def intercept_fixed(
    state: StateVector,
    ports: tuple[DofPort, ...],
    choice: tuple[int, ...],
    rng: np.random.Generator,
) -> tuple[StateVector, EveRecord]:
    """Measure each keyed DOF in one of the two legitimate bases and resend."""
    if len(choice) != len(ports):
        raise ValueError(f"{len(choice)} basis choices for {len(ports)} DOFs")
    outcomes = []
    for port, label in zip(ports, choice):
        basis = port.analyzer(port.angles[label])
        k, state = partial_measure(state, (port.axis,), basis, rng)
        outcomes.append(k)
    labels = tuple(f"{p.name}:{c}" for p, c in zip(ports, choice))
    return state, EveRecord("fixed-basis", tuple(outcomes), basis_labels=labels)


def intercept_breidbart(
    state: StateVector,
    ports: tuple[DofPort, ...],
    rng: np.random.Generator,
) -> tuple[StateVector, EveRecord]:
    """Measure each keyed DOF midway between the two legitimate bases.

    The midpoint analyzers are polarization 22.5 degrees and interferometer
    phase pi/4, equidistant from both key bases on the Bloch equator.
    """
    outcomes = []
    for port in ports:
        basis = port.analyzer(port.midpoint_angle())
        k, state = partial_measure(state, (port.axis,), basis, rng)
        outcomes.append(k)
    labels = tuple(f"{p.name}:mid" for p in ports)
    return state, EveRecord("breidbart", tuple(outcomes), basis_labels=labels)


def intercept_random_rotation(
    state: StateVector,
    dim: int,
    ports: tuple[DofPort, ...],
    rng: np.random.Generator,
) -> tuple[StateVector, EveRecord]:
    """Measure in a Haar-random rotation of the computational basis.

    dim = 4 rotates the basis of Bob's whole photon (both factors jointly);
    dim = 2 rotates only the keyed qubit of a single channel.
    """
    rotation = haar_rotation(dim, rng)
    if dim == 4:
        axes = (2, 3)
        labels = tuple(f"{t}{p}" for t in TIMEBIN_LABELS for p in POL_LABELS)
        comp = MeasurementBasis(np.eye(4, dtype=np.complex128), labels)
        basis = rotate_basis(comp, rotation)
        k, state = partial_measure(state, axes, basis, rng)
    else:
        if len(ports) != 1:
            raise ValueError("rotation_dim=2 is defined for single channels only")
        port = ports[0]
        labels = TIMEBIN_LABELS if port.name == "phase" else POL_LABELS
        comp = MeasurementBasis(np.eye(2, dtype=np.complex128), labels)
        basis = rotate_basis(comp, rotation)
        k, state = partial_measure(state, (port.axis,), basis, rng)
    return state, EveRecord("so4", (k,), joint=True, rotation=rotation.matrix)


def apply_strategy(
    config: EavesdropConfig,
    state: StateVector,
    ports: tuple[DofPort, ...],
    rng: np.random.Generator,
) -> tuple[StateVector, EveRecord | None]:
    """Intercept one pair with probability ``eta``; None when left alone."""
    if config.strategy == "none" or rng.random() >= config.eta:
        return state, None
    if config.strategy == "fixed-basis":
        choice = config.fixed_choice[: len(ports)]
        if config.random_fixed_choice:
            choice = tuple(int(rng.integers(2)) for _ in ports)
        return intercept_fixed(state, ports, choice, rng)
    if config.strategy == "breidbart":
        return intercept_breidbart(state, ports, rng)
    dim = config.resolved_rotation_dim()
    if dim == 2 and len(ports) != 1:
        raise ValueError("rotation_dim=2 requires a single keyed DOF")
    return intercept_random_rotation(state, dim, ports, rng)
