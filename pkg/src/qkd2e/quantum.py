"""Small-dimension labeled state vectors and projective measurement.

Everything in this package runs on pure states of one or two photons, where
each photon carries a time-bin qubit and a polarization qubit. States are
flat complex vectors with an explicit factor shape (``dims``) so that
subsystems can be measured by axis index. Probabilities below ``PROB_FLOOR``
are treated as exact zeros to keep floating-point dust from ever being
selected as a measurement branch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

ATOL = 1e-9
PROB_FLOOR = 1e-12


class DegenerateMeasurementError(ValueError):
    """Raised when a measurement would collapse onto a ~zero-probability branch."""


def _as_complex(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a flat amplitude vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state with one text label per basis index.

    Parameters
    ----------
    amps : array_like of complex
        Flat amplitude vector.
    labels : tuple of str
        One label per amplitude, e.g. ``("sH⊗sH", ...)`` for a photon pair.
    dims : tuple of int, optional
        Tensor factor dimensions; defaults to the single factor ``(len(amps),)``.
    """

    amps: np.ndarray
    labels: tuple[str, ...]
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        amps = _as_complex(self.amps)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "labels", tuple(self.labels))
        dims = tuple(self.dims) if self.dims else (amps.size,)
        object.__setattr__(self, "dims", dims)
        if len(self.labels) != amps.size:
            raise ValueError(f"{len(self.labels)} labels for {amps.size} amplitudes")
        if prod(dims) != amps.size:
            raise ValueError(f"dims {dims} do not multiply to {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state not normalized: |psi| = {norm!r}")

    @property
    def dim(self) -> int:
        return self.amps.size

    def reshaped(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def to_amp_pairs(self) -> list[dict]:
        """Serialize amplitudes as explicit (re, im) pairs keyed by label."""
        return [
            {"label": lab, "re": float(a.real), "im": float(a.imag)}
            for lab, a in zip(self.labels, self.amps)
        ]


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal measurement basis; ``vectors[k]`` is the k-th outcome vector."""

    vectors: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=np.complex128)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise ValueError(f"basis must be square, got shape {vecs.shape}")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != vecs.shape[0]:
            raise ValueError("one label per basis vector required")
        gram = vecs.conj() @ vecs.T
        if not np.allclose(gram, np.eye(vecs.shape[0]), atol=ATOL):
            raise ValueError("basis vectors are not orthonormal")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector_state(self, k: int, labels=None) -> StateVector:
        labels = labels if labels is not None else tuple(f"{self.labels[k]}[{i}]" for i in range(self.dim))
        return StateVector(self.vectors[k], labels, (self.dim,))


@dataclass(frozen=True)
class RotationMatrix:
    """Real special-orthogonal matrix (det +1, R Rᵀ = I within ATOL)."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"rotation must be square, got {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        if not np.allclose(mat @ mat.T, np.eye(mat.shape[0]), atol=ATOL):
            raise ValueError("matrix is not orthogonal")
        det = np.linalg.det(mat)
        if abs(det - 1.0) > ATOL:
            raise ValueError(f"det = {det!r}, not a proper rotation")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product of two states; labels joined with the ⊗ separator."""
    amps = np.kron(a.amps, b.amps)
    labels = tuple(f"{la}⊗{lb}" for la in a.labels for lb in b.labels)
    return StateVector(amps, labels, a.dims + b.dims)


def inner(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product <a|b> (conjugation on the first argument)."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def _clamp_probs(probs: np.ndarray) -> np.ndarray:
    probs = np.where(probs < PROB_FLOOR, 0.0, probs)
    return probs


def born_distribution(state: StateVector, basis: MeasurementBasis) -> np.ndarray:
    """Outcome probabilities for a full projective measurement.

    Returns
    -------
    numpy.ndarray
        Probabilities per basis vector, tiny values clamped to exact zero.
    """
    if basis.dim != state.dim:
        raise ValueError(f"basis dim {basis.dim} != state dim {state.dim}")
    amps = basis.vectors.conj() @ state.amps
    return _clamp_probs(np.abs(amps) ** 2)


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw; zero-probability outcomes are never selected."""
    total = probs.sum()
    if total < PROB_FLOOR:
        raise DegenerateMeasurementError("all outcome probabilities vanish")
    cdf = np.cumsum(probs / total)
    u = rng.random()
    return int(np.searchsorted(cdf, u, side="right"))


def projective_measure(
    state: StateVector, basis: MeasurementBasis, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure the whole state; the post-measurement state is the outcome vector."""
    probs = born_distribution(state, basis)
    k = sample_index(probs, rng)
    post = StateVector(basis.vectors[k], state.labels, state.dims)
    return k, post


def project_subsystem(
    state: StateVector, axes: tuple[int, ...], basis: MeasurementBasis, outcome: int
) -> tuple[float, StateVector | None]:
    """Project the given factor axes onto one basis vector.

    Parameters
    ----------
    state : StateVector
    axes : tuple of int
        Factor axes (into ``state.dims``) the basis acts on, in order.
    basis : MeasurementBasis
        Basis on the product of the selected axes.
    outcome : int
        Which basis vector to project onto.

    Returns
    -------
    (prob, collapsed)
        Branch probability and the renormalized joint state, or ``None``
        when the branch probability is below the floor.
    """
    dims = state.dims
    sub_dim = prod(dims[ax] for ax in axes)
    if basis.dim != sub_dim:
        raise ValueError(f"basis dim {basis.dim} != subsystem dim {sub_dim}")
    rest = tuple(i for i in range(len(dims)) if i not in axes)
    psi = state.reshaped().transpose(axes + rest).reshape(sub_dim, -1)
    vec = basis.vectors[outcome]
    branch = vec.conj() @ psi
    p = float(np.real(np.vdot(branch, branch)))
    if p < PROB_FLOOR:
        return 0.0, None
    collapsed = np.multiply.outer(vec, branch / np.sqrt(p))
    sub_dims = tuple(dims[ax] for ax in axes)
    rest_dims = tuple(dims[ax] for ax in rest)
    collapsed = collapsed.reshape(sub_dims + rest_dims)
    inverse = np.argsort(axes + rest)
    collapsed = collapsed.transpose(inverse).reshape(-1)
    return p, StateVector(collapsed, state.labels, dims)


def partial_measure(
    state: StateVector,
    axes: tuple[int, ...],
    basis: MeasurementBasis,
    rng: np.random.Generator,
) -> tuple[int, StateVector]:
    """Born-rule measurement of a subsystem with collapse of the joint state."""
    probs = np.empty(basis.dim)
    branches: list[StateVector | None] = []
    for k in range(basis.dim):
        p, collapsed = project_subsystem(state, axes, basis, k)
        probs[k] = p
        branches.append(collapsed)
    k = sample_index(_clamp_probs(probs), rng)
    post = branches[k]
    if post is None:
        raise DegenerateMeasurementError(f"selected branch {k} has vanishing probability")
    return k, post


def haar_rotation(n: int, rng: np.random.Generator) -> RotationMatrix:
    """Draw a Haar-distributed SO(n) rotation, n in {2, 4}.

    QR-orthogonalizes a standard-normal matrix with the positive-diagonal
    sign convention, then flips the last column when the determinant is -1
    (right multiplication by the reflection coset representative, which
    preserves the Haar measure on the rotation subgroup).
    """
    return RotationMatrix(haar_rotation_batch(n, 1, rng)[0])


def haar_rotation_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized Haar SO(n) sampler; returns an array of shape (size, n, n)."""
    if n not in (2, 4):
        raise ValueError(f"unsupported rotation dimension {n}; expected 2 or 4")
    a = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.einsum("nii->ni", r))
    signs[signs == 0] = 1.0
    q = q * signs[:, None, :]
    dets = np.linalg.det(q)
    q[dets < 0, :, -1] *= -1.0
    return q


def rotate_basis(basis: MeasurementBasis, rotation: RotationMatrix) -> MeasurementBasis:
    """Rotate a basis: output vector k is sum_j R[j, k] * input vector j."""
    if rotation.dim != basis.vectors.shape[0]:
        raise ValueError(f"rotation dim {rotation.dim} != basis size {basis.vectors.shape[0]}")
    new_vectors = rotation.matrix.T @ basis.vectors
    return MeasurementBasis(new_vectors, basis.labels)
