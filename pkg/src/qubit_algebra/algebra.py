"""Two-level matrix algebra: Pauli operators, Bloch vectors and closed-form spectra.

The computational basis is ordered (|1>, |-1>): the first component is the
excited state, so ``diag(1, 0)`` is the north pole of the Bloch sphere and
``sigma_z`` has eigenvalue +1 on the excited state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import UnphysicalStateError

LOGGER = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10
BLOCH_NORM_TOL = 1e-10
DEGENERACY_THRESHOLD = 1e-9
# Bloch norms this close to 1 are treated as exactly pure.
_PURITY_SNAP = 1e-14
_GAUGE_MAGNITUDE = 1e-12


def frozen_array(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


IDENTITY = frozen_array(np.eye(2))
SIGMA_X = frozen_array([[0, 1], [1, 0]])
SIGMA_Y = frozen_array([[0, -1j], [1j, 0]])
SIGMA_Z = frozen_array([[1, 0], [0, -1]])
PROJ_EXCITED = frozen_array([[1, 0], [0, 0]])
PROJ_GROUND = frozen_array([[0, 0], [0, 1]])
# |1><-1| and |-1><1|
RAISING = frozen_array([[0, 1], [0, 0]])
LOWERING = frozen_array([[0, 0], [1, 0]])

PAULI: Tuple[np.ndarray, np.ndarray, np.ndarray] = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(slots=True, frozen=True)
class BlochVector:
    """Real 3-vector r with rho = (I + r.sigma)/2."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        components = (self.x, self.y, self.z)
        if not all(math.isfinite(c) for c in components):
            raise UnphysicalStateError(f"Bloch vector has non-finite components: {components}")
        if self.norm > 1.0 + BLOCH_NORM_TOL:
            raise UnphysicalStateError(f"Bloch vector norm {self.norm!r} exceeds 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(slots=True, frozen=True, eq=False)
class DensityMatrix:
    """Validated, immutable 2x2 density matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise UnphysicalStateError(f"density matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise UnphysicalStateError("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise UnphysicalStateError("density matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise UnphysicalStateError(f"density matrix trace {trace!r} differs from 1")
        min_eigenvalue = 0.5 * (1.0 - float(np.linalg.norm(bloch_components(m))))
        if min_eigenvalue < -POSITIVITY_TOL:
            raise UnphysicalStateError(f"density matrix has negative eigenvalue {min_eigenvalue!r}")
        object.__setattr__(self, "matrix", frozen_array(m))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DensityMatrix":
        """Re-Hermitize and trace-normalize ``matrix`` before validation."""

        m = np.asarray(matrix, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        return cls(m / np.trace(m).real)

    def bloch(self) -> BlochVector:
        return density_to_bloch(self)

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= atol)


@dataclass(slots=True, frozen=True, eq=False)
class Spectral2:
    """Eigen-decomposition of a qubit density matrix.

    ``p`` holds the eigenvalues, ``w[i]`` the eigenvector belonging to ``p[i]``.
    """

    p: Tuple[float, float]
    w: np.ndarray
    degenerate: bool = False

    def reconstruct(self) -> np.ndarray:
        return sum(p_i * np.outer(w_i, w_i.conj()) for p_i, w_i in zip(self.p, self.w))


def bloch_components(matrix: np.ndarray) -> np.ndarray:
    """Return (Tr rho sx, Tr rho sy, Tr rho sz) for a 2x2 matrix or a stack of them."""

    m = np.asarray(matrix)
    rx = 2.0 * m[..., 0, 1].real
    ry = -2.0 * m[..., 0, 1].imag
    rz = (m[..., 0, 0] - m[..., 1, 1]).real
    return np.stack([rx, ry, rz], axis=-1)


def bloch_to_density(r: BlochVector) -> DensityMatrix:
    matrix = 0.5 * (IDENTITY + r.x * SIGMA_X + r.y * SIGMA_Y + r.z * SIGMA_Z)
    return DensityMatrix(matrix)


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    rx, ry, rz = (float(np.trace(rho.matrix @ s).real) for s in PAULI)
    return BlochVector(rx, ry, rz)


def overlap(u: np.ndarray, v: np.ndarray) -> complex:
    """Scalar product <u|v>, conjugate-linear in ``u``."""

    return complex(np.vdot(u, v))


def fix_gauge(vector: np.ndarray) -> np.ndarray:
    """Make the first component with magnitude above 1e-12 real and positive."""

    for component in vector:
        magnitude = abs(component)
        if magnitude > _GAUGE_MAGNITUDE:
            return vector * (component.conjugate() / magnitude)
    return vector


def _fix_gauge_rows(vectors: np.ndarray) -> np.ndarray:
    """``fix_gauge`` applied along the last axis of a stack of 2-vectors."""

    leading = np.where(np.abs(vectors[..., 0]) > _GAUGE_MAGNITUDE, vectors[..., 0], vectors[..., 1])
    magnitude = np.abs(leading)
    usable = magnitude > _GAUGE_MAGNITUDE
    phase = np.where(usable, leading.conj() / np.where(usable, magnitude, 1.0), 1.0)
    return vectors * phase[..., np.newaxis]


def spectral_stack(r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form spectra of a stack of Bloch vectors with shape (N, 3).

    Returns the eigenvalues (N, 2) in descending order, the eigenvectors
    (N, 2, 2) indexed as [point, branch, component] and the degeneracy mask (N,).
    Degenerate points get the identity basis.
    """

    r = np.asarray(r, dtype=float).reshape(-1, 3)
    norm = np.minimum(np.linalg.norm(r, axis=-1), 1.0)
    norm = np.where(1.0 - norm < _PURITY_SNAP, 1.0, norm)
    p = 0.5 * np.stack([1.0 + norm, 1.0 - norm], axis=-1)
    degenerate = norm < DEGENERACY_THRESHOLD

    u = r / np.where(degenerate, 1.0, norm)[:, np.newaxis]
    ux, uy, uz = u[:, 0], u[:, 1], u[:, 2]
    plus = ux + 1j * uy
    minus = ux - 1j * uy
    # Columns of the projectors (I +/- u.sigma)/2; take the better-conditioned one.
    upper = np.where(
        (uz >= 0.0)[:, np.newaxis],
        np.stack([1.0 + uz, plus], axis=-1),
        np.stack([minus, 1.0 - uz], axis=-1),
    )
    lower = np.where(
        (uz <= 0.0)[:, np.newaxis],
        np.stack([1.0 - uz, -plus], axis=-1),
        np.stack([-minus, 1.0 + uz], axis=-1),
    )
    w = np.stack([upper, lower], axis=1)
    w = _fix_gauge_rows(w / np.linalg.norm(w, axis=-1, keepdims=True))
    w[degenerate] = np.eye(2)
    return p, w, degenerate


def spectral_from_bloch(r: np.ndarray) -> Spectral2:
    """Closed-form spectrum of (I + r.sigma)/2 from its Bloch vector."""

    p, w, degenerate = spectral_stack(np.asarray(r, dtype=float)[np.newaxis])
    return Spectral2(p=(float(p[0, 0]), float(p[0, 1])), w=frozen_array(w[0]), degenerate=bool(degenerate[0]))


def eig_hermitian2(rho: DensityMatrix) -> Spectral2:
    """Eigenvalues (1 +/- |r|)/2 sorted descending with deterministic eigenvector gauge."""

    return spectral_from_bloch(bloch_components(rho.matrix))


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""

    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray) -> np.ndarray:
    return np.asarray(vector).reshape((2, 2), order="F")


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """(1/2)||a - b||_1; for qubits this is half the Bloch-vector distance."""

    diff = a.matrix - b.matrix
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
