from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..consts import EIGENVALUE_TOLERANCE, HERMITIAN_TOLERANCE, TRACE_TOLERANCE
from ..errors import ScenarioError

IDENTITY_2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Spin-1 x-component in the basis ordered by s_z = +1, 0, -1 (units of hbar).
SPIN_ONE_X = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128) / np.sqrt(2.0)

# Self-Hamiltonian energies in units of hbar*omega, in the computational basis.
SPIN_HALF_ENERGIES = np.array([-0.5, 0.5])
SPIN_ONE_ENERGIES = np.array([-1.0, 0.0, 1.0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite matrix of dimension 2 or 3."""
    entries: np.ndarray

    @staticmethod
    def of(entries) -> "DensityMatrix":
        rho = np.array(entries, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 3):
            raise ScenarioError(f"density matrix must be 2x2 or 3x3, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOLERANCE:
            raise ScenarioError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOLERANCE:
            raise ScenarioError(f"density matrix has trace {np.trace(rho)}")
        if np.linalg.eigvalsh(rho).min() < -EIGENVALUE_TOLERANCE:
            raise ScenarioError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        return DensityMatrix(rho)

    @staticmethod
    def maximally_mixed(dim: int) -> "DensityMatrix":
        return DensityMatrix.of(np.eye(dim) / dim)

    @staticmethod
    def pure(vector: Sequence[complex]) -> "DensityMatrix":
        v = np.asarray(vector, dtype=np.complex128)
        v = v / np.linalg.norm(v)
        return DensityMatrix.of(np.outer(v, v.conj()))

    @staticmethod
    def from_bloch(w: Sequence[float]) -> "DensityMatrix":
        """Qubit state (I + w.sigma)/2."""
        return DensityMatrix.of((IDENTITY_2 + sum(c * s for c, s in zip(w, PAULIS))) / 2.0)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def bloch(self) -> np.ndarray:
        assert self.dim == 2
        return np.array([np.real(np.trace(self.entries @ s)) for s in PAULIS])


def qubit_projector(m: int, angle: float) -> np.ndarray:
    """Projector onto the eigenvalue m of n.sigma for n = (cos angle, sin angle, 0)."""
    n_sigma = np.cos(angle) * PAULI_X + np.sin(angle) * PAULI_Y
    return (IDENTITY_2 + m * n_sigma) / 2.0


def x_projectors(dim: int) -> List[np.ndarray]:
    """Eigenprojectors of the x spin component, ordered by eigenvalue (+1, -1) or (+1, 0, -1)."""
    if dim == 2:
        return [qubit_projector(+1, 0.0), qubit_projector(-1, 0.0)]
    assert dim == 3
    values, vectors = np.linalg.eigh(SPIN_ONE_X)
    order = np.argsort(values)[::-1]
    return [np.outer(vectors[:, k], vectors[:, k].conj()) for k in order]


def interaction_projector(projector: np.ndarray, energies: np.ndarray, t: float) -> np.ndarray:
    """U(t)^dagger P U(t) for the diagonal evolution U(t) = exp(-i H t)."""
    phases = np.exp(1j * energies * t)
    return phases[:, None] * projector * phases.conj()[None, :]
