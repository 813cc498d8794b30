import math
from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import ScenarioError
from .states import IDENTITY_2, PAULIS, DensityMatrix


@dataclass(frozen=True)
class ChannelParams:
    """Phase damping strength lam in [0, 1] and depolarizing strength mu in [0, 3/4]."""
    lam: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ScenarioError(f"phase damping parameter must lie in [0, 1], got {self.lam}")
        if not 0.0 <= self.mu <= 0.75:
            raise ScenarioError(f"depolarizing parameter must lie in [0, 3/4], got {self.mu}")

    @staticmethod
    def from_gamma_t(gamma_t: float) -> "ChannelParams":
        """lam = 1 - exp(-2 gamma t) and mu = (3/4)(1 - exp(-4 gamma t)) for a dimensionless gamma*t."""
        if gamma_t < 0:
            raise ScenarioError(f"gamma*t must be nonnegative, got {gamma_t}")
        return ChannelParams(lam=-math.expm1(-2.0 * gamma_t), mu=-0.75 * math.expm1(-4.0 * gamma_t))


class BaseChannel:
    """A unital channel on density matrices of a fixed dimension, given by Kraus operators."""

    dim = 2

    def kraus(self) -> List[np.ndarray]:
        raise NotImplementedError

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dim != self.dim:
            raise ScenarioError(f"{type(self).__name__} acts on dimension {self.dim}, got {rho.dim}")
        return DensityMatrix.of(self.apply_array(rho.entries))

    def apply_array(self, rho: np.ndarray) -> np.ndarray:
        """Applies the channel to a matrix or a stack of matrices of shape (..., d, d)."""
        out = np.zeros(np.shape(rho), dtype=np.complex128)
        for k in self.kraus():
            out += k @ rho @ k.conj().T
        return out

    def two_qubit_kraus(self) -> List[np.ndarray]:
        """Kraus operators of the channel acting independently on both qubits of a pair."""
        assert self.dim == 2
        ks = self.kraus()
        return [np.kron(a, b) for a in ks for b in ks]

    def apply_to_pair(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros(np.shape(rho), dtype=np.complex128)
        for k in self.two_qubit_kraus():
            out += k @ rho @ k.conj().T
        return out


class PhaseDampingChannel(BaseChannel):
    """Kraus pair diag(1, sqrt(1-lam)) and diag(0, sqrt(lam)): coherences shrink by sqrt(1-lam)."""

    def __init__(self, lam: float):
        self.lam = ChannelParams(lam=lam).lam

    @staticmethod
    def from_gamma_t(gamma_t: float) -> "PhaseDampingChannel":
        return PhaseDampingChannel(ChannelParams.from_gamma_t(gamma_t).lam)

    # Override
    def kraus(self) -> List[np.ndarray]:
        e0 = np.diag([1.0, math.sqrt(1.0 - self.lam)]).astype(np.complex128)
        e1 = np.diag([0.0, math.sqrt(self.lam)]).astype(np.complex128)
        return [e0, e1]


class DepolarizingChannel(BaseChannel):
    """Kraus set sqrt(1-mu) I and sqrt(mu/3) sigma_j: the Bloch vector shrinks by 1 - 4mu/3."""

    def __init__(self, mu: float):
        self.mu = ChannelParams(mu=mu).mu

    @staticmethod
    def from_gamma_t(gamma_t: float) -> "DepolarizingChannel":
        return DepolarizingChannel(ChannelParams.from_gamma_t(gamma_t).mu)

    # Override
    def kraus(self) -> List[np.ndarray]:
        side = math.sqrt(self.mu / 3.0)
        return [math.sqrt(1.0 - self.mu) * IDENTITY_2] + [side * s for s in PAULIS]


class LindbladDephasingChannel(BaseChannel):
    """
    Evolution over a dimensionless time s = gamma*t under the interaction-picture generator
        L[rho] = 2 N rho N - N^2 rho - rho N^2
    for a Hermitian number operator N, integrated with fixed-step classical Runge-Kutta.
    """

    # Integration steps per unit of gamma*t. Coherences decay at most at rate 4 for the spin-1
    # operator, so the per-step exponent stays at 0.02.
    DEFAULT_STEPS_PER_UNIT = 200

    def __init__(self, number_operator: np.ndarray, gamma_t: float,
            steps_per_unit: int = DEFAULT_STEPS_PER_UNIT):
        if gamma_t < 0:
            raise ScenarioError(f"gamma*t must be nonnegative, got {gamma_t}")
        assert steps_per_unit > 0
        self.number_operator = np.asarray(number_operator, dtype=np.complex128)
        self.dim = self.number_operator.shape[0]
        self.gamma_t = gamma_t
        self.steps = math.ceil(gamma_t * steps_per_unit)

    @staticmethod
    def spin_one(gamma_t: float, steps_per_unit: int = DEFAULT_STEPS_PER_UNIT) -> "LindbladDephasingChannel":
        return LindbladDephasingChannel(np.diag([-1.0, 0.0, 1.0]), gamma_t, steps_per_unit)

    @staticmethod
    def qubit(gamma_t: float, steps_per_unit: int = DEFAULT_STEPS_PER_UNIT) -> "LindbladDephasingChannel":
        """Qubit dephasing with N = |1><1|; matches PhaseDampingChannel.from_gamma_t."""
        return LindbladDephasingChannel(np.diag([0.0, 1.0]), gamma_t, steps_per_unit)

    def generator(self, rho: np.ndarray) -> np.ndarray:
        n = self.number_operator
        n2 = n @ n
        return 2.0 * (n @ rho @ n) - n2 @ rho - rho @ n2

    # Override
    def apply_array(self, rho: np.ndarray) -> np.ndarray:
        rho = np.array(rho, dtype=np.complex128)
        if self.steps == 0:
            return rho
        h = self.gamma_t / self.steps
        for _ in range(self.steps):
            k1 = self.generator(rho)
            k2 = self.generator(rho + 0.5 * h * k1)
            k3 = self.generator(rho + 0.5 * h * k2)
            k4 = self.generator(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return rho


def apply_phase_damping(rho: DensityMatrix, lam: float) -> DensityMatrix:
    return PhaseDampingChannel(lam).apply(rho)


def apply_depolarizing(rho: DensityMatrix, mu: float) -> DensityMatrix:
    return DepolarizingChannel(mu).apply(rho)
