"""
Density-matrix simulation of the CHSH pair under phase damping.

A singlet is emitted, both qubits dephase for gamma*dt1, qubit A is measured along a,
both qubits dephase for gamma*dt2, and qubit B is measured along a direction at the
pair's angle from a. Only the combination 2*dt1 + dt2 enters the outcome statistics.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..consts import DICHOTOMIC_LABELS
from ..errors import ScenarioError, UsageError
from ..scenarios import ConditionalMatrix, PairRole, check_parameters
from .channels import PhaseDampingChannel
from .states import IDENTITY_2, DensityMatrix, qubit_projector

SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)

# Relative tolerance on 2*gamma_dt1 + gamma_dt2 against kappa*theta/3.
TIMELINE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ChshTimeline:
    # gamma times the interval from emission to the measurement on A.
    gamma_dt1: float
    # gamma times the interval from the measurement on A to the measurement on B.
    gamma_dt2: float

    def __post_init__(self):
        if self.gamma_dt1 < 0 or self.gamma_dt2 < 0:
            raise ScenarioError(f"timeline intervals must be nonnegative, got {self}")

    @property
    def gamma_dt(self) -> float:
        return 2.0 * self.gamma_dt1 + self.gamma_dt2

    @staticmethod
    def even_split(theta: float, kappa: float) -> "ChshTimeline":
        """Equal intervals gamma*dt1 = gamma*dt2 = kappa*theta/9."""
        part = kappa * theta / 9.0
        return ChshTimeline(part, part)


def _partial_trace_first(rho: np.ndarray) -> np.ndarray:
    return np.einsum("abad->bd", rho.reshape(2, 2, 2, 2))


def chsh_conditional_oracle(theta: float, kappa: float, timeline: Optional[ChshTimeline] = None,
        role: PairRole = PairRole.CHSH_AB) -> ConditionalMatrix:
    check_parameters(theta, kappa)
    if not role.is_chsh:
        raise UsageError(f"pair role {role.value} is not a CHSH role")
    if timeline is None:
        timeline = ChshTimeline.even_split(theta, kappa)
    target = kappa * theta / 3.0
    if abs(timeline.gamma_dt - target) > TIMELINE_TOLERANCE * max(1.0, target):
        raise ScenarioError(
            f"timeline gives gamma*dt = {timeline.gamma_dt}, expected kappa*theta/3 = {target}")

    angle = theta if role is PairRole.CHSH_AB else theta / 3.0
    first = PhaseDampingChannel.from_gamma_t(timeline.gamma_dt1)
    second = PhaseDampingChannel.from_gamma_t(timeline.gamma_dt2)

    emitted = first.apply_to_pair(np.outer(SINGLET, SINGLET.conj()))
    matrix = np.zeros((2, 2))
    for i, m in enumerate(DICHOTOMIC_LABELS):
        measure_a = np.kron(qubit_projector(m, 0.0), IDENTITY_2)
        post = measure_a @ emitted @ measure_a
        p_m = np.real(np.trace(post))
        assert p_m > 0
        evolved = second.apply_to_pair(post / p_m)
        rho_b = DensityMatrix.of(_partial_trace_first(evolved))
        for k, m_next in enumerate(DICHOTOMIC_LABELS):
            matrix[i, k] = np.real(np.trace(qubit_projector(m_next, angle) @ rho_b.entries))
    matrix.setflags(write=False)
    return ConditionalMatrix(matrix, DICHOTOMIC_LABELS)
