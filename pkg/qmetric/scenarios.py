"""
Closed-form outcome distributions of the CHSH and Leggett-Garg setups under decoherence.

Every setup is parameterized by an angle-like variable theta and a decoherence ratio kappa:
- CHSH: theta is the angle between a and b; the three other pairs are theta/3 apart.
  kappa = gamma*dt / (theta/3), so every pair decays with exponent kappa*theta/3.
- Leggett-Garg: theta = omega*dtau and kappa = gamma/omega, so an interval dtau decays with
  exponent kappa*theta. The end-to-end pair spans 2*dtau.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from .consts import DICHOTOMIC_LABELS, THETA_MAX, TRICHOTOMIC_LABELS
from .entropy import JointDistribution
from .errors import ScenarioError, UsageError


class Scenario(Enum):
    CHSH_DEPHASING = "chsh-dephasing"
    LG_SPIN_HALF_DEPHASING = "lg-spin-half-dephasing"
    LG_SPIN_HALF_DEPOLARIZING = "lg-spin-half-depolarizing"
    LG_SPIN_ONE_DEPHASING = "lg-spin-one-dephasing"

    @property
    def is_chsh(self) -> bool:
        return self is Scenario.CHSH_DEPHASING

    @property
    def labels(self) -> Tuple[int, ...]:
        if self is Scenario.LG_SPIN_ONE_DEPHASING:
            return TRICHOTOMIC_LABELS
        return DICHOTOMIC_LABELS

    @property
    def outcome_count(self) -> int:
        return len(self.labels)

    @property
    def roles(self) -> Tuple["PairRole", ...]:
        if self.is_chsh:
            return (PairRole.CHSH_AB, PairRole.CHSH_SMALL_ANGLE)
        return (PairRole.LG_ADJACENT, PairRole.LG_END_TO_END)


class PairRole(Enum):
    # The pair (A, B) at angle theta.
    CHSH_AB = "ab"
    # The pairs (A, B'), (B', A'), (A', B) at angle theta/3.
    CHSH_SMALL_ANGLE = "small-angle"
    # Measurements one interval apart: (X, X') and (X', X'').
    LG_ADJACENT = "adjacent"
    # Measurements two intervals apart: (X, X'').
    LG_END_TO_END = "end-to-end"

    @property
    def is_chsh(self) -> bool:
        return self in (PairRole.CHSH_AB, PairRole.CHSH_SMALL_ANGLE)

    @property
    def multiplier(self) -> int:
        """Interval multiplier for LG roles."""
        return 2 if self is PairRole.LG_END_TO_END else 1


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: Scenario
    theta: float
    kappa: float

    def __post_init__(self):
        check_parameters(self.theta, self.kappa)


def check_parameters(theta, kappa: float):
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)) or np.any(theta <= 0) or np.any(theta > THETA_MAX):
        raise ScenarioError(f"theta must lie in (0, pi], got {theta}")
    if not (math.isfinite(kappa) and kappa >= 0):
        raise ScenarioError(f"kappa must be nonnegative, got {kappa}")


def check_role(scenario: Scenario, role: PairRole):
    if role.is_chsh != scenario.is_chsh:
        raise UsageError(f"pair role {role.value} does not belong to scenario {scenario.value}")


@dataclass(frozen=True, eq=False)
class ConditionalMatrix:
    """Entries p(m'|m): rows are the conditioning outcome m, columns the outcome m'."""
    matrix: np.ndarray
    labels: Tuple[int, ...]

    def probability(self, m_next: int, m: int) -> float:
        return float(self.matrix[self.labels.index(m), self.labels.index(m_next)])

    def joint(self) -> JointDistribution:
        """Joint p(m, m') for a uniform distribution of the conditioning outcome."""
        return JointDistribution.of(self.matrix / len(self.labels), self.labels, self.labels)


def _dichotomic(correlation: np.ndarray, sign: float) -> np.ndarray:
    """2x2 matrices (1 + sign*m'*m*correlation)/2 over labels (+1, -1)."""
    same = (1.0 + sign * correlation) / 2.0
    flip = (1.0 - sign * correlation) / 2.0
    return np.stack([np.stack([same, flip], axis=-1), np.stack([flip, same], axis=-1)], axis=-2)


def _trichotomic(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """
    3x3 matrices over labels (+1, 0, -1), where `first` = e^{-x} cos(phi) and
    `second` = e^{-4x} cos(2 phi) are the decayed single and double coherence terms.
    """
    same = 3.0 / 8.0 + first / 2.0 + second / 8.0
    opposite = 3.0 / 8.0 - first / 2.0 + second / 8.0
    edge = (1.0 - second) / 4.0
    centre = (1.0 + second) / 2.0
    rows = [
        np.stack([same, edge, opposite], axis=-1),
        np.stack([edge, centre, edge], axis=-1),
        np.stack([opposite, edge, same], axis=-1),
    ]
    return np.stack(rows, axis=-2)


def conditional_table(scenario: Scenario, role: PairRole, theta, kappa: float) -> np.ndarray:
    """
    Conditional matrices for an array of theta values; returns shape theta.shape + (k, k).
    """
    check_role(scenario, role)
    theta = np.asarray(theta, dtype=float)
    if scenario is Scenario.CHSH_DEPHASING:
        angle = theta if role is PairRole.CHSH_AB else theta / 3.0
        # Singlet outcomes are anticorrelated.
        return _dichotomic(np.exp(-kappa * theta / 3.0) * np.cos(angle), sign=-1.0)

    angle = role.multiplier * theta
    decay = kappa * angle
    if scenario is Scenario.LG_SPIN_HALF_DEPHASING:
        return _dichotomic(np.exp(-decay) * np.cos(angle), sign=+1.0)
    if scenario is Scenario.LG_SPIN_HALF_DEPOLARIZING:
        return _dichotomic(np.exp(-4.0 * decay) * np.cos(angle), sign=+1.0)
    assert scenario is Scenario.LG_SPIN_ONE_DEPHASING
    return _trichotomic(np.exp(-decay) * np.cos(angle), np.exp(-4.0 * decay) * np.cos(2.0 * angle))


def joint_table(scenario: Scenario, role: PairRole, theta, kappa: float) -> np.ndarray:
    """Joint matrices p(m, m') = p(m'|m)/k for an array of theta values."""
    return conditional_table(scenario, role, theta, kappa) / scenario.outcome_count


def pair_conditional(spec: ScenarioSpec, role: PairRole) -> ConditionalMatrix:
    matrix = conditional_table(spec.scenario, role, spec.theta, spec.kappa)
    matrix.setflags(write=False)
    return ConditionalMatrix(matrix, spec.scenario.labels)


def pair_joint(spec: ScenarioSpec, role: PairRole) -> JointDistribution:
    return pair_conditional(spec, role).joint()
