import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..scenarios import ConditionalMatrix, PairRole, Scenario, ScenarioSpec, check_role, pair_conditional
from .chsh import chsh_conditional_oracle
from .leggett_garg import Noise, SpinSystem, lg_conditional_oracle

QUBIT_TOLERANCE = 1e-10
# The spin-1 oracle integrates a master equation instead of applying exact Kraus maps.
QUTRIT_TOLERANCE = 1e-8

DEFAULT_THETAS = tuple(np.linspace(math.pi / 20, math.pi, 20))
DEFAULT_KAPPAS = tuple(np.linspace(0.0, 2.0, 10))

_LG_SETUPS = {
    Scenario.LG_SPIN_HALF_DEPHASING: (SpinSystem.SPIN_HALF, Noise.DEPHASING),
    Scenario.LG_SPIN_HALF_DEPOLARIZING: (SpinSystem.SPIN_HALF, Noise.DEPOLARIZING),
    Scenario.LG_SPIN_ONE_DEPHASING: (SpinSystem.SPIN_ONE, Noise.DEPHASING),
}


def tolerance_for(scenario: Scenario) -> float:
    return QUTRIT_TOLERANCE if scenario is Scenario.LG_SPIN_ONE_DEPHASING else QUBIT_TOLERANCE


def oracle_conditional(scenario: Scenario, role: PairRole, theta: float, kappa: float) -> ConditionalMatrix:
    """Simulated counterpart of scenarios.pair_conditional."""
    check_role(scenario, role)
    if scenario.is_chsh:
        return chsh_conditional_oracle(theta, kappa, role=role)
    system, noise = _LG_SETUPS[scenario]
    return lg_conditional_oracle(system, noise, theta, kappa, role.multiplier)


@dataclass(frozen=True)
class OracleDeviation:
    scenario: Scenario
    role: PairRole
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def compare_with_closed_form(scenario: Scenario, thetas: Sequence[float] = DEFAULT_THETAS,
        kappas: Sequence[float] = DEFAULT_KAPPAS) -> List[OracleDeviation]:
    """Largest |closed form - oracle| over a (theta, kappa) grid, one entry per pair role."""
    report = []
    for role in scenario.roles:
        worst = 0.0
        for theta in thetas:
            for kappa in kappas:
                spec = ScenarioSpec(scenario, float(theta), float(kappa))
                closed = pair_conditional(spec, role).matrix
                simulated = oracle_conditional(scenario, role, spec.theta, spec.kappa).matrix
                worst = max(worst, float(np.max(np.abs(closed - simulated))))
        report.append(OracleDeviation(scenario, role, worst, tolerance_for(scenario)))
    return report
