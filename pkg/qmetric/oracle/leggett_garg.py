"""
Density-matrix simulation of two successive x-spin measurements on a single system.

The system starts completely mixed, so the first outcome is uniform and leaves the
interaction-picture projector as the post-measurement state. That state decoheres for
gamma*dtau (times the interval multiplier) and the x spin is measured again; the free
rotation is carried by the projectors, with omega = 1 so that theta = dtau and gamma = kappa.
"""
from enum import Enum

import numpy as np

from ..consts import DICHOTOMIC_LABELS, TRICHOTOMIC_LABELS
from ..errors import UsageError
from ..scenarios import ConditionalMatrix, check_parameters
from .channels import (BaseChannel, DepolarizingChannel, LindbladDephasingChannel,
    PhaseDampingChannel)
from .states import (SPIN_HALF_ENERGIES, SPIN_ONE_ENERGIES, DensityMatrix, interaction_projector,
    x_projectors)


class SpinSystem(Enum):
    SPIN_HALF = "spin-half"
    SPIN_ONE = "spin-one"


class Noise(Enum):
    DEPHASING = "dephasing"
    DEPOLARIZING = "depolarizing"


def _channel(system: SpinSystem, noise: Noise, gamma_t: float,
        steps_per_unit: int) -> BaseChannel:
    if system is SpinSystem.SPIN_ONE:
        if noise is not Noise.DEPHASING:
            raise UsageError("spin-one systems support only dephasing")
        return LindbladDephasingChannel.spin_one(gamma_t, steps_per_unit)
    if noise is Noise.DEPHASING:
        return PhaseDampingChannel.from_gamma_t(gamma_t)
    return DepolarizingChannel.from_gamma_t(gamma_t)


def lg_conditional_oracle(system: SpinSystem, noise: Noise, theta: float, kappa: float,
        interval_multiplier: int = 1,
        steps_per_unit: int = LindbladDephasingChannel.DEFAULT_STEPS_PER_UNIT) -> ConditionalMatrix:
    check_parameters(theta, kappa)
    if interval_multiplier not in (1, 2):
        raise UsageError(f"interval multiplier must be 1 or 2, got {interval_multiplier}")
    if system is SpinSystem.SPIN_HALF:
        dim, energies, labels = 2, SPIN_HALF_ENERGIES, DICHOTOMIC_LABELS
    else:
        dim, energies, labels = 3, SPIN_ONE_ENERGIES, TRICHOTOMIC_LABELS

    interval = interval_multiplier * theta
    channel = _channel(system, noise, kappa * interval, steps_per_unit)
    projectors = x_projectors(dim)
    initial = DensityMatrix.maximally_mixed(dim).entries

    # Post-measurement states for every first outcome, evolved as one stack.
    posts = []
    for p in projectors:
        p_m = np.real(np.trace(p @ initial))
        posts.append(p @ initial @ p / p_m)
    evolved = channel.apply_array(np.stack(posts))

    later = [interaction_projector(p, energies, interval) for p in projectors]
    matrix = np.zeros((dim, dim))
    for i, rho in enumerate(evolved):
        rho = DensityMatrix.of(rho).entries
        for k, p in enumerate(later):
            matrix[i, k] = np.real(np.trace(p @ rho))
    matrix.setflags(write=False)
    return ConditionalMatrix(matrix, labels)
