"""
Violation quantities: C_q(theta, kappa), its supremum S_q(kappa) over theta,
the positivity threshold kappa_s(q), and scans over (q, kappa) grids.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .consts import THETA_MAX
from .entropy import MetricKind, Order, metric_table, q_log
from .errors import ScenarioError
from .scenarios import PairRole, Scenario, ScenarioSpec, check_parameters, joint_table

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class SearchConfig:
    # Theta interval searched for the supremum of C_q.
    theta_min: float = 1e-3
    theta_max: float = THETA_MAX
    # Number of grid points of the coarse theta scan.
    coarse_steps: int = 2000
    # Width of the final golden-section bracket on theta.
    refine_tolerance: float = 1e-6
    # S_q counts as strictly positive above this value.
    positivity_epsilon: float = 1e-9
    # Upper end of the kappa interval searched for the threshold.
    kappa_max: float = 5.0
    # Number of intervals of the coarse kappa grid used to bracket the threshold.
    kappa_coarse_steps: int = 100
    kappa_bisect_tolerance: float = 1e-5

    def __post_init__(self):
        if not 0 < self.theta_min < self.theta_max <= THETA_MAX:
            raise ScenarioError(
                f"need 0 < theta_min < theta_max <= pi, got [{self.theta_min}, {self.theta_max}]")
        if self.coarse_steps < 3 or self.kappa_coarse_steps < 1:
            raise ScenarioError("coarse grids need at least 3 theta points and 1 kappa interval")
        if min(self.refine_tolerance, self.positivity_epsilon, self.kappa_bisect_tolerance) <= 0:
            raise ScenarioError("tolerances must be positive")
        if not self.kappa_max > 0:
            raise ScenarioError(f"kappa_max must be positive, got {self.kappa_max}")

    @staticmethod
    def default() -> "SearchConfig":
        return SearchConfig()

    @staticmethod
    def fast() -> "SearchConfig":
        """Coarser grids for previews and tests; thresholds resolved to 1e-4."""
        return SearchConfig(coarse_steps=400, kappa_coarse_steps=40, kappa_bisect_tolerance=1e-4)


DEFAULT_SEARCH = SearchConfig.default()


@dataclass(frozen=True)
class ScanRecord:
    scenario: Scenario
    metric: MetricKind
    q: float
    kappa: float
    theta_star: float
    s_value: float
    positive: bool

    def to_row(self) -> Dict:
        return {
            'scenario': self.scenario.value,
            'metric': self.metric.value,
            'q': self.q,
            'kappa': self.kappa,
            'theta_star': self.theta_star,
            's_value': self.s_value,
            'positive': self.positive,
        }


@dataclass(frozen=True)
class ThresholdRecord:
    scenario: Scenario
    metric: MetricKind
    q: float
    # None when S_q(0) is not positive.
    kappa_s: Optional[float]

    def to_row(self) -> Dict:
        return {
            'scenario': self.scenario.value,
            'metric': self.metric.value,
            'q': self.q,
            'kappa_s': self.kappa_s,
        }


def c_q_curve(scenario: Scenario, metric: MetricKind, q: Order, thetas, kappa: float) -> np.ndarray:
    """C_q over an array of theta values at fixed kappa."""
    thetas = np.asarray(thetas, dtype=float)
    check_parameters(thetas, kappa)

    def distance(role: PairRole) -> np.ndarray:
        return metric_table(joint_table(scenario, role, thetas, kappa), q, metric)

    if scenario.is_chsh:
        # D(A,B) against D(A,B') + D(B',A') + D(A',B), all three at theta/3.
        return distance(PairRole.CHSH_AB) - 3.0 * distance(PairRole.CHSH_SMALL_ANGLE)
    # D(X,X'') against D(X,X') + D(X',X''); equidistant intervals make the two equal.
    return distance(PairRole.LG_END_TO_END) - 2.0 * distance(PairRole.LG_ADJACENT)


def c_q(spec: ScenarioSpec, metric: MetricKind, q: Order) -> float:
    """Positive values violate the metric triangle inequality of the scenario."""
    return float(c_q_curve(spec.scenario, metric, q, spec.theta, spec.kappa))


def golden_section_max(f: Callable[[float], float], a: float, b: float,
        tol: float) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of f on [a, b], assumed unimodal there.
    Returns the best point evaluated and its value.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    while h > tol:
        if yc > yd:
            b = d
            d, yd = c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c, yc = d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    if yc > yd:
        return c, yc
    return d, yd


def s_q(scenario: Scenario, metric: MetricKind, q: Order, kappa: float,
        cfg: SearchConfig = DEFAULT_SEARCH) -> Tuple[float, float]:
    """
    Supremum of C_q over theta at fixed kappa: a coarse grid scan followed by
    golden-section refinement between the neighbours of the best grid point.
    Returns (theta_star, s_value).
    """
    thetas = np.linspace(cfg.theta_min, cfg.theta_max, cfg.coarse_steps)
    values = c_q_curve(scenario, metric, q, thetas, kappa)
    best = int(np.argmax(values))
    lo = thetas[max(best - 1, 0)]
    hi = thetas[min(best + 1, len(thetas) - 1)]

    def c_at(theta: float) -> float:
        return float(c_q_curve(scenario, metric, q, theta, kappa))

    theta_star, value = golden_section_max(c_at, lo, hi, cfg.refine_tolerance)
    if value < values[best]:
        return float(thetas[best]), float(values[best])
    return theta_star, value


def kappa_threshold(scenario: Scenario, metric: MetricKind, q: Order,
        cfg: SearchConfig = DEFAULT_SEARCH) -> Optional[float]:
    """
    The largest kappa at which S_q stays above positivity_epsilon: the first non-positive
    point of a coarse kappa grid is bracketed and the boundary bisected.
    Returns None when S_q(0) is not positive, and kappa_max when S_q is positive there.
    Near the threshold the supremum sits at theta_min, so the reported kappa moves with the
    theta_min setting as well as with positivity_epsilon.
    """
    def positive(kappa: float) -> bool:
        return s_q(scenario, metric, q, kappa, cfg)[1] > cfg.positivity_epsilon

    if not positive(0.0):
        logger.info("%s %s q=%s: no violation at kappa=0", scenario.value, metric.value, q)
        return None
    kappas = np.linspace(0.0, cfg.kappa_max, cfg.kappa_coarse_steps + 1)
    lo = 0.0
    for kappa in kappas[1:]:
        if not positive(float(kappa)):
            hi = float(kappa)
            break
        lo = float(kappa)
    else:
        logger.warning("%s %s q=%s: still positive at kappa_max=%s, threshold censored",
            scenario.value, metric.value, q, cfg.kappa_max)
        return cfg.kappa_max

    while hi - lo > cfg.kappa_bisect_tolerance:
        mid = (lo + hi) / 2
        if positive(mid):
            lo = mid
        else:
            hi = mid
    logger.info("%s %s q=%s: kappa_s=%.6g", scenario.value, metric.value, q, lo)
    return lo


def normalized_strength(scenario: Scenario, q: Order, value: float) -> float:
    """A violation expressed in units of ln_q of the number of outcomes."""
    return value / q_log(scenario.outcome_count, q)


def _scan_cell(args) -> ScanRecord:
    scenario, metric, q, kappa, cfg = args
    theta_star, value = s_q(scenario, metric, q, kappa, cfg)
    return ScanRecord(scenario, metric, q, kappa, theta_star, value, value > cfg.positivity_epsilon)


class Scanner:
    """Evaluates S_q(kappa) over a (q, kappa) grid for one scenario and metric."""

    def __init__(self, scenario: Scenario, metric: MetricKind, q_list: Sequence[float],
            kappa_grid: Sequence[float], cfg: SearchConfig = DEFAULT_SEARCH):
        if not q_list or not len(kappa_grid):
            raise ScenarioError("scan needs at least one q and one kappa")
        self.scenario = scenario
        self.metric = metric
        self.q_list = [float(q) for q in q_list]
        self.kappa_grid = [float(k) for k in kappa_grid]
        self.cfg = cfg

    def cells(self) -> List[Tuple]:
        return [(self.scenario, self.metric, q, kappa, self.cfg)
                for q in self.q_list for kappa in self.kappa_grid]

    def run(self) -> Iterator[ScanRecord]:
        """Yields one record per (q, kappa), ordered by q and then kappa."""
        for cell in self.cells():
            record = _scan_cell(cell)
            logger.debug("q=%s kappa=%s S=%.6g", record.q, record.kappa, record.s_value)
            yield record

    def run_all(self, workers: int = 1) -> List[ScanRecord]:
        """
        Executes the whole scan. With workers > 1 the cells are evaluated in a process pool;
        records are returned in the same (q, kappa) order either way.
        """
        if workers <= 1:
            return list(self.run())
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_cell, self.cells()))


def scan(scenario: Scenario, metric: MetricKind, q_list: Sequence[float], kappa_grid: Sequence[float],
        cfg: SearchConfig = DEFAULT_SEARCH, workers: int = 1) -> List[ScanRecord]:
    return Scanner(scenario, metric, q_list, kappa_grid, cfg).run_all(workers)


def threshold_table(scenario: Scenario, metric: MetricKind, q_list: Sequence[float],
        cfg: SearchConfig = DEFAULT_SEARCH) -> List[ThresholdRecord]:
    return [ThresholdRecord(scenario, metric, float(q), kappa_threshold(scenario, metric, q, cfg))
            for q in q_list]
