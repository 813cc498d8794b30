"""
Tsallis q-entropies of finite discrete distributions, their two conditional forms,
the mutual q-information and the two q-distances built from the conditional forms.

All entropies are in nats. The Shannon case q = 1 is evaluated on its own branch.
"""
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import entr

from .consts import NEGATIVE_TOLERANCE, SHANNON_Q_TOLERANCE, SUM_TOLERANCE
from .errors import DistributionError, DomainError, NonMetricWarning


@dataclass(frozen=True)
class EntropyOrder:
    """The entropic parameter q > 0."""
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q > 0):
            raise DomainError(f"entropic parameter must be positive and finite, got {self.q}")

    @property
    def is_shannon(self) -> bool:
        return abs(self.q - 1.0) < SHANNON_Q_TOLERANCE


Order = Union[float, EntropyOrder]


class MetricKind(Enum):
    # Sum of the two chain-form conditional entropies.
    DELTA = "delta"
    # Sum of the two average-form conditional entropies.
    DTILDE = "dtilde"


class Direction(Enum):
    X_GIVEN_Y = "x|y"
    Y_GIVEN_X = "y|x"


def _order(q: Order) -> EntropyOrder:
    if isinstance(q, EntropyOrder):
        return q
    return EntropyOrder(float(q))


def _validated(values, shape_hint: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.size == 0:
        raise DistributionError(f"{shape_hint} is empty")
    if not np.all(np.isfinite(arr)):
        raise DistributionError(f"{shape_hint} has non-finite entries")
    if arr.min() < -NEGATIVE_TOLERANCE:
        raise DistributionError(f"{shape_hint} has negative entry {arr.min()}")
    arr = np.clip(arr, 0.0, None)
    total = arr.sum()
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise DistributionError(f"{shape_hint} sums to {total}, not 1")
    arr = arr / total
    arr.setflags(write=False)
    return arr


def _labels(labels: Optional[Sequence], n: int) -> Tuple:
    if labels is None:
        return tuple(range(n))
    labels = tuple(labels)
    if len(labels) != n:
        raise DistributionError(f"alphabet has {len(labels)} labels for {n} outcomes")
    return labels


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    probs: np.ndarray
    alphabet: Tuple

    @staticmethod
    def of(probs: Sequence[float], alphabet: Optional[Sequence] = None) -> "ProbabilityVector":
        """Validates and wraps a distribution. Tiny negative entries are clamped and the rest renormalized."""
        arr = _validated(probs, "probability vector")
        if arr.ndim != 1:
            raise DistributionError(f"probability vector must be one-dimensional, got shape {arr.shape}")
        return ProbabilityVector(arr, _labels(alphabet, arr.size))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint probabilities p(x, y): rows are indexed by X outcomes and columns by Y outcomes."""
    matrix: np.ndarray
    x_alphabet: Tuple
    y_alphabet: Tuple

    @staticmethod
    def of(matrix, x_alphabet: Optional[Sequence] = None,
            y_alphabet: Optional[Sequence] = None) -> "JointDistribution":
        arr = _validated(matrix, "joint distribution")
        if arr.ndim != 2:
            raise DistributionError(f"joint distribution must be a matrix, got shape {arr.shape}")
        return JointDistribution(arr, _labels(x_alphabet, arr.shape[0]), _labels(y_alphabet, arr.shape[1]))

    def x_marginal(self) -> ProbabilityVector:
        return ProbabilityVector.of(self.matrix.sum(axis=1), self.x_alphabet)

    def y_marginal(self) -> ProbabilityVector:
        return ProbabilityVector.of(self.matrix.sum(axis=0), self.y_alphabet)

    def transpose(self) -> "JointDistribution":
        m = self.matrix.T.copy()
        m.setflags(write=False)
        return JointDistribution(m, self.y_alphabet, self.x_alphabet)


def _joint(j) -> JointDistribution:
    if isinstance(j, JointDistribution):
        return j
    return JointDistribution.of(j)


def _terms(p: np.ndarray, order: EntropyOrder) -> np.ndarray:
    """Elementwise p * ln_q(1/p), with zero-probability cells contributing 0."""
    if order.is_shannon:
        return entr(p)
    q = order.q
    positive = p > 0
    safe = np.where(positive, p, 1.0)
    return np.where(positive, safe * np.expm1((q - 1.0) * np.log(safe)) / (1.0 - q), 0.0)


def q_log(xi: float, q: Order) -> float:
    """The q-logarithm (xi^(1-q) - 1) / (1 - q); the natural logarithm at q = 1."""
    order = _order(q)
    if not (math.isfinite(xi) and xi > 0):
        raise DomainError(f"q-logarithm needs a positive argument, got {xi}")
    if order.is_shannon:
        return math.log(xi)
    return math.expm1((1.0 - order.q) * math.log(xi)) / (1.0 - order.q)


def tsallis_entropy(p: Union[ProbabilityVector, Sequence[float]], q: Order) -> float:
    order = _order(q)
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector.of(p)
    return float(_terms(p.probs, order).sum())


def _conditional_pairs(arr: np.ndarray, order: EntropyOrder, chain: bool) -> np.ndarray:
    """
    Conditional entropy of the last axis given the second-to-last axis, for a stack
    of joints laid out as (..., given, target).
    Zero-weight conditioning outcomes are skipped.
    """
    arr = np.ascontiguousarray(arr, dtype=float)
    weights = arr.sum(axis=-1, keepdims=True)
    cond = np.divide(arr, weights, out=np.zeros_like(arr), where=weights > 0)
    per_outcome = _terms(cond, order).sum(axis=-1)
    weights = weights[..., 0]
    if chain and not order.is_shannon:
        weights = weights ** order.q
    return (weights * per_outcome).sum(axis=-1)


def _conditional(j: JointDistribution, order: EntropyOrder, direction: Direction, chain: bool) -> float:
    # Lay out as (given, target) so that X|Y of j and Y|X of j's transpose do the same arithmetic.
    if direction is Direction.X_GIVEN_Y:
        arr = j.matrix.T
    else:
        arr = j.matrix
    return float(_conditional_pairs(arr, order, chain))


def conditional_entropy_chain(j: JointDistribution, q: Order,
        direction: Direction = Direction.X_GIVEN_Y) -> float:
    """Sum over conditioning outcomes y of p(y)^q H_q(X|y). Obeys the chain rule."""
    return _conditional(_joint(j), _order(q), direction, chain=True)


def conditional_entropy_avg(j: JointDistribution, q: Order,
        direction: Direction = Direction.X_GIVEN_Y) -> float:
    """Sum over conditioning outcomes y of p(y) H_q(X|y). Does not obey the chain rule."""
    return _conditional(_joint(j), _order(q), direction, chain=False)


def joint_entropy(j: JointDistribution, q: Order) -> float:
    j = _joint(j)
    return float(_terms(j.matrix.ravel(), _order(q)).sum())


def mutual_information(j: JointDistribution, q: Order) -> float:
    """H_q(X) - H_q(X|Y) with the chain-form conditional entropy."""
    j = _joint(j)
    order = _order(q)
    return tsallis_entropy(j.x_marginal(), order) - _conditional(j, order, Direction.X_GIVEN_Y, chain=True)


def _warn_non_metric(order: EntropyOrder):
    if order.q < 1.0 and not order.is_shannon:
        warnings.warn(f"q = {order.q} < 1: the q-distance is not a metric in this regime",
            NonMetricWarning, stacklevel=3)


def metric(j: JointDistribution, q: Order, kind: MetricKind) -> float:
    """
    Information distance H_q(X|Y) + H_q(Y|X).
    DELTA uses the chain-form conditional entropies, DTILDE the average form.
    For q < 1 the value is returned together with a NonMetricWarning.
    """
    j = _joint(j)
    order = _order(q)
    _warn_non_metric(order)
    chain = kind is MetricKind.DELTA
    return (_conditional(j, order, Direction.X_GIVEN_Y, chain)
            + _conditional(j, order, Direction.Y_GIVEN_X, chain))


def metric_table(joints: np.ndarray, q: Order, kind: MetricKind) -> np.ndarray:
    """
    Distances for a stack of joints of shape (..., nx, ny); returns shape (...).
    Inputs are assumed to be valid distributions: this is the fast path for closed-form scans.
    """
    order = _order(q)
    _warn_non_metric(order)
    chain = kind is MetricKind.DELTA
    joints = np.asarray(joints, dtype=float)
    x_given_y = _conditional_pairs(np.swapaxes(joints, -1, -2), order, chain)
    y_given_x = _conditional_pairs(joints, order, chain)
    return x_given_y + y_given_x


# Multi-variable forms over an n-dimensional joint table.

def _table(table) -> np.ndarray:
    return _validated(table, "joint table")


def _axes(axes, ndim: int) -> Tuple[int, ...]:
    return tuple(sorted(a % ndim for a in axes))


def marginal(table, keep: Sequence[int]) -> np.ndarray:
    """Marginal of a joint table over the axes in `keep`, in their original order."""
    t = np.asarray(table, dtype=float)
    keep = _axes(keep, t.ndim)
    drop = tuple(a for a in range(t.ndim) if a not in keep)
    return t.sum(axis=drop)


def table_entropy(table, q: Order) -> float:
    return float(_terms(_table(table).ravel(), _order(q)).sum())


def _table_conditional(table, q: Order, given: Sequence[int], chain: bool) -> float:
    t = _table(table)
    order = _order(q)
    given = _axes(given, t.ndim)
    target = tuple(a for a in range(t.ndim) if a not in given)
    if not target:
        raise DistributionError("conditional entropy needs at least one target axis")
    weights = t.sum(axis=target, keepdims=True)
    cond = np.divide(t, weights, out=np.zeros_like(t), where=weights > 0)
    per_outcome = _terms(cond, order).sum(axis=target, keepdims=True)
    if chain and not order.is_shannon:
        weights = weights ** order.q
    return float((weights * per_outcome).sum())


def chain_conditional(table, q: Order, given: Sequence[int]) -> float:
    """Chain-form conditional entropy of the non-`given` axes of a joint table given the `given` axes."""
    return _table_conditional(table, q, given, chain=True)


def avg_conditional(table, q: Order, given: Sequence[int]) -> float:
    """Average-form conditional entropy of the non-`given` axes of a joint table given the `given` axes."""
    return _table_conditional(table, q, given, chain=False)
