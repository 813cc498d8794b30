class QMetricError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QMetricError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class DistributionError(QMetricError, ValueError):
    """A probability vector or joint distribution failed validation."""


class ScenarioError(QMetricError, ValueError):
    """Invalid physical parameters: angles, decoherence ratios, states or channels."""


class UsageError(ScenarioError):
    """A combination of arguments that no scenario supports, e.g. a CHSH role on an LG setup."""


class NonMetricWarning(UserWarning):
    """Issued when a q-distance is evaluated for q < 1, where it is not a metric."""
