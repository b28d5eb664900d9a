"""Exception hierarchy shared across the package."""


class GaugebenchError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GaugebenchError):
    """A basis spec, model parameter set, or sweep config is invalid."""


class DomainError(GaugebenchError):
    """An argument is outside the mathematical domain of an operation."""


class DimensionCapError(GaugebenchError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class NumericalError(GaugebenchError):
    """An iterative solver failed to converge within its iteration budget."""


class ConsistencyError(GaugebenchError):
    """An internal invariant was violated (signals a builder or solver bug)."""
