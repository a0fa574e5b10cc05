"""Exception types shared across the package."""


class SpikeCrossError(Exception):
    """Base class for all package-specific errors."""


class DataFormatError(SpikeCrossError):
    """File content violates the expected binary layout (bad magic, zero count, ...)."""


class TruncatedFileError(SpikeCrossError, OSError):
    """File ended before the payload declared by its header."""


class UnsupportedShapeError(SpikeCrossError):
    """Image dimensions differ from the 28x28 the network is wired for."""


class ConfigurationError(SpikeCrossError):
    """Invalid or unknown configuration value."""


class UnknownKeyError(ConfigurationError):
    """Configuration key that no schema entry claims."""

    def __init__(self, key):
        self.key = key
        super().__init__(f"unknown configuration key: {key!r}")


class DomainError(SpikeCrossError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(SpikeCrossError, ValueError):
    """Non-finite value reached a numeric kernel."""


class LabelingError(SpikeCrossError):
    """Labeling pass produced no usable neuron labels (degenerate network)."""


class SimulationInvariantError(SpikeCrossError):
    """A runtime invariant of the simulation kernel was violated."""
