"""Exception types shared across the package."""


class FrugalError(Exception):
    """Base class for all errors raised by frugalml."""


class ParseError(FrugalError, ValueError):
    """Malformed evaluation CSV input."""


class DecodeError(FrugalError, ValueError):
    """Remote JSON payload does not match the record schema."""


class TransportError(FrugalError, OSError):
    """Network failure or timeout while fetching remote records."""


class PreconditionError(FrugalError, ValueError):
    """An operation was called on input that violates its preconditions."""


class ConfigError(FrugalError, ValueError):
    """Invalid configuration value."""


class DomainError(FrugalError, ValueError):
    """Numeric argument outside the domain of a formula."""


class LoadError(FrugalError, ValueError):
    """A tabular dataset could not be loaded."""


class MetricError(FrugalError, ValueError):
    """A metric is undefined for the given labels."""


class ProtocolError(FrugalError, ValueError):
    """An evaluation protocol cannot be applied to a dataset."""
