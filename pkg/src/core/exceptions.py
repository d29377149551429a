"""Custom exceptions for the Levy heat-kernel laboratory."""


class LevyLabException(Exception):
    """Base exception for all application exceptions."""

    pass


class ConfigException(LevyLabException):
    """Exception raised for errors in the configuration."""

    pass


class NumericalException(LevyLabException):
    """Exception raised when a numerical procedure cannot deliver a result."""

    pass


class QuadratureError(NumericalException):
    """Exception raised when an adaptive quadrature misses its tolerance."""

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(message)
        self.achieved = achieved


class DivergentMoment(NumericalException):
    """Exception raised when an exponential moment of the Levy measure diverges."""

    pass


class OutOfRange(NumericalException):
    """Exception raised when a value lies outside the range of Psi."""

    pass


class AliasingError(NumericalException):
    """Exception raised when a grid convolution loses mass beyond tolerance."""

    pass


class GridMismatch(NumericalException):
    """Exception raised when two fields live on different grids."""

    pass


class InsufficientDecay(NumericalException):
    """Exception raised when a transform has not decayed at the Nyquist shell."""

    pass


class FarFieldRefused(NumericalException):
    """Exception raised when a far-field point cannot be certified."""

    pass


class ExporterException(LevyLabException):
    """Exception raised for errors in the exporter."""

    pass


class StorageException(LevyLabException):
    """Exception raised for errors in the storage."""

    pass
