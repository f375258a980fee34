"""Exception hierarchy shared by every module of the toolkit."""


class BernsteinError(Exception):
    """Base class for all toolkit errors."""


class InputError(BernsteinError, ValueError):
    """Invalid parameters, malformed specs or unreadable input files."""


class DegenerateGeneratorError(InputError):
    """The Gram function of a generator vanishes (no Riesz basis)."""


class UnsupportedGeneratorError(InputError):
    """The requested operation is not available for this generator."""


class DivergentSeriesError(BernsteinError):
    """A weighted periodization sum does not converge for the given order."""


class ConvergenceError(BernsteinError):
    """A truncation or quadrature loop hit its cap before meeting tolerance."""

    def __init__(self, message, last_values=None):
        super().__init__(message)
        self.last_values = last_values
