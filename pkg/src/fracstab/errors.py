"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`FracstabError`; the CLI maps the subclasses onto exit codes.
"""


class FracstabError(Exception):
    """Base class for all package errors."""


class ParameterError(FracstabError, ValueError):
    """A model or function parameter is outside its admissible set."""


class DomainError(FracstabError, ValueError):
    """An argument is outside the domain of the operation (t < 0, theta < 0, ...)."""


class PreconditionError(FracstabError, ValueError):
    """A documented precondition does not hold for the given input."""


class ResolutionError(FracstabError, ValueError):
    """A sampling grid is too coarse for the requested truncation."""


class PairingError(FracstabError, ValueError):
    """A state and an operator disagree on the truncation level."""


class GridError(FracstabError, ValueError):
    """A time grid is unsorted, non-uniform or otherwise unusable."""


class RangeError(FracstabError, ValueError):
    """A query time lies outside the horizon of a trace."""


class DegenerateDataError(FracstabError, ValueError):
    """Data cannot support the requested fit (zero norms, too short a window)."""


class UnsupportedStructureError(FracstabError, ValueError):
    """The requested operator structure is not modelled (e.g. non-diagonal B)."""


class NotStabilizableError(FracstabError):
    """No admissible feedback moves the spectrum into the stable half-line."""


class NumericError(FracstabError, ArithmeticError):
    """A numerical procedure (quadrature, series) failed to reach its tolerance."""


class ConfigError(FracstabError, ValueError):
    """An experiment configuration failed validation.

    ``messages`` carries every problem found, not just the first.
    """

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))
