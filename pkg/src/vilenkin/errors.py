"""Exception hierarchy shared by every module of the package."""


class VilenkinError(Exception):
    """Base class for all package errors."""


class InvalidOperandError(VilenkinError, ValueError):
    """Operands disagree on modulus or side, or carry out-of-range digits."""


class InvalidLengthError(VilenkinError, ValueError):
    """A vector length is not an exact power of the modulus."""


class InvalidMaskError(VilenkinError, ValueError):
    """Mask coefficient vector has the wrong length."""


class NonconvergentProductError(VilenkinError):
    """The infinite spectral product does not terminate (m(theta) != 1)."""


class CascadeDivergenceError(VilenkinError):
    """Cascade iterates blew up in L2 norm."""


class ResolutionError(VilenkinError, ValueError):
    """A digit window is too small for the requested computation."""


class NotApplicableError(VilenkinError):
    """Hypotheses of a theorem-level check are not met."""


class DegenerateFilterError(VilenkinError):
    """The low-pass component does not have unit modulus at the zero coset."""


class ParseError(VilenkinError, ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
