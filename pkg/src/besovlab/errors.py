"""Exception types shared across the toolkit."""


class BesovlabError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameter(BesovlabError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ScaleOutOfRange(BesovlabError, ValueError):
    """A convolution scale would push the kernel spectrum past Nyquist."""


class AliasingRisk(BesovlabError, RuntimeError):
    """A grid operation would silently alias out-of-band spectral content."""


class QuadratureInaccurate(BesovlabError, RuntimeError):
    """A space-domain quadrature could not meet its accuracy target."""


class DegenerateProfile(BesovlabError, RuntimeError):
    """Too few usable points remain in a scale profile to fit an exponent."""


class InvalidPair(BesovlabError, ValueError):
    """A kernel pair failed its compatibility verification."""


class FormatError(BesovlabError, ValueError):
    """An input file could not be parsed; carries location info."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NonPowerOfTwo(FormatError):
    """Sample count is not a power of two."""

    def __init__(self, n):
        super().__init__(f"sample count {n} is not a power of two")
        self.n = n
