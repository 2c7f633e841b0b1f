"""Exception hierarchy shared across the package.

The CLI maps InputFormatError to exit code 2 (malformed input) and every
other CalculusError to exit code 1 (domain error).
"""


class CalculusError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidSizeError(CalculusError):
    """A size argument is out of the supported range (e.g. matrix size < 2)."""


class InvalidParameterError(CalculusError):
    """A numeric parameter is outside its domain (e.g. deformation parameter 0)."""


class SizeMismatchError(CalculusError):
    """Operands have incompatible shapes."""


class FrameMismatchError(CalculusError):
    """Forms built over different derivation frames were combined."""


class NotInvertibleError(CalculusError):
    """A gauge element failed the invertibility (condition number) guard."""


class NotFlatError(CalculusError):
    """A connection required to be flat has nonzero curvature."""


class CapExceededError(CalculusError):
    """A configurable size/degree cap would be exceeded."""


class InputFormatError(CalculusError):
    """Malformed external input (JSON schema violation, bad polynomial syntax)."""
