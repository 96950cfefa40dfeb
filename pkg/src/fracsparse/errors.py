"""Exception types raised by fracsparse."""


class FracSparseError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(FracSparseError, ValueError):
    pass


class UnsupportedBranchError(FracSparseError, ValueError):
    """The FrFT order sits on a delta branch (theta = n*pi)."""


class InsufficientSamplesError(FracSparseError, ValueError):
    """Fewer than 2*K*M samples were supplied."""


class NoisyRootsError(FracSparseError):
    """A root of the annihilating polynomial has a large imaginary part."""

    def __init__(self, message, root):
        super().__init__(message)
        self.root = root


class DegenerateConfigurationError(FracSparseError):
    pass


class PoleError(FracSparseError, ValueError):
    """Lattice sum evaluated at (or too close to) an integer."""


class CaptureFormatError(FracSparseError, ValueError):
    """Malformed iq-csv capture file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(FracSparseError, ValueError):
    pass
