"""Exception hierarchy shared by the library and the CLI."""


class SigmaBoundsError(Exception):
    """Base class for all errors raised by sigma_bounds."""


class ShapeError(SigmaBoundsError, ValueError):
    """Operand dimensions do not match."""


class DegenerateInputError(SigmaBoundsError, ValueError):
    """The bound is undefined for this input (e.g. the all-zero matrix)."""


class TheoremInapplicableError(SigmaBoundsError):
    """The walk-total lower bound does not apply because sum(AA*) == 0.

    In that case the all-ones vector lies in the null space of AA*, every
    walk total w^r with r >= 1 vanishes, and the ratio w^{r+p}/w^r is 0/0.
    """

    def __init__(self, message, entry_sum=0.0, gram_ones_residual=0.0):
        super().__init__(message)
        self.entry_sum = entry_sum
        self.gram_ones_residual = gram_ones_residual


class PartitionError(SigmaBoundsError, ValueError):
    """A block partition does not cover the matrix index ranges."""


class MatrixMarketError(SigmaBoundsError, ValueError):
    """Malformed Matrix Market input."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ConfigError(SigmaBoundsError, ValueError):
    """Invalid run configuration or generator specification."""
