"""Exception types shared across the package."""


class DickeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DickeError):
    """An input lies outside its allowed domain; the message names the field."""


class ConvergenceError(DickeError):
    """An iterative solver failed to bracket or converge."""


class DimensionError(DickeError):
    """A requested Hilbert space exceeds the supported size."""


class HermiticityError(DickeError):
    """A constructed Hamiltonian failed its Hermiticity check."""


class TruncationError(DickeError):
    """The boson cutoff could not be grown enough to stabilize the free energy."""


class CommutationError(DickeError):
    """Operators expected to commute failed the numerical commutation check."""
