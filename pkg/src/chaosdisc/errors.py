class ChaosDiscError(Exception):
    """Base class for library errors."""


class OutOfRange(ChaosDiscError, ValueError):
    """A constructed partner state would leave the colatitude range [0, pi]."""


class DegenerateImage(ChaosDiscError, ArithmeticError):
    """The homogeneous map sent a state to (0, 0)."""

    def __init__(self, message: str, iteration: int | None = None, index: int | None = None):
        super().__init__(message)
        self.iteration = iteration
        self.index = index


class ZeroVariance(ChaosDiscError, ArithmeticError):
    """Pearson correlation requested for a sample with no spread."""


class NotReached(ChaosDiscError):
    """A threshold criterion was never met within the available series."""


class InsufficientOccupancy(ChaosDiscError, ValueError):
    """Box counting found an empty scale."""


class PostSelectionNull(ChaosDiscError, ArithmeticError):
    """Post-selection annihilated the state."""
