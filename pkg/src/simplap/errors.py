"""Exception types shared across the package."""


class SimplapError(Exception):
    """Base class for all package-specific errors."""


class InvalidSimplexError(SimplapError, ValueError):
    """A simplex description is malformed (empty, bad vertex ids)."""


class NotFoundError(SimplapError, KeyError):
    """A simplex is not present in the complex."""


class InvalidWeightError(SimplapError, ValueError):
    """A weight vector has the wrong shape or a non-positive entry."""


class IncompatibleWeightsError(SimplapError, ValueError):
    """Two weighted complexes disagree on the weight of a shared simplex."""


class DegenerateInputError(SimplapError, ValueError):
    """Point data unusable for triangulation (duplicates, collinear, non-finite)."""


class NumericError(SimplapError, ArithmeticError):
    """A numeric routine received non-finite or non-symmetric data."""


class InsufficientSpectrumError(SimplapError, ValueError):
    """Fewer nonzero eigenvalues exist than were requested."""


class MultiplicityError(SimplapError, ValueError):
    """Eigenvalue too close to its neighbours for a well-defined gradient."""


class FlipDetectedError(SimplapError, ValueError):
    """A finite-difference probe stepped across a triangulation change."""


class ParameterError(SimplapError, ValueError):
    """A numeric parameter is out of its valid range."""


class ConstructionError(SimplapError, RuntimeError):
    """A generated instance failed its own validity conditions."""
