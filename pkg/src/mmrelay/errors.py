"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A model parameter is outside its admissible domain."""


class InvalidGeometryError(InvalidParameterError):
    """Link geometry cannot produce a two-ray channel."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or certify its result.

    Attributes:
        best: the best solution found before giving up, if any.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
