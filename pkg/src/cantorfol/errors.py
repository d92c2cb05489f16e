"""Exception types shared by the evaluators."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DepthLimitError(DomainError):
    """A Cantor stage exceeds what the fixed-width integer layout can index."""


class ConvergenceError(ArithmeticError):
    """Bisection ran out of iterations before the bracket closed.

    ``lo`` and ``hi`` hold the final bracket of every element that failed.
    """

    def __init__(self, message, lo, hi):
        super().__init__(f"{message} (final bracket lo={lo!r}, hi={hi!r})")
        self.lo = lo
        self.hi = hi
