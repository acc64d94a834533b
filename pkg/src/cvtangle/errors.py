"""Exception types raised across the package.

Errors fall into two families: bad input (rejected matrices, cuts or
parameters) and numerical trouble (eigensolves or optimizers that did not
converge).  The CLI maps the former to exit code 1 and the latter to 2.
"""


class GaussianStateError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(GaussianStateError):
    """Matrix is not 2N x 2N or disagrees with the declared mode count."""


class AsymmetricMatrix(GaussianStateError):
    """Matrix entries are asymmetric beyond the accepted tolerance."""


class IndexOutOfRange(GaussianStateError):
    """A mode index does not exist in the given state."""


class UnsupportedCut(GaussianStateError):
    """The requested bipartition is outside the operation's validity domain."""


class NotPure(GaussianStateError):
    """Operation requires a pure state but the input is mixed."""


class NotSymmetricState(GaussianStateError):
    """Operation requires a symmetric two-mode state (equal local dets)."""


class NonPositiveDeterminant(GaussianStateError):
    """det(sigma) <= 0: the matrix cannot describe a physical state."""


class TriangleViolation(GaussianStateError):
    """Local mixednesses violate the three-mode purity triangle inequality."""


class RegionViolation(GaussianStateError):
    """Parameters fall outside the admissible (a, s, d) region."""


class NoSolution(GaussianStateError):
    """A constrained state construction failed to converge."""


class NumericalFailure(GaussianStateError):
    """An eigensolve or other numerical kernel failed to produce a result."""


class OptimizerFailure(NumericalFailure):
    """The constrained minimizer found no certified optimum.

    ``best_value`` carries the best feasible bound found, if any.
    """

    def __init__(self, message: str, best_value: float | None = None):
        super().__init__(message)
        self.best_value = best_value
