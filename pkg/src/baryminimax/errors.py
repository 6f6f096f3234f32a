"""Exception hierarchy shared by all modules."""


class MinimaxError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(MinimaxError, ValueError):
    """Invalid shapes, lengths or values passed to an operation."""


class SingularMatrixError(MinimaxError):
    """A triangular factor has a diagonal entry below the singularity floor."""

    def __init__(self, index, magnitude, floor):
        self.index = index
        self.magnitude = magnitude
        self.floor = floor
        super().__init__(
            f"diagonal entry {index} has modulus {magnitude:.3e} "
            f"below singularity floor {floor:.3e}"
        )


class DegeneratePencilError(MinimaxError):
    """The generalized eigenproblem has no finite smallest eigenvalue."""


class ConditioningError(MinimaxError):
    """A basis matrix is numerically rank deficient."""

    def __init__(self, message, condition=float("inf")):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class PreconditionError(MinimaxError):
    """An operation's documented precondition does not hold."""


class PoleError(MinimaxError):
    """The denominator vanishes at an evaluation point."""

    def __init__(self, x, index=None):
        self.x = x
        self.index = index
        where = f" (node index {index})" if index is not None else ""
        super().__init__(f"denominator vanishes at x={x!r}{where}")


class ExactFit(Exception):
    """Raised by the weight update when every weighted residual is zero.

    Not an error: the driver treats it as converged.
    """
