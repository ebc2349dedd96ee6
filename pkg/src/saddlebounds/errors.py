"""Exception and warning types shared across the package."""


class SaddleBoundsError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteError(SaddleBoundsError):
    """Input contains NaN or Inf entries."""


class ConvergenceError(SaddleBoundsError):
    """A dense eigenvalue or singular value iteration failed to converge."""


class DimensionMismatchError(SaddleBoundsError):
    """Operands have incompatible or empty shapes."""


class EmptySubspaceError(SaddleBoundsError):
    """Principal angles require two subspaces of dimension at least one."""


class ProblemValidationError(SaddleBoundsError):
    """A saddle problem violates one of its structural invariants."""


class NotPositiveSemidefiniteError(ProblemValidationError):
    """The leading block has an eigenvalue below the semidefinite tolerance."""


class RankDeficientError(ProblemValidationError):
    """The constraint block is not full row rank within tolerance."""


class SingularKError(ProblemValidationError):
    """The assembled saddle matrix is numerically singular."""


class AugmentedBlockSingularError(SaddleBoundsError):
    """A + B^T W B is not positive definite, so W fails to regularize A."""


class RankAssumptionError(SaddleBoundsError):
    """Operation needs the lowest-rank case rank(A) = n - m."""


class RankTooLowError(SaddleBoundsError):
    """rank(A) < n - m, which forces the saddle matrix to be singular."""


class ZeroAngleError(SaddleBoundsError):
    """Minimum principal angle is numerically zero; no finite optimal gamma."""


class ParameterOutOfRangeError(SaddleBoundsError):
    """A parameter lies outside its documented domain."""


class InfeasibleDimensionsError(SaddleBoundsError):
    """The prescribed-angle construction needs n >= 2m."""


class GenerationFailedError(SaddleBoundsError):
    """A seeded generator exhausted its retry budget or failed a post check."""


class SingularAugmentedError(SaddleBoundsError):
    """The augmented saddle matrix is numerically singular; the inverse
    identity is undefined for this weight."""


class SizeCapError(SaddleBoundsError):
    """The problem exceeds the dense oracle size cap."""


class ParseError(SaddleBoundsError):
    """Malformed Matrix Market input.

    Carries the 1-based line number and, when a specific token is at
    fault, the 1-based character column where it starts.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class StructureError(SaddleBoundsError):
    """Ingested matrices violate the saddle-point block structure."""


class DegenerateSplitWarning(UserWarning):
    """The spectral split boundary falls on a repeated eigenvalue, so the
    retained subspace is not uniquely determined."""
