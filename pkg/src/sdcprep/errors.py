"""Exception types shared across the package."""


class SdcError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionMismatch(SdcError):
    """Operands have incompatible shapes."""


class NotSquare(SdcError):
    """A square matrix was required."""


class NotHermitian(SdcError):
    """Input is not Hermitian within the requested tolerance."""


class ConvergenceFailure(SdcError):
    """An iterative routine exhausted its sweep budget."""


class BadLength(SdcError):
    """An amplitude sequence has the wrong number of entries."""


class NotNormalized(SdcError):
    """Amplitudes violate the declared normalization.

    ``deviation`` holds |sum of squared moduli - expected total|.
    """

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


class ParseError(SdcError):
    """A state file is malformed; the message names the offending field."""


class InfeasibleShared(SdcError):
    """The shared state puts no weight on a column the target needs."""


class NotSingleViolation(SdcError):
    """The pairwise bound requires exactly one violating column pair."""


class ZeroColumn(SdcError):
    """A column involved in the pairwise bound has zero norm."""


class ZeroOperator(SdcError):
    """Kraus construction needs a nonzero operation."""


class NegativeEigenvalue(SdcError):
    """I - E0^dag E0 came out indefinite beyond tolerance."""


class ZeroProbabilityBranch(SdcError):
    """The requested measurement branch has (near-)zero probability."""


class DimensionTooLarge(SdcError):
    """Exhaustive grid search is limited to small local dimension."""
