"""Exception and warning types shared across the package."""


class RmtlabError(Exception):
    """Base class for all package errors."""


# panel
class NonPositivePrice(RmtlabError):
    def __init__(self, row, col):
        super().__init__(f"non-positive price at row {row}, column {col}")
        self.row = row
        self.col = col


class TooShort(RmtlabError):
    """Fewer than two time steps."""


class ZeroVariance(RmtlabError):
    def __init__(self, row):
        super().__init__(f"row {row} has zero variance")
        self.row = row


class LagTooLarge(RmtlabError):
    """Requested lag is not smaller than the horizon."""


# models
class BadCoefficient(RmtlabError):
    """Correlation coefficient outside its admissible range."""


class NotPositiveDefinite(RmtlabError):
    def __init__(self, detail):
        # a number is reported as the offending eigenvalue; anything
        # else is taken as a ready-made message
        if isinstance(detail, (int, float)):
            super().__init__(f"matrix is not positive definite "
                             f"(smallest eigenvalue {detail:.6e})")
            self.min_eigenvalue = detail
        else:
            super().__init__(str(detail))
            self.min_eigenvalue = None


class DimensionMismatch(RmtlabError):
    """Inputs are not conformable."""


# ensembles
class BadDimensions(RmtlabError):
    """Ensemble dimensions violate the required ordering or positivity."""


# pastur
class BadParameters(RmtlabError):
    """Scalar parameters outside their admissible domain."""


class BadSpectrum(RmtlabError):
    """Population spectrum contains non-positive or non-finite entries."""


class GridTooCoarse(RmtlabError):
    """Too few grid points for finite differences."""


class NoConvergence(RmtlabError):
    def __init__(self, point, residual):
        super().__init__(f"no convergence at lambda={point:.6g} "
                         f"(residual {residual:.3e})")
        self.point = point
        self.residual = residual


class BranchAmbiguity(RmtlabError):
    def __init__(self, point):
        super().__init__(f"no admissible inner branch at lambda={point:.6g}")
        self.point = point


# fluctuations
class EmptyWindow(RmtlabError):
    """Fewer than two eigenvalues inside the analysis window."""


class NonMonotoneDensityIntegral(RmtlabError):
    """Cumulative density decreases; the density input is invalid."""


class WindowTooNarrow(RmtlabError):
    def __init__(self, r):
        super().__init__(f"window does not fit an interval of length r={r}")
        self.r = r


class DomainError(RmtlabError):
    """Argument outside the function domain."""


class OutsideSupport(RmtlabError):
    """Evaluation point lies outside the spectral support."""


# powermap
class BadExponent(RmtlabError):
    """Power-map exponent below 1."""


class EntryOutOfRange(RmtlabError):
    """Matrix entry outside [-1, 1]."""


# portfolio
class SingularCovariance(RmtlabError):
    """Covariance matrix not invertible at working precision."""


# warnings (conditions the caller may want to act on, not failures)
class NotSingular(UserWarning):
    """Power-mapped matrix has no zero modes (T >= N); emerging set empty."""


class AlphaTooLarge(UserWarning):
    """Measured moments deviate from linear response by more than 20%."""
