"""Exception hierarchy shared by all anisofield modules."""


class AnisofieldError(Exception):
    """Base class for all errors raised by this package."""


# --- filter construction -------------------------------------------------

class OrderZero(AnisofieldError):
    """Coefficients do not sum to zero, so the filter has order 0."""


class AllMomentsVanish(AnisofieldError):
    """Every tested moment is below tolerance; the filter is degenerate."""


# --- spectral models ------------------------------------------------------

class ZeroFrequency(AnisofieldError):
    """Spectral density evaluated at the origin, where it is singular."""


class QuadratureFailure(AnisofieldError):
    """Adaptive quadrature stalled above the requested tolerance."""


# --- random generation ----------------------------------------------------

class EmbeddingNotPSD(AnisofieldError):
    """Circulant embedding kept negative eigenvalues after doubling."""


# --- projections ----------------------------------------------------------

class WindowOutOfSupport(AnisofieldError):
    """Projection window support exceeds the grid footprint."""


# --- estimators -----------------------------------------------------------

class PathTooShort(AnisofieldError):
    """Sampled path has fewer points than the variation sum needs."""


class ZeroVariation(AnisofieldError):
    """A quadratic variation vanished, so its log-ratio is undefined."""


class EqualDilations(AnisofieldError):
    """Dilation factors u and v must differ for a log-ratio estimate."""


class GridTooCoarse(AnisofieldError):
    """Subsampled grid is too short for the requested estimator."""


# --- asymptotic constants ---------------------------------------------------

class OrderTooLow(AnisofieldError):
    """Filter order is too small for the requested constant to be finite."""


class TailNotConverged(AnisofieldError):
    """Series truncation error could not be certified below tolerance."""


class NegativeVariance(AnisofieldError):
    """Composed limit variance came out negative; quadrature is suspect."""


# --- evaluation harness -----------------------------------------------------

class TooManyFailures(AnisofieldError):
    """More than the tolerated share of Monte Carlo replicates errored."""
