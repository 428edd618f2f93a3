"""Exception hierarchy shared across the package."""


class GratisError(Exception):
    """Base class for all package-specific errors."""


class InsufficientHistory(GratisError):
    """History is shorter than the largest AR lag of a mixture component."""


class NonFiniteSample(GratisError):
    """A simulated path exploded beyond the representable magnitude cap."""


class RetryExhausted(GratisError):
    """Too many consecutive explosive draws; the configuration is pathological."""


class DegenerateSeries(GratisError):
    """The series has zero variance and cannot be standardized."""


class TooShort(GratisError):
    """The series is too short for the requested computation."""


class ZeroScale(GratisError):
    """In-sample seasonal-naive MAE is zero; MASE is undefined."""


class EmptyDataset(GratisError):
    """An embedding/coverage operation received no points."""


class DegenerateDesign(GratisError):
    """A regression design matrix contains a zero-variance column."""


class SingularDesign(GratisError):
    """Regression design is rank deficient."""


class GarchFitFailed(GratisError):
    """The GARCH(1,1) quasi-likelihood optimizer failed to converge."""
