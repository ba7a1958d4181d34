"""Exception types shared across the library.

Input-domain problems subclass ValueError so callers that only care about
"bad input" can catch one thing; the CLI maps each class to an exit code.
"""


class NotPositiveDefiniteError(ValueError):
    """Autocorrelation sequence whose Toeplitz matrix is not positive definite."""


class NotPositiveError(ValueError):
    """Polynomial or density that must be strictly positive is not."""


class NotInConeError(NotPositiveError):
    """Lagrange vector outside the dual cone (its polynomial dips to <= 0)."""


class GridTooSmallError(ValueError):
    """Grid too coarse for the polynomial degree (aliasing)."""


class RootNearCircleError(ValueError):
    """Spectral factorization is ill-conditioned: a root sits on or almost on
    the unit circle."""


class SingularSystemError(ValueError):
    """Normal equations of a finite-window filter are singular."""


class SeriesTooShortError(ValueError):
    """Time series shorter than the requested number of autocovariance lags."""


class NoConvergenceError(RuntimeError):
    """Iterative solver exhausted its budget.

    Carries a ``diagnostics`` mapping with the last residual, the minimum of
    the dual polynomial on the grid, and the iteration count.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
