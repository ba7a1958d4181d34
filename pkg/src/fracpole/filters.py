"""Optimal smoothing/prediction functionals of a spectral density.

Two scalar functionals of a density carry the whole story:

* geometric mean  exp(mean log f)  -- the least variance achievable when
  predicting u_0 from the infinite past alone;
* harmonic mean   1 / mean(1/f)    -- the least variance achievable when
  estimating u_0 from all other samples, past and future.

The harmonic mean never exceeds the geometric mean.  The optimal two-sided
smoother is read off the normalized inverse density: with
alpha = f^{-1} / mean(f^{-1}) = 1 + sum_{k != 0} rho_k e^{jk theta}, the
estimate u_hat_0 = -sum_{k != 0} rho_k u_{-k} attains the harmonic mean.
Finite-window smoothers (lags |k| <= m, k != 0) solve the corresponding
normal equations and their variances decrease monotonically toward it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotPositiveError, SingularSystemError
from .moments import AutocovSeq, MomentVector, levinson, moments_of_density
from .trigpoly import GridDensity

_FLOOR = 1e-300


@dataclass(frozen=True)
class FilterCoeffs:
    """Lag-indexed coefficients of a predictor or smoother plus its error
    variance.

    Predictors estimate u_0 from the past only (lags k >= 1); smoothers use
    past and future (any k != 0).  ``coeffs`` maps lag -> coefficient of
    u_{-k} in the estimate.
    """

    kind: str
    coeffs: dict
    variance: float

    def __post_init__(self):
        if self.kind not in ("predictor", "smoother"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        bad = [k for k in self.coeffs if k == 0 or (self.kind == "predictor" and k < 0)]
        if bad:
            raise ValueError(f"{self.kind} may not carry lags {sorted(bad)}")
        if self.variance < 0:
            raise ValueError("variance must be >= 0")
        object.__setattr__(self, "coeffs", dict(self.coeffs))

    def coeff(self, k: int) -> complex:
        return complex(self.coeffs.get(k, 0.0))

    def lags(self) -> list:
        return sorted(self.coeffs)


def harmonic_mean(g: GridDensity) -> float:
    """(mean of 1/f over the grid)^-1; 0 as soon as any value is at the
    floor 1e-300.

    A density whose reciprocal is not integrable has no positive limit:
    the returned value then decays as the grid refines, which is the only
    finite-grid signature available.
    """
    v = g.values
    if np.any(v <= _FLOOR):
        return 0.0
    return float(1.0 / np.mean(1.0 / v))


def geometric_mean(g: GridDensity) -> float:
    """exp(mean of log f over the grid); 0 as soon as any value is at the
    floor 1e-300."""
    v = g.values
    if np.any(v <= _FLOOR):
        return 0.0
    return float(np.exp(np.mean(np.log(v))))


def optimal_smoother(g: GridDensity, max_lag: int) -> FilterCoeffs:
    """Two-sided smoother attaining the harmonic mean of ``g``.

    Computes the Fourier coefficients rho_k of f^{-1}/mean(f^{-1}) on the
    grid (rho_0 = 1 by construction, verified to 1e-10) and returns
    beta_k = -rho_k on lags 1 <= |k| <= max_lag with variance
    harmonic_mean(g).  Raises NotPositiveError unless min f > 0.
    """
    v = g.values
    if v.min() <= 0.0:
        raise NotPositiveError("density must be strictly positive for smoothing")
    w = 1.0 / v
    alpha = w / np.mean(w)
    spectrum = np.fft.rfft(alpha) / g.n_grid
    if not 0 <= max_lag < g.n_grid // 2:
        raise ValueError(f"max_lag must lie in [0, n_grid/2), got {max_lag}")
    ks = np.arange(max_lag + 1)
    rho = spectrum[ks] * np.exp(-1j * ks * g.theta0)
    if abs(rho[0] - 1.0) > 1e-10:
        raise ArithmeticError(f"normalization drifted: rho_0 = {rho[0]}")
    coeffs = {}
    for k in range(1, max_lag + 1):
        if abs(rho[k]) > 1e-14:
            coeffs[k] = -rho[k]
            coeffs[-k] = -np.conj(rho[k])
    return FilterCoeffs(kind="smoother", coeffs=coeffs, variance=harmonic_mean(g))


def finite_window_smoother(source, window: int) -> FilterCoeffs:
    """Best smoother restricted to lags 1 <= |k| <= window.

    ``source`` is either an AutocovSeq providing R_0..R_{2*window} or a
    GridDensity (its moments are then taken by quadrature).  Solves the
    normal equations sum_{k != 0} R_{l-k} beta_k = R_l for l != 0 and
    returns the filter with variance
    R_0 - 2 Re sum beta_k* R_k + sum sum beta_l* R_{l-k} beta_k.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if isinstance(source, GridDensity):
        lags = moments_of_density(source, 2 * window).lags
    elif isinstance(source, AutocovSeq):
        if source.n < 2 * window:
            raise ValueError(f"need autocovariances through lag {2 * window}, have {source.n}")
        lags = source.r[:2 * window + 1]
    elif isinstance(source, MomentVector):
        if source.n < 2 * window:
            raise ValueError(f"need moments through lag {2 * window}, have {source.n}")
        lags = source.lags[:2 * window + 1]
    else:
        raise TypeError("source must be an AutocovSeq, MomentVector, or GridDensity")

    full = scipy.linalg.toeplitz(lags, lags.conj())     # full[i, j] = R_{i-j}
    idx = np.array([k for k in range(-window, window + 1) if k != 0])
    pos = idx + window

    def entry(l, k):                                    # R_{l-k} lookup
        return full[l + window, k + window] if abs(l - k) <= 2 * window else 0.0

    gram = full[np.ix_(pos, pos)]
    rhs = np.array([lags[abs(l)] if l >= 0 else np.conj(lags[-l]) for l in idx])
    try:
        beta = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("finite-window normal equations are singular") from exc

    quad = beta.conj() @ gram @ beta
    variance = float((lags[0] - 2.0 * np.real(beta.conj() @ rhs) + quad).real)
    variance = max(variance, 0.0)
    coeffs = {int(k): beta[i] for i, k in enumerate(idx) if abs(beta[i]) > 1e-14}
    return FilterCoeffs(kind="smoother", coeffs=coeffs, variance=variance)


def prediction_variance(acov: AutocovSeq) -> float:
    """Least one-step-ahead prediction-error variance over all spectra
    consistent with the sequence: the Toeplitz determinant ratio, taken from
    the Levinson recursion."""
    _, sigma2, _ = levinson(acov)
    return sigma2
