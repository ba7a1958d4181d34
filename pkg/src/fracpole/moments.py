"""Autocorrelation sequences, Levinson recursion, and trigonometric moments.

The Toeplitz matrix of a sequence R_0..R_n is tested for positive
definiteness through the Levinson-Durbin recursion: the matrix is positive
definite exactly when every reflection coefficient has modulus < 1 (each
intermediate prediction-error variance then stays > 0).  The same recursion
produces the monic one-step predictor polynomial and its error variance,
which equals the Toeplitz determinant ratio det R_n / det R_{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError, SeriesTooShortError
from .trigpoly import GridDensity

# Reflection coefficients must stay this far inside the unit disc.
_POSDEF_MARGIN = 1e-12


@dataclass(frozen=True)
class AutocovSeq:
    """Finite Hermitian autocorrelation sequence R_0..R_n.

    R_0 must be real and >= 0.  Degenerate sequences (R_0 = 0, or
    |R_k| > R_0) may be constructed -- sample estimates of a zero series
    produce them -- but every estimator entry point rejects them through
    :func:`is_posdef`.
    """

    r: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.r, dtype=complex))
        if r.ndim != 1 or r.size == 0:
            raise ValueError("r must be a nonempty 1-d sequence R_0..R_n")
        if not np.all(np.isfinite(r)):
            raise ValueError("autocovariances must be finite")
        if abs(r[0].imag) > 1e-12 * max(1.0, abs(r[0])) or r[0].real < 0:
            raise ValueError("R_0 must be real and >= 0")
        r = r.copy()
        r[0] = r[0].real
        r.flags.writeable = False
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return self.r.size - 1

    def lag(self, k: int) -> complex:
        """R_k with the Hermitian extension R_{-k} = conj(R_k)."""
        return complex(self.r[k]) if k >= 0 else complex(self.r[-k]).conjugate()

    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.r.imag)) <= 1e-14 * max(1.0, np.max(np.abs(self.r))))


@dataclass(frozen=True)
class MomentVector:
    """Moments ordered (R_n*, ..., R_1*, R_0, R_1, ..., R_n); Hermitian mirror."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 1 or e.size % 2 == 0:
            raise ValueError("entries must have odd length 2n+1")
        scale = max(1.0, float(np.max(np.abs(e))))
        if np.max(np.abs(e[::-1].conj() - e)) > 1e-12 * scale:
            raise ValueError("entries must mirror Hermitianly around the center")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_lags(cls, lags) -> "MomentVector":
        lags = np.asarray(lags, dtype=complex)
        return cls(np.concatenate([lags[:0:-1].conj(), lags]))

    @classmethod
    def from_autocov(cls, a: AutocovSeq) -> "MomentVector":
        return cls.from_lags(a.r)

    @property
    def n(self) -> int:
        return (self.entries.size - 1) // 2

    def lag(self, k: int) -> complex:
        return complex(self.entries[self.n + k])

    @property
    def lags(self) -> np.ndarray:
        """One-sided lags R_0..R_n."""
        return self.entries[self.n:].copy()

    def inf_norm(self) -> float:
        return float(np.max(np.abs(self.entries)))


def _levinson_recursion(r: np.ndarray):
    """Run Levinson-Durbin on lags r[0..n].

    Returns (a, sigmas, gammas, ok): monic predictor tail a_1..a_n, the
    prediction-error variances sigma^2_0..sigma^2_n, the reflection
    coefficients gamma_1..gamma_n, and whether the recursion stayed strictly
    positive definite.  On breakdown the returned arrays stop at the failing
    order (the offending gamma is included).
    """
    n = r.size - 1
    if r[0].real <= 0.0:
        return np.zeros(0, complex), np.array([r[0].real]), np.zeros(0, complex), False
    a = np.zeros(0, dtype=complex)
    err = float(r[0].real)
    sigmas = [err]
    gammas = []
    for k in range(1, n + 1):
        num = r[k] + np.dot(a, r[k - 1:0:-1])
        gamma = num / err
        gammas.append(gamma)
        if abs(gamma) >= 1.0 - _POSDEF_MARGIN:
            return a, np.array(sigmas), np.array(gammas), False
        nxt = np.empty(k, dtype=complex)
        nxt[:k - 1] = a - gamma * a[::-1].conj()
        nxt[k - 1] = -gamma
        a = nxt
        err *= 1.0 - abs(gamma) ** 2
        sigmas.append(err)
    return a, np.array(sigmas), np.array(gammas), True


def is_posdef(a: AutocovSeq) -> tuple[bool, np.ndarray]:
    """Whether the Toeplitz matrix of ``a`` is positive definite, plus the
    reflection coefficients gamma_1..gamma_n computed along the way."""
    _, _, gammas, ok = _levinson_recursion(a.r)
    return ok, gammas


def levinson(a: AutocovSeq) -> tuple[np.ndarray, float, np.ndarray]:
    """Monic predictor tail a_1..a_n, error variance sigma^2_n, and all
    intermediate variances sigma^2_0..sigma^2_n.

    The polynomial 1 + sum a_k z^k has all roots outside the closed unit
    disc and sigma^2_n = R_0 * prod(1 - |gamma_k|^2).
    """
    coeffs, sigmas, _, ok = _levinson_recursion(a.r)
    if not ok:
        raise NotPositiveDefiniteError("autocorrelation sequence is not positive definite")
    return coeffs, float(sigmas[-1]), sigmas


def moments_of_density(g: GridDensity, n: int) -> MomentVector:
    """First n+1 trigonometric moments of a grid density by grid quadrature:
    R_k = mean_i values[i] exp(-j*k*theta_i)."""
    if not 0 <= n < g.n_grid // 2:
        raise ValueError(f"need n < n_grid/2, got n={n}, n_grid={g.n_grid}")
    spectrum = np.fft.rfft(g.values) / g.n_grid
    ks = np.arange(n + 1)
    return MomentVector.from_lags(spectrum[ks] * np.exp(-1j * ks * g.theta0))


def sample_autocov(series, n: int) -> AutocovSeq:
    """Biased sample autocovariances R_k = (1/T) sum u_l conj(u_{l-k}).

    The biased normalization keeps every estimate nonnegative definite.
    """
    u = np.asarray(series)
    if u.ndim != 1:
        raise ValueError("series must be 1-d")
    T = u.size
    if T <= n:
        raise SeriesTooShortError(f"series length {T} cannot support lag {n}")
    r = np.array([np.dot(u[k:], u[:T - k].conj()) / T for k in range(n + 1)])
    r[0] = r[0].real
    return AutocovSeq(r)
