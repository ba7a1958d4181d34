"""Maximum-entropy (all-pole) spectrum and its one-step predictor.

Among all power spectra consistent with R_0..R_n, the entropy-rate
maximizer is k2 / |1 + a_1 e^{j theta} + ... + a_n e^{jn theta}|^2 with the
a_k taken from the Levinson recursion and k2 the final prediction-error
variance.  The optimal one-step-ahead predictor of the matching process is
u_hat_0 = sum_{k>=1} (-a_k) u_{-k}, with error variance k2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import filters
from .moments import AutocovSeq, levinson
from .trigpoly import GridDensity, _poly_on_grid


@dataclass(frozen=True)
class MeSpectrum:
    """All-pole density k2 / |a(e^{j theta})|^2 with monic a, roots outside
    the closed unit disc."""

    k2: float
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).copy()
        a.flags.writeable = False
        if not self.k2 > 0:
            raise ValueError("k2 must be > 0")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.size

    def eval(self, theta):
        th = np.asarray(theta, dtype=float)
        ks = np.arange(1, self.n + 1)
        denom = 1.0 + np.tensordot(self.a, np.exp(1j * np.multiply.outer(ks, th)), axes=(0, 0))
        out = self.k2 / np.abs(denom) ** 2
        return out if th.ndim else float(out)

    def density(self, n_grid: int) -> GridDensity:
        """Density sampled on the standard grid."""
        monic = np.concatenate([[1.0 + 0.0j], self.a])
        return GridDensity(self.k2 / np.abs(_poly_on_grid(monic, n_grid)) ** 2)


def fit_me(acov: AutocovSeq) -> MeSpectrum:
    """Fit the maximum-entropy spectrum to a positive-definite sequence."""
    a, sigma2, _ = levinson(acov)
    return MeSpectrum(k2=sigma2, a=a)


def eval_me(spectrum: MeSpectrum, theta):
    return spectrum.eval(theta)


def predictor(spectrum: MeSpectrum) -> "filters.FilterCoeffs":
    """One-step-ahead predictor coefficients alpha_k = -a_k (k = 1..n) with
    its error variance k2."""
    coeffs = {k: -spectrum.a[k - 1] for k in range(1, spectrum.n + 1)
              if spectrum.a[k - 1] != 0}
    return filters.FilterCoeffs(kind="predictor", coeffs=coeffs, variance=spectrum.k2)
