"""Hermitian trigonometric polynomials and grid-sampled spectral densities.

A trigonometric polynomial here is a finite Laurent sum

    p(theta) = sum_{k=-m}^{m} c_k exp(j*k*theta),    c_{-k} = conj(c_k),

which is real-valued on the circle.  These polynomials carry the spectral
objects of the library: squared prediction polynomials |a(e^{jtheta})|^2,
dual-cone polynomials, and the normalized polynomial under the square root
of a fractional-pole density.

Densities are handled on uniform grids theta_i = -pi + 2*pi*i/N (optionally
shifted by half a cell) with all circle integrals (1/2pi) int h d(theta)
taken as plain grid means; for smooth periodic integrands this rectangle
rule is spectrally accurate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooSmallError, NotPositiveError, RootNearCircleError

DEFAULT_GRID = 2 ** 14

_HERMITIAN_TOL = 1e-12


def _as_power_of_two(n_grid: int) -> int:
    n = int(n_grid)
    if n < 8 or n & (n - 1):
        raise ValueError(f"n_grid must be a power of two >= 8, got {n_grid}")
    return n


@dataclass(frozen=True)
class TrigPoly:
    """Hermitian-coefficient trigonometric polynomial.

    ``coeffs`` stores c_{-m}..c_{m} in one centered array of length 2m+1;
    the center entry is c_0.  Construction rejects non-Hermitian input.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coeffs must be a 1-d array of odd length (c_-m..c_m)")
        scale = np.sum(np.abs(c))
        if scale > 0 and np.max(np.abs(c[::-1].conj() - c)) > _HERMITIAN_TOL * scale:
            raise ValueError("coefficients are not Hermitian (c_{-k} != conj(c_k))")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_lags(cls, lags) -> "TrigPoly":
        """Build from one-sided lags c_0..c_m; the negative side is the mirror."""
        lags = np.asarray(lags, dtype=complex)
        return cls(np.concatenate([lags[:0:-1].conj(), lags]))

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls(np.array([value], dtype=complex))

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def lag(self, k: int) -> complex:
        """Coefficient c_k (0 beyond the stored degree)."""
        if abs(k) > self.degree:
            return 0.0 + 0.0j
        return complex(self.coeffs[self.degree + k])

    def eval(self, theta):
        """Evaluate at ``theta`` (scalar or array).  The imaginary residue of
        the complex summation is at machine level for Hermitian coefficients
        and is discarded."""
        th = np.asarray(theta, dtype=float)
        ks = np.arange(-self.degree, self.degree + 1)
        total = np.tensordot(self.coeffs, np.exp(1j * np.multiply.outer(ks, th)), axes=(0, 0))
        return total.real if th.ndim else float(total.real)

    def values_on_grid(self, n_grid: int, midpoint: bool = False) -> np.ndarray:
        """Pointwise values on the uniform grid, by zero-padded inverse FFT.

        Exact (to rounding) at the grid points; requires n_grid > 2*degree.
        """
        n = _as_power_of_two(n_grid)
        if n <= 2 * self.degree:
            raise GridTooSmallError(
                f"n_grid={n_grid} aliases a degree-{self.degree} polynomial"
            )
        theta0 = -np.pi + (np.pi / n if midpoint else 0.0)
        ks = np.arange(-self.degree, self.degree + 1)
        spread = np.zeros(n, dtype=complex)
        spread[ks % n] += self.coeffs * np.exp(1j * ks * theta0)
        return (np.fft.ifft(spread) * n).real


@dataclass(frozen=True)
class GridDensity:
    """Nonnegative spectral density sampled on a uniform circle grid.

    Values live at theta_i = -pi + 2*pi*i/n_grid, or at the half-cell-shifted
    points theta_i + pi/n_grid when ``midpoint`` is set (used for densities
    that vanish at regular grid points).
    """

    values: np.ndarray
    midpoint: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        _as_power_of_two(v.size)
        if not np.all(np.isfinite(v)):
            raise ValueError("density values must be finite")
        if np.any(v < 0):
            raise ValueError("density values must be >= 0")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_grid(self) -> int:
        return self.values.size

    @property
    def theta0(self) -> float:
        return -np.pi + (np.pi / self.n_grid if self.midpoint else 0.0)

    @property
    def thetas(self) -> np.ndarray:
        n = self.n_grid
        return self.theta0 + 2.0 * np.pi * np.arange(n) / n


def sample_grid(p: TrigPoly, n_grid: int, midpoint: bool = False) -> GridDensity:
    """Sample ``p`` on the uniform grid as a GridDensity.

    Raises GridTooSmallError when n_grid <= 2*degree, and the GridDensity
    validation error when the polynomial is negative somewhere on the grid.
    """
    return GridDensity(p.values_on_grid(n_grid, midpoint=midpoint), midpoint=midpoint)


def min_on_grid(g: GridDensity) -> tuple[float, float]:
    """Grid point of minimal value, ties broken by smallest grid index."""
    i = int(np.argmin(g.values))
    return float(g.thetas[i]), float(g.values[i])


def fourier_coeffs(g: GridDensity, max_lag: int) -> TrigPoly:
    """Trigonometric-moment coefficients of a grid density.

    c_k = (1/n_grid) sum_i values[i] exp(-j*k*theta_i), for |k| <= max_lag;
    Hermitian by construction from the real input.
    """
    n = g.n_grid
    if not 0 <= max_lag < n // 2:
        raise ValueError(f"max_lag must lie in [0, n_grid/2), got {max_lag}")
    spectrum = np.fft.rfft(g.values) / n
    ks = np.arange(max_lag + 1)
    lags = spectrum[ks] * np.exp(-1j * ks * g.theta0)
    return TrigPoly.from_lags(lags)


def sqrt_coeffs(p: TrigPoly, max_lag: int, n_grid: int = DEFAULT_GRID) -> TrigPoly:
    """Fourier coefficients of theta -> sqrt(p(theta)).

    For strictly positive ``p`` the coefficients decay exponentially; the
    returned sequence is trimmed where |rho_k| < 1e-13 * |rho_0| but lags
    0..degree are always retained.  Raises NotPositiveError when the minimum
    of ``p`` on the grid is <= 0.
    """
    vals = p.values_on_grid(n_grid)
    if vals.min() <= 0.0:
        raise NotPositiveError("polynomial is not strictly positive on the grid")
    root = GridDensity(np.sqrt(vals))
    rho = fourier_coeffs(root, max_lag)
    tail = np.abs(rho.coeffs[rho.degree:])
    keep = np.nonzero(tail >= 1e-13 * tail[0])[0]
    cut = max(int(keep[-1]) if keep.size else 0, min(p.degree, max_lag))
    center = rho.degree
    return TrigPoly(rho.coeffs[center - cut:center + cut + 1])


def spectral_factorization(p: TrigPoly, n_grid: int | None = None) -> tuple[np.ndarray, float]:
    """Factor a strictly positive polynomial as gain * |1 + sum q_k z^k|^2.

    Returns the monic tail q_1..q_m and the real gain, with every root of
    1 + sum q_k z^k strictly outside the closed unit disc.  Root finding on
    the associated ordinary polynomial of degree 2m; intended for the small
    degrees (m <= 32) this library works at.

    Raises NotPositiveError when p is not strictly positive on the
    certification grid, RootNearCircleError when a root modulus falls inside
    [1 - 1e-8, 1 + 1e-8].
    """
    m = p.degree
    if n_grid is None:
        n_grid = max(256, _next_pow2(64 * max(m, 1)))
    vals = p.values_on_grid(n_grid)
    top = vals.max()
    if vals.min() <= 0.0:
        raise NotPositiveError("polynomial is not strictly positive on the grid")
    if m == 0:
        return np.zeros(0, dtype=complex), float(p.coeffs[0].real)

    roots = np.roots(p.coeffs[::-1])
    moduli = np.abs(roots)
    if np.any((moduli >= 1.0 - 1e-8) & (moduli <= 1.0 + 1e-8)):
        raise RootNearCircleError("factorization ill-conditioned: root within 1e-8 of the circle")
    outside = roots[moduli > 1.0]
    if outside.size != m:
        raise RootNearCircleError(
            f"expected {m} roots outside the unit disc, found {outside.size}"
        )
    # q(z) = prod(1 - z/r) over the outside roots; constant term is 1 exactly.
    monic = np.poly(outside)[::-1]
    monic = monic / monic[0]
    gain = float((p.coeffs[-1] / monic[-1]).real)

    check = gain * np.abs(_poly_on_grid(monic, n_grid)) ** 2
    if np.max(np.abs(check - vals)) > 1e-8 * top:
        raise RootNearCircleError("factorization round-trip exceeded 1e-8 * max(p)")
    if np.max(np.abs(monic.imag)) <= 1e-12 * max(1.0, np.max(np.abs(monic.real))):
        monic = monic.real + 0j
    return monic[1:].copy(), gain


def _poly_on_grid(coeffs_ascending: np.ndarray, n_grid: int) -> np.ndarray:
    """Values of sum_k c_k e^{jk theta} (k >= 0) on the standard grid."""
    n = n_grid
    ks = np.arange(len(coeffs_ascending))
    spread = np.zeros(n, dtype=complex)
    spread[ks % n] += coeffs_ascending * np.exp(1j * ks * -np.pi)
    return np.fft.ifft(spread) * n


def _next_pow2(n: int) -> int:
    p = 8
    while p < n:
        p *= 2
    return p
