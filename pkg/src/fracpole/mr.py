"""Most-random (fractional-pole) spectrum via a homotopy/Newton flow.

The density maximizing the optimal smoothing-error variance subject to
moment constraints R_0..R_n has the form

    f(theta) = 1 / sqrt(lambda . G(theta)),

where G stacks e^{jk theta} for k = n..-n and lambda is a Hermitian
Lagrange vector whose polynomial lambda.G is strictly positive on the
circle (the dual-cone interior).  lambda solves the fixed-point equation
H(lambda) = R with H the moment map of 1/sqrt(lambda.G); the solution is
the t -> infinity limit of

    d lambda / dt = M(lambda)^{-1} (R - H(lambda)),

whose right-hand side is the Newton direction for H(lambda) = R.  The
solver therefore takes damped Newton steps with backtracking, each step
certified to keep lambda inside the dual cone on the quadrature grid and
to shrink the residual; a classical RK4 integration of the underlying
homotopy path is kept as a diagnostic (:func:`homotopy_path`).

Internally the redundant Hermitian vector (lambda_-n..lambda_n) is
parametrized by 2n+1 real coordinates (lambda_0, Re lambda_1, Im lambda_1,
...), which keeps the moment-map Jacobian real symmetric negative definite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NoConvergenceError, NotInConeError, NotPositiveDefiniteError
from .moments import AutocovSeq, MomentVector, is_posdef
from .trigpoly import DEFAULT_GRID, GridDensity, TrigPoly, spectral_factorization

MAX_GRID = 2 ** 20
_BACKTRACK_FLOOR = 2.0 ** -20


@dataclass(frozen=True)
class LagrangeVector:
    """Hermitian Lagrange vector lambda_0..lambda_n (mirror implied)."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=complex))
        if abs(lam[0].imag) > 1e-12 * max(1.0, abs(lam[0])):
            raise ValueError("lambda_0 must be real")
        lam = lam.copy()
        lam[0] = lam[0].real
        lam.flags.writeable = False
        object.__setattr__(self, "lam", lam)

    @classmethod
    def start(cls, n: int) -> "LagrangeVector":
        """Center of the homotopy: lambda_0 = 1, all other entries 0 (its
        polynomial is identically 1)."""
        lam = np.zeros(n + 1, dtype=complex)
        lam[0] = 1.0
        return cls(lam)

    @classmethod
    def from_real(cls, x: np.ndarray) -> "LagrangeVector":
        n = (len(x) - 1) // 2
        lam = np.empty(n + 1, dtype=complex)
        lam[0] = x[0]
        for m in range(1, n + 1):
            lam[m] = x[2 * m - 1] + 1j * x[2 * m]
        return cls(lam)

    @property
    def n(self) -> int:
        return self.lam.size - 1

    def to_real(self) -> np.ndarray:
        x = np.empty(2 * self.n + 1)
        x[0] = self.lam[0].real
        x[1::2] = self.lam[1:].real
        x[2::2] = self.lam[1:].imag
        return x

    def to_poly(self) -> TrigPoly:
        """The polynomial lambda.G as a TrigPoly (coefficient of e^{jk theta}
        is conj(lambda_k))."""
        return TrigPoly.from_lags(self.lam.conj())

    def min_on_grid(self, n_grid: int) -> float:
        return float(self.to_poly().values_on_grid(n_grid).min())


def _basis(n: int, n_grid: int) -> np.ndarray:
    """Rows (1, 2cos(th), 2sin(th), ..., 2cos(n th), 2sin(n th)) on the grid,
    so that lambda.G(theta_i) = to_real(lambda) . basis[:, i]."""
    theta = -np.pi + 2.0 * np.pi * np.arange(n_grid) / n_grid
    B = np.empty((2 * n + 1, n_grid))
    B[0] = 1.0
    for m in range(1, n + 1):
        B[2 * m - 1] = 2.0 * np.cos(m * theta)
        B[2 * m] = 2.0 * np.sin(m * theta)
    return B


def _target_real(target: MomentVector) -> np.ndarray:
    lags = target.lags
    n = target.n
    t = np.empty(2 * n + 1)
    t[0] = lags[0].real
    t[1::2] = 2.0 * lags[1:].real
    t[2::2] = -2.0 * lags[1:].imag
    return t


def _real_to_lags(res: np.ndarray) -> np.ndarray:
    """Inverse of :func:`_target_real` (complex lags of a real-coordinate
    moment vector)."""
    n = (len(res) - 1) // 2
    lags = np.empty(n + 1, dtype=complex)
    lags[0] = res[0]
    lags[1:] = 0.5 * (res[1::2] - 1j * res[2::2])
    return lags


def _residual_norm(res_real: np.ndarray) -> float:
    return float(np.max(np.abs(_real_to_lags(res_real))))


def residual(lam: LagrangeVector, target: MomentVector, n_grid: int = DEFAULT_GRID) -> MomentVector:
    """R - H(lambda), where H(lambda) holds the moments of 1/sqrt(lambda.G)
    by grid quadrature.  Raises NotInConeError when lambda.G dips to <= 0 on
    the grid."""
    if lam.n != target.n:
        raise ValueError("lambda and target have different orders")
    vals = lam.to_poly().values_on_grid(n_grid)
    if vals.min() <= 0.0:
        raise NotInConeError("lambda is outside the dual cone on the grid")
    f = 1.0 / np.sqrt(vals)
    spectrum = np.fft.rfft(f) / n_grid
    ks = np.arange(target.n + 1)
    H = spectrum[ks] * np.exp(-1j * ks * -np.pi)
    return MomentVector.from_lags(target.lags - H)


def jacobian(lam: LagrangeVector, n_grid: int = DEFAULT_GRID) -> np.ndarray:
    """Derivative of the moment map in real coordinates:
    M = -(1/2) * mean_theta( Gbar Gbar^T (lambda.G)^{-3/2} ), a real
    symmetric negative-definite (2n+1) x (2n+1) matrix."""
    B = _basis(lam.n, n_grid)
    vals = lam.to_real() @ B
    if vals.min() <= 0.0:
        raise NotInConeError("lambda is outside the dual cone on the grid")
    return -0.5 * (B * vals ** -1.5) @ B.T / n_grid


@dataclass
class SolveDiagnostics:
    """Path record of one most-random solve."""

    iterations: int = 0
    residual_inf: float = np.inf
    min_poly: float = np.inf
    n_grid: int = 0
    residual_history: list = field(default_factory=list)
    grid_escalations: int = 0


@dataclass(frozen=True)
class MrSpectrum:
    """Fractional-pole density 1/sqrt(lambda.G) with its normalized forms.

    Pointwise on the circle,

        f = 1/sqrt(lambda.G) = k2/sqrt(b) = kappa2 / |1 + sum monic_k e^{jk theta}|,

    where b = k2^2 * lambda.G integrates to 1 after the square root
    (mean(sqrt(b)) = 1) and (monic, kappa2) come from spectral factorization
    of lambda.G.
    """

    lam: LagrangeVector
    k2: float
    b: TrigPoly
    monic: np.ndarray
    kappa2: float
    diagnostics: SolveDiagnostics = field(compare=False, repr=False, default=None)

    @property
    def n(self) -> int:
        return self.lam.n

    def eval(self, theta):
        vals = self.lam.to_poly().eval(theta)
        return 1.0 / np.sqrt(vals)

    def density(self, n_grid: int) -> GridDensity:
        vals = self.lam.to_poly().values_on_grid(n_grid)
        return GridDensity(1.0 / np.sqrt(vals))


def eval_mr(spectrum: MrSpectrum, theta):
    return spectrum.eval(theta)


def solve_mr(acov: AutocovSeq, tol: float = 1e-8, n_grid: int = DEFAULT_GRID,
             max_iter: int = 200) -> MrSpectrum:
    """Solve H(lambda) = R by damped Newton steps along the homotopy flow.

    Returns the spectrum with relative residual
    ||R - H(lambda)||_inf <= tol * ||R||_inf, lambda certified inside the
    dual cone on the grid.  When the solution polynomial dips below
    100/n_grid^2 the grid is doubled (up to 2^20) and the solve resumes,
    keeping the quadrature of the near-singular integrand trustworthy.

    Raises NotPositiveDefiniteError for inadmissible data and
    NoConvergenceError (with diagnostics) when the iteration budget is
    exhausted or a step cannot reduce the residual.
    """
    ok, _ = is_posdef(acov)
    if not ok:
        raise NotPositiveDefiniteError("autocorrelation sequence is not positive definite")
    if not 0.0 < tol <= 1e-2:
        raise ValueError("tol must lie in (0, 1e-2]")

    n = acov.n
    target = MomentVector.from_autocov(acov)
    t_real = _target_real(target)
    scale = target.inf_norm()

    diag = SolveDiagnostics(n_grid=n_grid)
    x = LagrangeVector.start(n).to_real()
    B = _basis(n, n_grid)

    def refresh(x, B, n_grid):
        vals = x @ B
        H = B @ (1.0 / np.sqrt(vals)) / n_grid
        res = t_real - H
        return vals, res, _residual_norm(res)

    vals, res, res_norm = refresh(x, B, n_grid)
    total_iter = 0
    while True:
        converged = res_norm <= tol * scale
        if converged and vals.min() < 100.0 / n_grid ** 2 and n_grid < MAX_GRID:
            n_grid *= 2
            diag.grid_escalations += 1
            B = _basis(n, n_grid)
            vals, res, res_norm = refresh(x, B, n_grid)
            continue
        if converged:
            break
        if total_iter >= max_iter:
            diag.iterations = total_iter
            diag.residual_inf = res_norm
            diag.min_poly = float(vals.min())
            diag.n_grid = n_grid
            raise NoConvergenceError("Newton iteration budget exhausted",
                                     _diag_dict(diag))
        M = -0.5 * (B * vals ** -1.5) @ B.T / n_grid
        try:
            chol = scipy.linalg.cho_factor(-M, lower=True)
            step = -scipy.linalg.cho_solve(chol, res)
        except scipy.linalg.LinAlgError:
            diag.iterations = total_iter
            diag.residual_inf = res_norm
            diag.min_poly = float(vals.min())
            diag.n_grid = n_grid
            raise NoConvergenceError("moment-map Jacobian lost definiteness",
                                     _diag_dict(diag))
        s = 1.0
        while s >= _BACKTRACK_FLOOR:
            x_try = x + s * step
            vals_try = x_try @ B
            if vals_try.min() > 0.0:
                H_try = B @ (1.0 / np.sqrt(vals_try)) / n_grid
                res_try = t_real - H_try
                norm_try = _residual_norm(res_try)
                if norm_try < res_norm:
                    x, vals, res, res_norm = x_try, vals_try, res_try, norm_try
                    break
            s *= 0.5
        else:
            diag.iterations = total_iter
            diag.residual_inf = res_norm
            diag.min_poly = float(vals.min())
            diag.n_grid = n_grid
            raise NoConvergenceError("backtracking stalled: no admissible step reduces the residual",
                                     _diag_dict(diag))
        total_iter += 1
        diag.residual_history.append(res_norm)

    diag.iterations = total_iter
    diag.residual_inf = res_norm
    diag.min_poly = float(vals.min())
    diag.n_grid = n_grid

    lam = LagrangeVector.from_real(x)
    poly = lam.to_poly()
    mean_sqrt = float(np.mean(np.sqrt(vals)))
    k2 = 1.0 / mean_sqrt
    b = TrigPoly(k2 ** 2 * poly.coeffs)
    monic, gain = spectral_factorization(poly, n_grid=max(n_grid, 4096))
    kappa2 = float(gain ** -0.5)
    return MrSpectrum(lam=lam, k2=k2, b=b, monic=monic, kappa2=kappa2, diagnostics=diag)


def _diag_dict(diag: SolveDiagnostics) -> dict:
    return {
        "iterations": diag.iterations,
        "residual_inf": diag.residual_inf,
        "min_poly": diag.min_poly,
        "n_grid": diag.n_grid,
    }


def homotopy_path(acov: AutocovSeq, n_grid: int = 2 ** 12, steps: int = 1024) -> np.ndarray:
    """Diagnostic RK4 integration of the homotopy differential equation.

    The moment target is slid linearly from the start vector's moments to R
    over tau in [0, 1]; the dual path solves
    d lambda / d tau = M(lambda)^{-1} (R - R_start).  Returns the Lagrange
    path as a (steps+1) x (n+1) complex array; the last row approximates
    the fixed point of :func:`solve_mr`.
    """
    ok, _ = is_posdef(acov)
    if not ok:
        raise NotPositiveDefiniteError("autocorrelation sequence is not positive definite")
    n = acov.n
    B = _basis(n, n_grid)
    t_real = _target_real(MomentVector.from_autocov(acov))
    x = LagrangeVector.start(n).to_real()
    start_moments = B @ (1.0 / np.sqrt(x @ B)) / n_grid
    drive = t_real - start_moments

    def velocity(x):
        vals = x @ B
        if vals.min() <= 0.0:
            raise NotInConeError("homotopy path left the dual cone")
        M = -0.5 * (B * vals ** -1.5) @ B.T / n_grid
        return np.linalg.solve(M, drive)

    h = 1.0 / steps
    path = np.empty((steps + 1, n + 1), dtype=complex)
    path[0] = LagrangeVector.from_real(x).lam
    for i in range(steps):
        v1 = velocity(x)
        v2 = velocity(x + 0.5 * h * v1)
        v3 = velocity(x + 0.5 * h * v2)
        v4 = velocity(x + h * v3)
        x = x + (h / 6.0) * (v1 + 2 * v2 + 2 * v3 + v4)
        path[i + 1] = LagrangeVector.from_real(x).lam
    return path
