"""Closed forms for the chirped Gaussian family, plus brute-force oracles.

The model state is psi(x) = (2/(pi*sigma^2))^(1/4) * exp(-x^2/sigma^2 + i*alpha*x^2):
a Gaussian of width parameter sigma carrying a quadratic phase (chirp) alpha.
Every transform of it is Gaussian, so each numerical path in this package has
an exact target here. The closed forms below were pinned against quadrature
before being frozen; see RESOLUTIONS.md for the evidence table.

wigner_direct and density_matrix_direct are the slow, assumption-free oracles
for arbitrary sampled states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePointError, SingularFrequencyError
from .grid import SampledWavefunction, UniformGrid1D
from .reconstruct import DensityMatrix
from .tomography import (
    FresnelTomogram,
    Moments,
    TomogramPlane,
    plane_grids_for_slice,
)

__all__ = [
    "GcfParams",
    "gcf_psi",
    "gcf_grid",
    "gcf_sampled",
    "gcf_moments",
    "gcf_width",
    "gcf_tomogram_analytic",
    "gcf_plane_analytic",
    "gcf_fresnel_analytic",
    "gcf_autocorrelation",
    "gcf_tomogram_ft_analytic",
    "gcf_wigner_analytic",
    "gcf_source",
    "gcf_fresnel_source",
    "analytic_plane_set",
    "wigner_direct",
    "density_matrix_direct",
]


@dataclass(frozen=True)
class GcfParams:
    """Width and chirp of the Gaussian model state."""

    sigma: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")


def gcf_psi(p: GcfParams, x):
    """psi(x); accepts scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    amp = (2.0 / (np.pi * p.sigma**2)) ** 0.25
    out = amp * np.exp(-(x**2) / p.sigma**2 + 1j * p.alpha * x**2)
    return out if out.ndim else complex(out)


def gcf_grid(p: GcfParams, count: int = 1025) -> UniformGrid1D:
    """Default sampling window: 8 times the 1/e half-width of |psi|^2."""
    return UniformGrid1D.symmetric(8.0 * p.sigma / math.sqrt(2.0), count)


def gcf_sampled(
    p: GcfParams, grid: UniformGrid1D | None = None, count: int = 1025
) -> SampledWavefunction:
    if grid is None:
        grid = gcf_grid(p, count)
    return SampledWavefunction(grid, gcf_psi(p, grid.points))


def gcf_moments(p: GcfParams) -> Moments:
    """Exact phase-space moments; det of the covariance is 1/4 (pure state)."""
    s2 = p.sigma**2
    return Moments(
        mean_q=0.0,
        mean_p=0.0,
        var_q=s2 / 4.0,
        var_p=1.0 / s2 + p.alpha**2 * s2,
        cov=p.alpha * s2 / 2.0,
    )


def _omega_sq(p: GcfParams, mu, nu):
    mu_shift = np.asarray(mu, dtype=np.float64) + 2.0 * p.alpha * np.asarray(nu, dtype=np.float64)
    return (4.0 * np.asarray(nu, dtype=np.float64) ** 2 + p.sigma**4 * mu_shift**2) / (
        2.0 * p.sigma**2
    )


def gcf_width(p: GcfParams, mu: float, nu: float) -> float:
    """1/e half-width of the tomogram's X profile at (mu, nu).

    omega = sqrt((4 nu^2 + sigma^4 (mu + 2 alpha nu)^2) / (2 sigma^2)); the
    profile is w(X) = w(0) exp(-X^2/omega^2). Zero only at the degenerate
    point, where no profile exists.
    """
    return float(np.sqrt(_omega_sq(p, mu, nu)))


def gcf_tomogram_analytic(p: GcfParams, X, mu, nu):
    """Closed-form symplectic tomogram w(X, mu, nu) of the model state.

    exp(-X^2/omega^2) / (sqrt(pi) * omega), a normalized Gaussian in X for
    any line direction. Scalars or broadcastable arrays.
    """
    w2 = _omega_sq(p, mu, nu)
    if np.any(w2 <= 0.0):
        raise DegeneratePointError(
            "tomogram undefined where both nu and the chirp-shifted mu vanish"
        )
    X = np.asarray(X, dtype=np.float64)
    out = np.exp(-(X**2) / w2) / np.sqrt(np.pi * w2)
    return out if out.ndim else float(out)


def gcf_plane_analytic(
    p: GcfParams, grid_x: UniformGrid1D, grid_mu: UniformGrid1D, nu: float
) -> TomogramPlane:
    vals = gcf_tomogram_analytic(
        p, grid_x.points[:, None], grid_mu.points[None, :], float(nu)
    )
    return TomogramPlane(float(nu), grid_x, grid_mu, vals)


def gcf_fresnel_analytic(
    p: GcfParams, grid_x: UniformGrid1D, grid_nu: UniformGrid1D
) -> FresnelTomogram:
    vals = gcf_tomogram_analytic(
        p, grid_x.points[:, None], 1.0, grid_nu.points[None, :]
    )
    return FresnelTomogram(grid_x, grid_nu, vals)


def gcf_autocorrelation(p: GcfParams, nu):
    """psi(nu) * conj(psi(0)) = sqrt(2/(pi sigma^2)) exp(-nu^2/sigma^2 + i alpha nu^2)."""
    nu = np.asarray(nu, dtype=np.float64)
    out = np.sqrt(2.0 / (np.pi * p.sigma**2)) * np.exp(
        -(nu**2) / p.sigma**2 + 1j * p.alpha * nu**2
    )
    return out if out.ndim else complex(out)


def gcf_tomogram_ft_analytic(p: GcfParams, omega_x, omega_mu, nu):
    """2D Fourier transform of the fixed-nu tomogram plane, in closed form.

    sqrt(2/(pi sigma^2 omega_x^2)) * exp(-(nu^2/2)(omega_x/sigma)^2
    - (2/sigma^2)(omega_mu/omega_x)^2 - 2i alpha omega_mu nu). Singular on
    the omega_x = 0 line, where the mu integral of the plane does not decay.
    """
    omega_x = np.asarray(omega_x, dtype=np.float64)
    if np.any(omega_x == 0.0):
        raise SingularFrequencyError(
            "plane transform diverges at omega_x = 0; the mu profile is not integrable there"
        )
    omega_mu = np.asarray(omega_mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    s2 = p.sigma**2
    out = np.sqrt(2.0 / (np.pi * s2 * omega_x**2)) * np.exp(
        -0.5 * nu**2 * omega_x**2 / s2
        - 2.0 * omega_mu**2 / (s2 * omega_x**2)
        - 2j * p.alpha * omega_mu * nu
    )
    return out if out.ndim else complex(out)


def gcf_wigner_analytic(p: GcfParams, q, pm):
    """Wigner function of the model state: (1/pi) exp(-xi^T Sigma^{-1} xi / 2).

    Sigma is the moment covariance (det 1/4), so the peak is always 1/pi.
    """
    m = gcf_moments(p)
    inv_qq = m.var_p / m.det
    inv_pp = m.var_q / m.det
    inv_qp = -m.cov / m.det
    q = np.asarray(q, dtype=np.float64)
    pm = np.asarray(pm, dtype=np.float64)
    quad = inv_qq * q**2 + 2.0 * inv_qp * q * pm + inv_pp * pm**2
    out = np.exp(-0.5 * quad) / np.pi
    return out if out.ndim else float(out)


def gcf_source(p: GcfParams):
    """Vectorized (X, mu, nu) -> w callable for the inversion quadratures."""

    def source(X, mu, nu):
        return gcf_tomogram_analytic(p, X, mu, nu)

    return source


def gcf_fresnel_source(p: GcfParams):
    """Vectorized (X', nu') -> w_F callable (the mu = 1 line of the tomogram)."""

    def source(Xp, nup):
        return gcf_tomogram_analytic(p, Xp, 1.0, nup)

    return source


def analytic_plane_set(
    p: GcfParams,
    nu_values: Sequence[float],
    nu_floor: float | None = None,
) -> list[TomogramPlane]:
    """Closed-form tomogram planes on the same adapted grids the numeric
    builder would choose; exact forward data for exercising the inverse maps."""
    m = gcf_moments(p)
    nonzero = [abs(v) for v in nu_values if abs(v) > 1e-8]
    if nu_floor is None:
        nu_floor = 0.5 * min(nonzero) if nonzero else 0.1
    planes = []
    for nu in nu_values:
        gx, gmu = plane_grids_for_slice(float(nu), m, nu_floor)
        planes.append(gcf_plane_analytic(p, gx, gmu, float(nu)))
    return planes


def wigner_direct(psi: SampledWavefunction, q: float, p: float) -> float:
    """(1/2pi) Int psi(q + u/2) conj(psi(q - u/2)) e^{-ipu} du by quadrature.

    Off-grid psi values are linearly interpolated (zero outside the grid).
    The u step resolves both the sampling of psi and the e^{-ipu} phase.
    """
    g = psi.grid
    step = min(g.step, np.pi / (3.0 * (1.0 + abs(p))))
    half = g.width  # integrand support: both shifted points inside the grid
    n = 2 * math.ceil(half / step) + 1
    u = np.linspace(-half, half, n)
    du = u[1] - u[0]
    f = psi.interp_at(q + 0.5 * u) * np.conj(psi.interp_at(q - 0.5 * u))
    val = np.trapezoid(f * np.exp(-1j * p * u), dx=du) / (2.0 * np.pi)
    return float(val.real)


def density_matrix_direct(psi: SampledWavefunction) -> DensityMatrix:
    """Outer-product density matrix psi_i * conj(psi_j) on psi's own grid."""
    return DensityMatrix(psi.grid, np.outer(psi.values, np.conj(psi.values)))
