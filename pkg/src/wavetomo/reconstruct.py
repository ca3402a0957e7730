"""Inverse maps: tomogram back to wavefunction, density matrix and Wigner function.

Two routes are implemented.

1. The Fourier-slice route for pure states: the 2D transform of a fixed-nu
   plane, evaluated at frequency (1, -nu/2), equals psi(nu) * conj(psi(0)).
   Sweeping nu over the plane set and dividing by the nu=0 anchor rebuilds
   psi up to its (fixed) global phase.

2. Direct kernel quadrature for the density matrix and the Wigner function.
   The integrands decay only through oscillation along mu, so the mu axis is
   truncated at `mu_window` with a raised-cosine taper on its outer
   `taper_fraction`. Column integrals over X use abscissas scaled per column
   (X = s*u with s = r_q*|mu| + r_p*|nu|): a fixed absolute X grid cannot
   resolve the near-delta columns at small |mu|+|nu| while covering the wide
   ones at the window edge with a fixed point budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import MissingAnchorError, NodeAtOriginError, UnsupportedSizeError
from .grid import (
    ComplexField2D,
    RealField2D,
    SampledWavefunction,
    UniformGrid1D,
    dft2_at,
    trapezoid_integrate,
)
from .tomography import FresnelTomogram, TomogramPlane

__all__ = [
    "DensityMatrix",
    "DensityMatrixNd",
    "WignerFunction",
    "PsiAutocorrelation",
    "PsiReconstruction",
    "InversionConfig",
    "raised_cosine_taper",
    "tomogram_ft2",
    "psi_slice_at",
    "reconstruct_psi",
    "reconstruct_density_matrix",
    "reconstruct_density_matrix_fresnel",
    "reconstruct_density_matrix_nd",
    "reconstruct_wigner",
    "density_matrix_from_planes",
    "wigner_from_planes",
]

HERMITICITY_TOL = 1e-8
ANCHOR_FLOOR = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Position-representation density matrix on a uniform grid.

    Constructed values must already be Hermitian to 1e-8; use ``from_raw``
    to symmetrize quadrature output and keep the pre-symmetrization
    asymmetry as a diagnostic.
    """

    grid: UniformGrid1D
    values: np.ndarray
    asymmetry: float = 0.0

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.complex128)
        n = self.grid.count
        if vals.shape != (n, n):
            raise ValueError(f"density matrix shape {vals.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("density matrix values must be finite")
        defect = float(np.max(np.abs(vals - vals.conj().T)))
        if defect > HERMITICITY_TOL:
            raise ValueError(f"hermiticity defect {defect} exceeds {HERMITICITY_TOL}")
        vals = np.array(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @staticmethod
    def from_raw(grid: UniformGrid1D, raw) -> "DensityMatrix":
        raw = np.asarray(raw, dtype=np.complex128)
        asym = float(np.max(np.abs(raw - raw.conj().T)))
        return DensityMatrix(grid, 0.5 * (raw + raw.conj().T), asym)

    @property
    def trace_times_step(self) -> float:
        return float(np.real(np.trace(self.values)) * self.grid.step)


@dataclass(frozen=True)
class DensityMatrixNd:
    """N-axis density matrix; values[i1..iN, j1..jN] with one index pair per axis."""

    grids: tuple[UniformGrid1D, ...]
    values: np.ndarray
    asymmetry: float = 0.0

    def __post_init__(self) -> None:
        shape = tuple(g.count for g in self.grids) * 2
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != shape:
            raise ValueError(f"values shape {vals.shape}, expected {shape}")
        mat = self.as_matrix(vals)
        defect = float(np.max(np.abs(mat - mat.conj().T)))
        if defect > HERMITICITY_TOL:
            raise ValueError(f"hermiticity defect {defect} exceeds {HERMITICITY_TOL}")
        vals = np.array(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def as_matrix(self, vals=None) -> np.ndarray:
        v = self.values if vals is None else vals
        n = int(np.prod([g.count for g in self.grids]))
        return np.asarray(v).reshape(n, n)

    @staticmethod
    def from_raw(grids, raw) -> "DensityMatrixNd":
        grids = tuple(grids)
        raw = np.asarray(raw, dtype=np.complex128)
        n = int(np.prod([g.count for g in grids]))
        mat = raw.reshape(n, n)
        asym = float(np.max(np.abs(mat - mat.conj().T)))
        sym = (0.5 * (mat + mat.conj().T)).reshape(raw.shape)
        return DensityMatrixNd(grids, sym, asym)


@dataclass(frozen=True)
class WignerFunction:
    grid_q: UniformGrid1D
    grid_p: UniformGrid1D
    values: np.ndarray
    imag_residue: float = 0.0

    def __post_init__(self) -> None:
        shape = (self.grid_q.count, self.grid_p.count)
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != shape:
            raise ValueError(f"values shape {vals.shape}, expected {shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("Wigner values must be finite")
        vals = np.array(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def normalization(self) -> float:
        col = np.trapezoid(self.values, dx=self.grid_p.step, axis=1)
        return float(np.trapezoid(col, dx=self.grid_q.step))

    def marginal_q(self) -> np.ndarray:
        return np.trapezoid(self.values, dx=self.grid_p.step, axis=1)


@dataclass(frozen=True)
class PsiAutocorrelation:
    """Samples of psi(nu) * conj(psi(0)) on a uniform nu grid."""

    grid_nu: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid_nu.count,):
            raise ValueError("autocorrelation length does not match its grid")
        vals = np.array(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class PsiReconstruction:
    psi: SampledWavefunction
    autocorrelation: PsiAutocorrelation
    prenorm_l2: float
    anchor: float
    anchor_imag: float


@dataclass(frozen=True)
class InversionConfig:
    """Quadrature window for the direct inverse maps.

    mu_window: half-width M of the mu integration window [-M, M].
    taper_fraction: outer fraction of the window under a raised-cosine taper.
    X_window: half-width of the column abscissas in scaled units (the column
        at (mu, nu) integrates X over [-X_window*s, X_window*s] with
        s = r_q*|mu| + r_p*|nu|); 2.5 covers ~10 column standard deviations
        at the default extents.
    samples_per_axis: points per quadrature axis; must be even so the mu
        nodes straddle zero without touching it.
    """

    mu_window: float = 40.0
    taper_fraction: float = 0.2
    X_window: float = 2.5
    samples_per_axis: int = 128

    def __post_init__(self) -> None:
        if not (self.mu_window > 0 and np.isfinite(self.mu_window)):
            raise ValueError(f"mu_window must be positive, got {self.mu_window}")
        if not (0.0 <= self.taper_fraction < 1.0):
            raise ValueError(f"taper_fraction must lie in [0, 1), got {self.taper_fraction}")
        if not (self.X_window > 0 and np.isfinite(self.X_window)):
            raise ValueError(f"X_window must be positive, got {self.X_window}")
        if self.samples_per_axis < 8 or self.samples_per_axis % 2:
            raise ValueError(
                f"samples_per_axis must be even and at least 8, got {self.samples_per_axis}"
            )


def raised_cosine_taper(x, half_width: float, fraction: float) -> np.ndarray:
    """1 on the inner (1-fraction) of [-half_width, half_width], cosine rolloff outside."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    if fraction <= 0.0:
        return np.where(ax <= half_width, 1.0, 0.0)
    flat = (1.0 - fraction) * half_width
    ramp = np.clip((ax - flat) / (fraction * half_width), 0.0, 1.0)
    out = 0.5 * (1.0 + np.cos(np.pi * ramp))
    return np.where(ax <= half_width, out, 0.0)


# ---------------------------------------------------------------------------
# Fourier-slice route


def tomogram_ft2(plane: TomogramPlane, taper_fraction: float = 0.0) -> ComplexField2D:
    """2D Fourier transform of a plane on its FFT frequency lattice.

    Returns (1/2pi) * sum w(X, mu) exp(i*(om_x*X + om_mu*mu)) * dX * dmu on
    ascending frequency grids, with the origin phase of both axes applied so
    bins agree with ``dft2_at`` at the same frequencies. The optional taper
    damps the mu edges of a window that truncates slowly-decaying data.
    """
    gx, gmu = plane.grid_x, plane.grid_mu
    vals = plane.values
    if taper_fraction > 0.0:
        center = 0.5 * (gmu.start + gmu.end)
        t = raised_cosine_taper(gmu.points - center, 0.5 * gmu.width, taper_fraction)
        vals = vals * t[None, :]
    nx, nm = gx.count, gmu.count
    # kernel exp(+2pi*i*(rn/N + sm/M)) on index space, then coordinate phases
    F = np.fft.ifft2(vals) * (nx * nm)
    wx = 2.0 * np.pi * np.fft.fftfreq(nx, d=gx.step)
    wm = 2.0 * np.pi * np.fft.fftfreq(nm, d=gmu.step)
    F = F * np.exp(1j * gx.start * wx)[:, None] * np.exp(1j * gmu.start * wm)[None, :]
    F *= gx.step * gmu.step / (2.0 * np.pi)
    F = np.fft.fftshift(F)
    wx = np.fft.fftshift(wx)
    wm = np.fft.fftshift(wm)
    grid_wx = UniformGrid1D(float(wx[0]), float(wx[1] - wx[0]), nx)
    grid_wm = UniformGrid1D(float(wm[0]), float(wm[1] - wm[0]), nm)
    return ComplexField2D(grid_wx, grid_wm, F)


def psi_slice_at(plane: TomogramPlane) -> complex:
    """Autocorrelation slice psi(nu)*conj(psi(0)) of one plane.

    Evaluates the plane's 2D Fourier sum at exactly (1, -nu/2); bin snapping
    would corrupt the quadratic phase of chirped states.
    """
    field = RealField2D(plane.grid_x, plane.grid_mu, plane.values)
    return dft2_at(field, 1.0, -0.5 * plane.nu)


def _plane_nu_axis(planes: Sequence[TomogramPlane]) -> tuple[list[TomogramPlane], UniformGrid1D, int]:
    ordered = sorted(planes, key=lambda p: p.nu)
    nus = np.array([p.nu for p in ordered])
    if nus.size < 3:
        raise MissingAnchorError("need at least 3 planes for a symmetric nu sweep")
    anchor = int(np.argmin(np.abs(nus)))
    if abs(nus[anchor]) > ANCHOR_FLOOR:
        raise MissingAnchorError(
            "psi reconstruction anchors on the nu=0 plane; include a plane at exactly nu=0"
        )
    steps = np.diff(nus)
    step = float(np.mean(steps))
    if step <= 0 or np.max(np.abs(steps - step)) > 1e-9 * max(1.0, abs(step)):
        raise ValueError("plane nu values must form a uniform grid")
    if abs(nus[0] + nus[-1]) > 1e-9:
        raise ValueError("plane nu grid must be symmetric about zero")
    return ordered, UniformGrid1D(float(nus[0]), step, int(nus.size)), anchor


def reconstruct_psi(
    planes: Sequence[TomogramPlane],
    phase_convention: str = "origin-real-positive",
) -> PsiReconstruction:
    """Wavefunction from a symmetric sweep of fixed-nu planes.

    The nu grid must be uniform, symmetric, and contain nu=0 exactly; the
    anchor slice there equals |psi(0)|^2 and fixes the scale. Tomograms are
    blind to one global phase, so a convention closes the gap; the only one
    implemented pins psi(0) real positive. The result is renormalized to
    unit L2 norm (the pre-normalization norm is reported).
    """
    if phase_convention != "origin-real-positive":
        raise ValueError(f"unknown phase convention {phase_convention!r}")
    ordered, grid_nu, anchor_idx = _plane_nu_axis(planes)
    slices = np.array([psi_slice_at(p) for p in ordered])
    s0 = slices[anchor_idx]
    if s0.real <= ANCHOR_FLOOR:
        raise NodeAtOriginError(
            f"anchor slice {s0!r} is consistent with psi(0)=0; the scale is undefined"
        )
    raw = slices / np.sqrt(s0.real)
    prenorm = float(np.sqrt(trapezoid_integrate(np.abs(raw) ** 2, grid_nu.step).real))
    psi = SampledWavefunction(grid_nu, raw / prenorm)
    return PsiReconstruction(
        psi=psi,
        autocorrelation=PsiAutocorrelation(grid_nu, slices),
        prenorm_l2=prenorm,
        anchor=float(s0.real),
        anchor_imag=float(s0.imag),
    )


# ---------------------------------------------------------------------------
# Direct kernel quadrature

Source = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


def _quad_nodes(cfg: InversionConfig):
    m = cfg.samples_per_axis
    mu = np.linspace(-cfg.mu_window, cfg.mu_window, m)  # even m: no node at 0
    wmu = np.full(m, mu[1] - mu[0])
    wmu[0] *= 0.5
    wmu[-1] *= 0.5
    wmu *= raised_cosine_taper(mu, cfg.mu_window, cfg.taper_fraction)
    u = np.linspace(-cfg.X_window, cfg.X_window, m)
    return mu, wmu, u


def _phase_column_weights(s: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Weights turning f(s_m * u_k) samples into Int f(Y) e^{iY} dY per column.

    Columns whose Y step resolves the unit-frequency phase (step <= 1.3,
    comfortably under the pi aliasing limit) get the plain end-halved rule,
    which is spectrally accurate for smooth decaying data. Wider columns
    switch to quadratic panels integrated exactly against the phase; a plain
    trapezoid-times-phase rule would alias their oscillation and turn
    negligible integrals into order one.
    """
    m, k = s.size, u.size
    h = np.abs(s) * (u[1] - u[0])  # per-column step in Y units
    filon = h > 1.3
    t = np.where(filon, h, 1.0)  # dummy 1.0 keeps the formulas finite
    sin_t, cos_t = np.sin(t), np.cos(t)
    I0 = 2.0 * sin_t / t
    I1 = 2j * (sin_t - t * cos_t) / t**2
    I2 = 2.0 * ((t**2 - 2.0) * sin_t + 2.0 * t * cos_t) / t**3
    w0 = 0.5 * (I2 - I1)
    w1 = I0 - I2
    w2 = 0.5 * (I2 + I1)
    eL = np.exp(1j * t)
    eR = np.exp(-1j * t)

    two_p = ((k - 1) // 2) * 2  # panel-covered node span: 0 .. two_p
    fw = np.zeros((m, k), dtype=np.complex128)
    fw[:, 0:two_p:2] += (w0 * eL)[:, None]
    fw[:, 2 : two_p + 1 : 2] += (w2 * eR)[:, None]
    fw[:, 1:two_p:2] = w1[:, None]
    if two_p < k - 1:  # odd interval count: close with one exact-phase linear cell
        z = 1j * t
        ez = np.exp(z)
        A = (ez - 1.0 - z) / z**2
        B = (ez * (z - 1.0) + 1.0) / z**2
        fw[:, k - 2] += A
        fw[:, k - 1] += B * eR

    trap = np.ones((m, k))
    trap[:, 0] = trap[:, -1] = 0.5
    W = np.where(filon[:, None], fw, trap)
    Y = s[:, None] * u[None, :]
    R = h[:, None] * W * np.exp(1j * Y)
    # average with the right-anchored mirror assembly: keeps the accuracy
    # order and makes conj(weight at -u) = weight at u hold exactly, so
    # rho(i,j) and conj(rho(j,i)) see identical quadrature
    return 0.5 * (R + np.conj(R[:, ::-1]))


def _column_integrals(
    source: Source, mu: np.ndarray, nu: float, u, extent
) -> np.ndarray:
    """Int w(X, mu_m, nu) e^{iX} dX for every mu node, scaled abscissas."""
    rq, rp = extent
    s = rq * np.abs(mu) + rp * abs(nu)
    Y = s[:, None] * u[None, :]
    w = source(Y, mu[:, None], nu)
    return (w * _phase_column_weights(s, u)).sum(axis=1)


def _density_matrix_raw(
    source: Source, grid: UniformGrid1D, cfg: InversionConfig, extent
) -> np.ndarray:
    x = grid.points
    n = grid.count
    mu, wmu, u = _quad_nodes(cfg)
    raw = np.zeros((n, n), dtype=np.complex128)
    for d in range(-(n - 1), n):
        nu = d * grid.step
        C = _column_integrals(source, mu, nu, u, extent) * wmu
        i = np.arange(max(0, d), n + min(0, d))
        j = i - d
        b = 0.5 * (x[i] + x[j])
        raw[i, j] = np.exp(-1j * np.outer(b, mu)) @ C / (2.0 * np.pi)
    return raw


def reconstruct_density_matrix(
    source: Source,
    grid: UniformGrid1D,
    cfg: InversionConfig = InversionConfig(),
    extent: tuple[float, float] = (4.0, 4.0),
) -> DensityMatrix:
    """Density matrix by direct inversion of a symplectic tomogram source.

    rho(X, X') = (1/2pi) Iint w(Y, mu, X - X') exp(i*(Y - mu*(X + X')/2)) dmu dY
    over the windowed, tapered mu domain. `source(X, mu, nu)` must accept
    broadcastable arrays for X and mu. `extent` = (r_q, r_p) approximates the
    state's position/momentum live radius (~4 standard deviations) and sets
    the per-column scale of the X abscissas.
    """
    raw = _density_matrix_raw(source, grid, cfg, extent)
    return DensityMatrix.from_raw(grid, raw)


def fresnel_as_symplectic_source(fresnel) -> Source:
    """Adapt Fresnel data to the symplectic source signature via rescaling.

    w(X, mu, nu) = (1/|mu|) w_F(X/mu, nu/mu); callers guarantee mu != 0.
    `fresnel` is either a callable (X', nu') -> values or a FresnelTomogram
    (bilinear interpolation, domain errors for out-of-grid lookups).
    """
    if isinstance(fresnel, FresnelTomogram):
        gx, gn, vals = fresnel.grid_x, fresnel.grid_nu, fresnel.values

        def lookup(xp, nup):
            from .tomography import _bilinear

            xp_b, nup_b = np.broadcast_arrays(xp, nup)
            out = np.empty(xp_b.shape)
            flat_x, flat_n, flat_o = xp_b.ravel(), nup_b.ravel(), out.ravel()
            for k in range(flat_x.size):
                flat_o[k] = _bilinear(gx, gn, vals, float(flat_x[k]), float(flat_n[k]))
            return out

    else:
        lookup = fresnel

    def source(X, mu, nu):
        return lookup(X / mu, nu / mu) / np.abs(mu)

    return source


def reconstruct_density_matrix_fresnel(
    fresnel,
    grid: UniformGrid1D,
    cfg: InversionConfig = InversionConfig(),
    extent: tuple[float, float] = (4.0, 4.0),
) -> DensityMatrix:
    """Density matrix from Fresnel data through the rescaling identity.

    Runs the same quadrature as :func:`reconstruct_density_matrix` (the mu
    nodes never touch zero), only the lookup path differs.
    """
    return reconstruct_density_matrix(fresnel_as_symplectic_source(fresnel), grid, cfg, extent)


def reconstruct_wigner(
    source: Source,
    grid_q: UniformGrid1D,
    grid_p: UniformGrid1D,
    cfg: InversionConfig = InversionConfig(),
    extent: tuple[float, float] = (4.0, 4.0),
) -> WignerFunction:
    """Wigner function by the triple-integral inversion of a tomogram source.

    W(q, p) = (1/(2pi)^2) Iiint w(X, mu, nu) exp(i*(X - mu*q - nu*p)) dX dmu dnu.
    The X integral per (mu, nu) node is the tomographic characteristic
    function, which decays fast; the (mu, nu) window reuses mu_window on both
    axes with a radial raised-cosine taper.
    """
    mu, _, u = _quad_nodes(cfg)
    # separate the taper from the mu weights: here it must act radially
    wmu = np.full(mu.size, mu[1] - mu[0])
    wmu[0] *= 0.5
    wmu[-1] *= 0.5
    nuv = mu.copy()
    wnu = wmu.copy()
    S = np.empty((mu.size, nuv.size), dtype=np.complex128)
    for j, nu in enumerate(nuv):
        S[:, j] = _column_integrals(source, mu, float(nu), u, extent)
    taper = raised_cosine_taper(np.hypot(mu[:, None], nuv[None, :]), cfg.mu_window, cfg.taper_fraction)
    G = S * taper * wmu[:, None] * wnu[None, :]
    Eq = np.exp(-1j * np.outer(grid_q.points, mu))
    Ep = np.exp(-1j * np.outer(nuv, grid_p.points))
    W = (Eq @ G @ Ep) / (4.0 * np.pi**2)
    residue = float(np.max(np.abs(W.imag)))
    return WignerFunction(grid_q, grid_p, W.real, residue)


SourceNd = Callable[..., np.ndarray]


def reconstruct_density_matrix_nd(
    source: SourceNd,
    grids: Sequence[UniformGrid1D],
    cfg: InversionConfig = InversionConfig(),
    extents: Sequence[tuple[float, float]] | None = None,
) -> DensityMatrixNd:
    """Product-kernel density-matrix inversion for N-axis tomogram sources.

    N=1 delegates to the 1D path; N=2 runs the full 4-fold quadrature
    rho(X1, X2, X1', X2') = (1/2pi)^2 Int w(Y1, Y2, mu1, mu2, nu1, nu2)
    * prod_k exp(i*(Y_k - mu_k*(X_k + X_k')/2)) with nu_k = X_k - X_k'.
    `source(X1, X2, mu1, mu2, nu1, nu2)` must broadcast. N >= 3 is not
    supported (separable states factor into 1D reconstructions instead).
    """
    grids = tuple(grids)
    n_axes = len(grids)
    if extents is None:
        extents = [(4.0, 4.0)] * n_axes
    if n_axes == 1:
        def source1(X, mu, nu):
            return source(X, mu, nu)

        dm = reconstruct_density_matrix(source1, grids[0], cfg, extents[0])
        return DensityMatrixNd((grids[0],), dm.values, dm.asymmetry)
    if n_axes != 2:
        raise UnsupportedSizeError(f"general reconstruction supports N<=2, got {n_axes}")
    g1, g2 = grids
    (rq1, rp1), (rq2, rp2) = extents
    mu, wmu, u = _quad_nodes(cfg)
    x1, x2 = g1.points, g2.points
    n1, n2 = g1.count, g2.count
    raw = np.zeros((n1, n2, n1, n2), dtype=np.complex128)
    for d1 in range(-(n1 - 1), n1):
        nu1 = d1 * g1.step
        s1 = rq1 * np.abs(mu) + rp1 * abs(nu1)
        Y1 = s1[:, None] * u[None, :]
        E1 = _phase_column_weights(s1, u)  # (m, k)
        i1 = np.arange(max(0, d1), n1 + min(0, d1))
        j1 = i1 - d1
        b1 = 0.5 * (x1[i1] + x1[j1])
        P1 = np.exp(-1j * np.outer(b1, mu)) * wmu[None, :]
        for d2 in range(-(n2 - 1), n2):
            nu2 = d2 * g2.step
            s2 = rq2 * np.abs(mu) + rp2 * abs(nu2)
            Y2 = s2[:, None] * u[None, :]
            E2 = _phase_column_weights(s2, u)
            w4 = source(
                Y1[:, :, None, None],
                Y2[None, None, :, :],
                mu[:, None, None, None],
                mu[None, None, :, None],
                nu1,
                nu2,
            )
            C2 = np.einsum("akbl,ak,bl->ab", w4, E1, E2, optimize=True)
            i2 = np.arange(max(0, d2), n2 + min(0, d2))
            j2 = i2 - d2
            b2 = 0.5 * (x2[i2] + x2[j2])
            P2 = np.exp(-1j * np.outer(b2, mu)) * wmu[None, :]
            block = (P1 @ C2 @ P2.T) / (2.0 * np.pi) ** 2
            raw[i1[:, None], i2[None, :], j1[:, None], j2[None, :]] = block
    return DensityMatrixNd.from_raw(grids, raw)


# ---------------------------------------------------------------------------
# Plane-set-backed inversion (no off-grid lookups; used by the CLI)


def _plane_char_vector(plane: TomogramPlane) -> np.ndarray:
    """Int w(X, mu_m) e^{iX} dX on the plane's own X grid, for every mu node."""
    gx = plane.grid_x
    wx = np.full(gx.count, gx.step)
    wx[0] *= 0.5
    wx[-1] *= 0.5
    return (np.exp(1j * gx.points) * wx) @ plane.values


def density_matrix_from_planes(
    planes: Sequence[TomogramPlane],
    cfg: InversionConfig = InversionConfig(),
    grid: UniformGrid1D | None = None,
) -> DensityMatrix:
    """Density matrix using plane nodes themselves as quadrature nodes.

    The planes' nu grid supplies every X - X' difference, so the output grid
    step equals the plane spacing and no interpolation happens anywhere. Each
    plane's own (X, mu) grid does the inner integrals; cfg's window and taper
    mask the mu nodes.
    """
    ordered, grid_nu, anchor_idx = _plane_nu_axis(planes)
    step = grid_nu.step
    if grid is None:
        half = (grid_nu.count - 1) // 2
        count = half + 1 if half + 1 >= 2 else 2
        start = -step * (count // 2)
        grid = UniformGrid1D(start, step, count)
    else:
        if abs(grid.step - step) > 1e-9 * step:
            raise ValueError("output grid step must equal the plane nu spacing")
    x = grid.points
    n = grid.count
    raw = np.zeros((n, n), dtype=np.complex128)
    for d in range(-(n - 1), n):
        nu = d * step
        k = anchor_idx + d
        if k < 0 or k >= grid_nu.count:
            raise ValueError(f"no plane at nu = {nu}; extend the sweep or shrink the grid")
        plane = ordered[k]
        mu = plane.grid_mu.points
        wmu = np.full(mu.size, plane.grid_mu.step)
        wmu[0] *= 0.5
        wmu[-1] *= 0.5
        center = 0.5 * (plane.grid_mu.start + plane.grid_mu.end)
        wmu = wmu * raised_cosine_taper(
            mu - center, 0.5 * plane.grid_mu.width, cfg.taper_fraction
        )
        C = _plane_char_vector(plane) * wmu
        i = np.arange(max(0, d), n + min(0, d))
        j = i - d
        b = 0.5 * (x[i] + x[j])
        raw[i, j] = np.exp(-1j * np.outer(b, mu)) @ C / (2.0 * np.pi)
    return DensityMatrix.from_raw(grid, raw)


def wigner_from_planes(
    planes: Sequence[TomogramPlane],
    grid_q: UniformGrid1D,
    grid_p: UniformGrid1D,
    cfg: InversionConfig = InversionConfig(),
) -> WignerFunction:
    """Wigner function from a plane sweep; plane nodes are the quadrature nodes.

    Iterated quadrature: each plane integrates its own (X, mu) grid, the
    plane spacing integrates nu. The taper acts on each plane's mu span and
    on the outer nu range.
    """
    ordered = sorted(planes, key=lambda p: p.nu)
    nus = np.array([p.nu for p in ordered])
    if nus.size < 3:
        raise ValueError("need at least 3 planes")
    dnu = np.gradient(nus)
    nu_half = max(abs(nus[0]), abs(nus[-1]))
    tnu = raised_cosine_taper(nus, nu_half, cfg.taper_fraction)
    acc = np.zeros((grid_q.count, grid_p.count), dtype=np.complex128)
    for plane, nu, wn, tn in zip(ordered, nus, dnu, tnu):
        mu = plane.grid_mu.points
        wmu = np.full(mu.size, plane.grid_mu.step)
        wmu[0] *= 0.5
        wmu[-1] *= 0.5
        center = 0.5 * (plane.grid_mu.start + plane.grid_mu.end)
        wmu = wmu * raised_cosine_taper(
            mu - center, 0.5 * plane.grid_mu.width + 1e-12, cfg.taper_fraction
        )
        C = _plane_char_vector(plane) * wmu
        inner = np.exp(-1j * np.outer(grid_q.points, mu)) @ C  # (n_q,)
        phase_p = np.exp(-1j * nu * grid_p.points)
        acc += (tn * wn) * np.outer(inner, phase_p)
    W = acc / (4.0 * np.pi**2)
    residue = float(np.max(np.abs(W.imag)))
    return WignerFunction(grid_q, grid_p, W.real, residue)
