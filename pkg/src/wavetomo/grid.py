"""Uniform grids, sampled fields and the small Fourier/quadrature primitives.

Conventions used throughout the package:

* grids are uniform, ascending, described by (start, step, count);
* 2D field values are row-major, ``values[i, j]`` belonging to
  ``(grid_x.point(i), grid_y.point(j))``;
* ``dft2_at`` evaluates a plain Riemann sum against true grid coordinates,
  so frequencies are physical, never bin indices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "UniformGrid1D",
    "ComplexField1D",
    "RealField2D",
    "ComplexField2D",
    "SampledWavefunction",
    "trapezoid_integrate",
    "fft2",
    "dft2_at",
]

NORM_TOL = 1e-6


@dataclass(frozen=True)
class UniformGrid1D:
    """Uniform 1D grid; point(k) = start + k*step for k in range(count)."""

    start: float
    step: float
    count: int

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and np.isfinite(self.step)):
            raise ValueError(f"grid step must be positive and finite, got {self.step}")
        if self.count < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.count}")
        if not np.isfinite(self.start):
            raise ValueError(f"grid start must be finite, got {self.start}")

    def point(self, k: int) -> float:
        return self.start + k * self.step

    @property
    def end(self) -> float:
        return self.start + (self.count - 1) * self.step

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def width(self) -> float:
        return (self.count - 1) * self.step

    @staticmethod
    def symmetric(half_width: float, count: int) -> "UniformGrid1D":
        """Grid spanning [-half_width, half_width] with `count` points."""
        if count < 2:
            raise ValueError(f"grid needs at least 2 points, got {count}")
        step = 2.0 * half_width / (count - 1)
        return UniformGrid1D(-half_width, step, count)


def _as_array(values, shape: tuple[int, ...], dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape != shape:
        raise ValueError(f"values shape {arr.shape} does not match grid shape {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("field values must be finite")
    out = np.array(arr)  # private copy; fields are immutable once constructed
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ComplexField1D:
    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", _as_array(self.values, (self.grid.count,), np.complex128)
        )


@dataclass(frozen=True)
class RealField2D:
    grid_x: UniformGrid1D
    grid_y: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.grid_x.count, self.grid_y.count)
        object.__setattr__(self, "values", _as_array(self.values, shape, np.float64))


@dataclass(frozen=True)
class ComplexField2D:
    grid_x: UniformGrid1D
    grid_y: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.grid_x.count, self.grid_y.count)
        object.__setattr__(self, "values", _as_array(self.values, shape, np.complex128))


class SampledWavefunction:
    """Complex wavefunction samples on a uniform grid, unit L2 norm.

    The squared norm (trapezoid rule) must sit within 1e-6 of 1; use
    :meth:`normalized` to rescale arbitrary samples first.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: UniformGrid1D, values) -> None:
        vals = _as_array(values, (grid.count,), np.complex128)
        norm2 = float(trapezoid_integrate(np.abs(vals) ** 2, grid.step).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"wavefunction squared norm {norm2!r} deviates from 1 by more than {NORM_TOL}"
            )
        self.grid = grid
        self.values = vals

    @staticmethod
    def normalized(grid: UniformGrid1D, values) -> "SampledWavefunction":
        vals = np.asarray(values, dtype=np.complex128)
        norm2 = float(trapezoid_integrate(np.abs(vals) ** 2, grid.step).real)
        if norm2 <= 0.0:
            raise ValueError("cannot normalize identically-zero samples")
        return SampledWavefunction(grid, vals / np.sqrt(norm2))

    def norm_squared(self) -> float:
        return float(trapezoid_integrate(np.abs(self.values) ** 2, self.grid.step).real)

    def interp_at(self, x) -> np.ndarray:
        """Linear interpolation of the complex samples; zero outside the grid."""
        x = np.asarray(x, dtype=np.float64)
        pts = self.grid.points
        re = np.interp(x, pts, self.values.real, left=0.0, right=0.0)
        im = np.interp(x, pts, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def abs2_at(self, x) -> np.ndarray:
        """Linear interpolation of |psi|^2; zero outside the grid."""
        x = np.asarray(x, dtype=np.float64)
        return np.interp(x, self.grid.points, np.abs(self.values) ** 2, left=0.0, right=0.0)


def trapezoid_integrate(values, step: float):
    """Composite trapezoid integral of uniformly sampled values.

    Parameters
    ----------
    values : array_like
        At least two samples; real or complex.
    step : float
        Positive grid spacing.

    Returns
    -------
    float or complex
    """
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError("trapezoid_integrate needs a 1D array of at least 2 samples")
    if not (step > 0.0 and np.isfinite(step)):
        raise ValueError(f"step must be positive and finite, got {step}")
    return np.trapezoid(arr, dx=step)


def fft2(field: ComplexField2D, sign: int) -> ComplexField2D:
    """Unnormalized 2D DFT with kernel exp(sign * 2*pi*i * (r*n/N + s*m/M)).

    Pure index-space primitive: the grids are carried through unchanged and
    no 1/(N*M) factor is applied, so fft2(fft2(f, +1), -1)/(N*M) == f.
    Frequency interpretation, scaling and origin phases are the caller's job
    (see ``tomogram_ft2``).
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if sign == +1:
        out = np.fft.ifft2(field.values) * (field.grid_x.count * field.grid_y.count)
    else:
        out = np.fft.fft2(field.values)
    return ComplexField2D(field.grid_x, field.grid_y, out)


def dft2_at(field, omega_x: float, omega_y: float) -> complex:
    """Riemann-sum Fourier coefficient of a 2D field at an arbitrary frequency.

    Computes (1/2pi) * sum_{n,m} f[n,m] exp(i*(omega_x*X_n + omega_y*Y_m)) * dX * dY
    with X_n, Y_m the true grid coordinates. Exact frequencies, no bin snapping.
    """
    gx, gy = field.grid_x, field.grid_y
    ex = np.exp(1j * omega_x * gx.points)
    ey = np.exp(1j * omega_y * gy.points)
    total = ex @ (field.values @ ey)
    return complex(total * gx.step * gy.step / (2.0 * np.pi))
