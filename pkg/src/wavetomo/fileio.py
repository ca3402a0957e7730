"""Text file format for every dataset the CLI produces or consumes.

Layout: first line is ``#MANIFEST `` followed by one line of JSON carrying
{version, kind, grids, params, provenance}; the rest is whitespace-separated
columns (coordinates first, then values; complex values as a real and an
imaginary column). Floats are written with 17 significant digits, so a
write-then-read round trip is bit exact. 2D kinds insert a blank line
between blocks of constant first coordinate, which makes the files directly
plottable as surfaces by gnuplot's nonuniform-matrix mode.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ManifestError
from .grid import SampledWavefunction, UniformGrid1D
from .reconstruct import DensityMatrix, PsiAutocorrelation, WignerFunction
from .tomography import FresnelTomogram, OpticalTomogram, TomogramPlane

__all__ = [
    "FORMAT_VERSION",
    "Manifest",
    "WidthMap",
    "read_file",
    "write_wavefunction",
    "write_plane",
    "write_optical",
    "write_fresnel",
    "write_density_matrix",
    "write_wigner",
    "write_autocorrelation",
    "write_width_map",
]

FORMAT_VERSION = "1"

MAGIC = "#MANIFEST "

# grids a payload of each kind must carry
KIND_GRID_COUNT = {
    "wavefunction": 1,
    "autocorrelation": 1,
    "density_matrix": 1,
    "width_map": 1,
    "tomogram_plane": 2,
    "fresnel_tomogram": 2,
    "wigner": 2,
}


@dataclass(frozen=True)
class WidthMap:
    """Profile 1/e half-width along one parameter line; CLI convenience output."""

    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.grid.count,):
            raise ValueError("width values length does not match the grid")
        vals = np.array(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Manifest:
    kind: str
    grids: tuple[UniformGrid1D, ...]
    params: dict = field(default_factory=dict)
    provenance: str = ""
    version: str = FORMAT_VERSION

    def __post_init__(self) -> None:
        if self.kind not in KIND_GRID_COUNT:
            raise ManifestError(f"unknown kind {self.kind!r}")
        if len(self.grids) != KIND_GRID_COUNT[self.kind]:
            raise ManifestError(
                f"kind {self.kind!r} requires {KIND_GRID_COUNT[self.kind]} grids, "
                f"got {len(self.grids)}"
            )

    def to_line(self) -> str:
        doc = {
            "version": self.version,
            "kind": self.kind,
            "grids": [
                {"start": g.start, "step": g.step, "count": g.count} for g in self.grids
            ],
            "params": self.params,
            "provenance": self.provenance.replace("\n", " "),
        }
        return MAGIC + json.dumps(doc, separators=(",", ":"), sort_keys=True)

    @staticmethod
    def from_line(line: str) -> "Manifest":
        if not line.startswith(MAGIC):
            raise ManifestError("file does not start with a #MANIFEST header line")
        try:
            doc = json.loads(line[len(MAGIC):])
        except json.JSONDecodeError as e:
            raise ManifestError(f"manifest JSON is malformed: {e}") from None
        try:
            grids = tuple(
                UniformGrid1D(float(g["start"]), float(g["step"]), int(g["count"]))
                for g in doc["grids"]
            )
            return Manifest(
                kind=doc["kind"],
                grids=grids,
                params=dict(doc.get("params", {})),
                provenance=str(doc.get("provenance", "")),
                version=str(doc.get("version", FORMAT_VERSION)),
            )
        except ManifestError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ManifestError(f"manifest fields are invalid: {e}") from None


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write(path, manifest: Manifest, columns: str, rows) -> None:
    """rows: iterable of tuples of floats, or None for a block separator."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(manifest.to_line() + "\n")
        f.write(f"# columns: {columns}\n")
        for row in rows:
            if row is None:
                f.write("\n")
            else:
                f.write(" ".join(_fmt(v) for v in row) + "\n")


def _rows_1d(xs, cols) -> list:
    return [(x, *c) for x, c in zip(xs, cols)]


def _rows_2d(xs, ys, per_cell):
    first = True
    for i, x in enumerate(xs):
        if not first:
            yield None
        first = False
        for j, y in enumerate(ys):
            yield (x, y, *per_cell(i, j))


def write_wavefunction(path, psi: SampledWavefunction, params=None, provenance="") -> Manifest:
    m = Manifest("wavefunction", (psi.grid,), dict(params or {}), provenance)
    v = psi.values
    _write(path, m, "x re im", _rows_1d(psi.grid.points, zip(v.real, v.imag)))
    return m


def write_autocorrelation(path, ac: PsiAutocorrelation, params=None, provenance="") -> Manifest:
    m = Manifest("autocorrelation", (ac.grid_nu,), dict(params or {}), provenance)
    v = ac.values
    _write(path, m, "nu re im", _rows_1d(ac.grid_nu.points, zip(v.real, v.imag)))
    return m


def write_width_map(path, wm: WidthMap, params=None, provenance="") -> Manifest:
    m = Manifest("width_map", (wm.grid,), dict(params or {}), provenance)
    _write(path, m, "nu width", _rows_1d(wm.grid.points, ((w,) for w in wm.values)))
    return m


def write_plane(path, plane: TomogramPlane, params=None, provenance="") -> Manifest:
    p = dict(params or {})
    p["nu"] = float(plane.nu)
    m = Manifest("tomogram_plane", (plane.grid_x, plane.grid_mu), p, provenance)
    _write(
        path,
        m,
        "X mu w",
        _rows_2d(
            plane.grid_x.points,
            plane.grid_mu.points,
            lambda i, j: (plane.values[i, j],),
        ),
    )
    return m


def write_optical(path, opt: OpticalTomogram, params=None, provenance="") -> Manifest:
    p = dict(params or {})
    p["variant"] = "optical"
    m = Manifest("tomogram_plane", (opt.grid_x, opt.grid_theta), p, provenance)
    _write(
        path,
        m,
        "X theta w",
        _rows_2d(
            opt.grid_x.points,
            opt.grid_theta.points,
            lambda i, j: (opt.values[i, j],),
        ),
    )
    return m


def write_fresnel(path, wf: FresnelTomogram, params=None, provenance="") -> Manifest:
    m = Manifest("fresnel_tomogram", (wf.grid_x, wf.grid_nu), dict(params or {}), provenance)
    _write(
        path,
        m,
        "X nu w",
        _rows_2d(wf.grid_x.points, wf.grid_nu.points, lambda i, j: (wf.values[i, j],)),
    )
    return m


def write_density_matrix(path, dm: DensityMatrix, params=None, provenance="") -> Manifest:
    p = dict(params or {})
    p["asymmetry"] = float(dm.asymmetry)
    m = Manifest("density_matrix", (dm.grid,), p, provenance)
    _write(
        path,
        m,
        "X Xp re im",
        _rows_2d(
            dm.grid.points,
            dm.grid.points,
            lambda i, j: (dm.values[i, j].real, dm.values[i, j].imag),
        ),
    )
    return m


def write_wigner(path, w: WignerFunction, params=None, provenance="") -> Manifest:
    p = dict(params or {})
    p["imag_residue"] = float(w.imag_residue)
    m = Manifest("wigner", (w.grid_q, w.grid_p), p, provenance)
    _write(
        path,
        m,
        "q p W",
        _rows_2d(w.grid_q.points, w.grid_p.points, lambda i, j: (w.values[i, j],)),
    )
    return m


def _value_columns(path, lines, n_coord: int, n_val: int, n_rows: int) -> np.ndarray:
    out = np.empty((n_rows, n_val))
    k = 0
    for ln, line in lines:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != n_coord + n_val:
            raise ManifestError(
                f"{path}:{ln}: expected {n_coord + n_val} columns, got {len(parts)}"
            )
        if k >= n_rows:
            raise ManifestError(f"{path}:{ln}: more data rows than the grids allow")
        try:
            out[k] = [float(p) for p in parts[n_coord:]]
        except ValueError:
            raise ManifestError(f"{path}:{ln}: non-numeric value column") from None
        k += 1
    if k != n_rows:
        raise ManifestError(f"{path}: expected {n_rows} data rows, found {k}")
    return out


def read_file(path):
    """Parse any dataset file; returns (manifest, payload).

    The payload type follows the manifest kind (tomogram_plane splits into
    TomogramPlane or OpticalTomogram on params.variant). All structural
    problems raise ManifestError; domain validation failures of the payload
    constructors are wrapped into ManifestError as well.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestError(f"cannot read {path}: {e}") from None
    lines = text.splitlines()
    if not lines:
        raise ManifestError(f"{path} is empty")
    manifest = Manifest.from_line(lines[0])
    body = list(enumerate(lines[1:], start=2))
    g = manifest.grids
    kind = manifest.kind
    try:
        if kind in ("wavefunction", "autocorrelation"):
            cols = _value_columns(path, body, 1, 2, g[0].count)
            vals = cols[:, 0] + 1j * cols[:, 1]
            if kind == "wavefunction":
                return manifest, SampledWavefunction(g[0], vals)
            return manifest, PsiAutocorrelation(g[0], vals)
        if kind == "width_map":
            cols = _value_columns(path, body, 1, 1, g[0].count)
            return manifest, WidthMap(g[0], cols[:, 0])
        if kind == "density_matrix":
            n = g[0].count
            cols = _value_columns(path, body, 2, 2, n * n)
            vals = (cols[:, 0] + 1j * cols[:, 1]).reshape(n, n)
            return manifest, DensityMatrix(
                g[0], vals, float(manifest.params.get("asymmetry", 0.0))
            )
        if kind == "tomogram_plane":
            shape = (g[0].count, g[1].count)
            cols = _value_columns(path, body, 2, 1, shape[0] * shape[1])
            vals = cols[:, 0].reshape(shape)
            if manifest.params.get("variant") == "optical":
                return manifest, OpticalTomogram(g[0], g[1], vals)
            if "nu" not in manifest.params:
                raise ManifestError(f"{path}: tomogram_plane manifest lacks params.nu")
            return manifest, TomogramPlane(float(manifest.params["nu"]), g[0], g[1], vals)
        if kind == "fresnel_tomogram":
            shape = (g[0].count, g[1].count)
            cols = _value_columns(path, body, 2, 1, shape[0] * shape[1])
            return manifest, FresnelTomogram(g[0], g[1], cols[:, 0].reshape(shape))
        if kind == "wigner":
            shape = (g[0].count, g[1].count)
            cols = _value_columns(path, body, 2, 1, shape[0] * shape[1])
            return manifest, WignerFunction(
                g[0], g[1], cols[:, 0].reshape(shape),
                float(manifest.params.get("imag_residue", 0.0)),
            )
    except ManifestError:
        raise
    except ValueError as e:
        raise ManifestError(f"{path}: payload failed validation: {e}") from None
    raise ManifestError(f"unknown kind {kind!r}")  # unreachable; Manifest validates
