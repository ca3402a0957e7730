"""Exception types shared across the package."""
from __future__ import annotations

__all__ = [
    "WavetomoError",
    "DegeneratePointError",
    "DomainLookupError",
    "MissingAnchorError",
    "NodeAtOriginError",
    "SingularFrequencyError",
    "UnsupportedSizeError",
    "ManifestError",
]


class WavetomoError(Exception):
    """Base class for package-specific failures."""


class DegeneratePointError(WavetomoError, ValueError):
    """Raised where a transform is undefined, e.g. mu and nu both below threshold."""


class DomainLookupError(WavetomoError, ValueError):
    """A rescaled lookup left the sampled domain.

    Carries the offending point so callers can report or enlarge the grid.
    """

    def __init__(self, message: str, point: tuple[float, ...]):
        super().__init__(f"{message}: point {point}")
        self.point = point


class MissingAnchorError(WavetomoError, ValueError):
    """psi reconstruction anchors on the nu=0 plane; none was supplied."""


class NodeAtOriginError(WavetomoError, ValueError):
    """The wavefunction vanishes at the origin, so the anchor value is unusable."""


class SingularFrequencyError(WavetomoError, ValueError):
    """The closed-form transform is singular at the requested frequency."""


class UnsupportedSizeError(WavetomoError, ValueError):
    """Dimension count outside the supported range for this operation."""


class ManifestError(WavetomoError, ValueError):
    """A data file's manifest line or column layout could not be parsed."""
