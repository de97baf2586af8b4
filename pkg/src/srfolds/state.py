"""Small value types shared across the geometric structures."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class GeodesicState:
    """A point on a normal geodesic: time, position coordinates, momentum."""

    t: float
    position: tuple[float, ...]
    momentum: tuple[float, ...]


@dataclass(frozen=True)
class JacobiCoords:
    """Linearized flow data along a geodesic: momentum part p, field part x.

    For the planar structure these are pairs; for the group structures they are
    triples in the moving-frame order (a, b, c).
    """

    p: tuple[float, ...]
    x: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if len(self.p) != len(self.x):
            raise InvalidInput(
                f"p and x must have equal length, got {len(self.p)} and {len(self.x)}"
            )
