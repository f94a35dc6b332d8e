"""
Pydantic models for points, region tags and radial frames
"""
from enum import Enum
from typing import FrozenSet, Iterable, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..geometry.constants import TAU

# Rounding slack accepted on fundamental-domain coordinates.
_PLANE_SLACK = 1e-12


class Major(str, Enum):
    """Major piece of H (or of H_trop after appending 'trop')."""
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"


class Sub(str, Enum):
    """Piece of H1 on either side of the curve y = 2x + ln2."""
    TRIANGLE = "tri"
    LEG = "leg"


class Side(str, Enum):
    """Coamoeba triangle carrying the arguments of an H1 point."""
    LOWER = "lo"
    UPPER = "up"


class BoundaryKind(str, Enum):
    """Which boundary equation of the amoeba a point satisfies."""
    X_MINUS_Y = "x-y"
    Y_MINUS_X = "y-x"
    X_PLUS_Y = "x+y"
    NONE = "none"


class TropStratum(str, Enum):
    """The four strata of the phase tropical line."""
    LEG1 = "leg1"
    LEG2 = "leg2"
    LEG3 = "leg3"
    VERTEX = "vertex"


class TropPart(str, Enum):
    """Pieces of H_trop matching the three pieces of H."""
    H1TROP = "h1trop"
    H2TROP = "h2trop"
    H3TROP = "h3trop"


class SamplingStrategy(str, Enum):
    COAMOEBA_GRID = "coamoeba"
    AMOEBA_LIFT = "amoeba"
    COMPLEX_CHART = "chart"
    SEAM_CURVES = "seams"


def ordered(values: Iterable[Enum]) -> List[Enum]:
    """Sort enum members by declaration order."""
    values = list(values)
    if not values:
        return []
    members = list(type(values[0]))
    return sorted(values, key=members.index)


class PlanePoint(BaseModel):
    """A point of the fundamental domain [0, 2pi]^2 treated as planar."""

    model_config = ConfigDict(frozen=True)

    u: float = Field(..., allow_inf_nan=False)
    v: float = Field(..., allow_inf_nan=False)

    @field_validator("u", "v")
    @classmethod
    def _inside_domain(cls, value: float) -> float:
        if value < -_PLANE_SLACK or value > TAU + _PLANE_SLACK:
            raise ValueError(f"coordinate {value} outside the fundamental domain")
        return min(max(value, 0.0), TAU)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v])


class AmbientPoint(BaseModel):
    """A point (x, y, phi, psi) of R^2 x T^2 in log/angle coordinates."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., allow_inf_nan=False, description="log|z1|")
    y: float = Field(..., allow_inf_nan=False, description="log|z2|")
    phi: float = Field(..., ge=0.0, lt=TAU, allow_inf_nan=False, description="arg z1")
    psi: float = Field(..., ge=0.0, lt=TAU, allow_inf_nan=False, description="arg z2")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.phi, self.psi])

    @classmethod
    def from_array(cls, values) -> "AmbientPoint":
        x, y, phi, psi = (float(v) for v in values)
        return cls(x=x, y=y, phi=phi, psi=psi)


class RegionTag(BaseModel):
    """Classification of a point of H; sets carry more than one member on seams."""

    model_config = ConfigDict(frozen=True)

    major: FrozenSet[Major]
    sub: FrozenSet[Sub] = frozenset()
    side: FrozenSet[Side] = frozenset()

    def serialize(self) -> tuple:
        """Short-string form used in frame files, e.g. ('h1|h2', 'tri', 'lo')."""
        return tuple(
            "|".join(member.value for member in ordered(group))
            for group in (self.major, self.sub, self.side)
        )

    @classmethod
    def parse(cls, major: str, sub: str, side: str) -> "RegionTag":
        def split(text: str, enum_type):
            return frozenset(enum_type(item) for item in text.split("|") if item)
        return cls(major=split(major, Major), sub=split(sub, Sub), side=split(side, Side))


class RadialFrame(BaseModel):
    """Per-point data of the radial coamoeba flow."""

    model_config = ConfigDict(frozen=True)

    center: PlanePoint
    qprime: PlanePoint = Field(..., description="where the ray from the centre meets psi = pi")
    b: float = Field(..., gt=0, description="distance from the centre to qprime")
    a: float = Field(..., gt=0, description="distance to Arg(Gamma1) (triangle) or to the point (leg)")

    @property
    def scale(self) -> float:
        """Radial factor reached at t = 1."""
        return self.b / self.a
