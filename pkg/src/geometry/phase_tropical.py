"""
The phase tropical line H_trop as the union of four strata:

    Leg1    x <= 0, y = 0,      psi = pi
    Leg2    x = 0,  y <= 0,     phi = pi
    Leg3    x = y >= 0,         psi = phi + pi
    Vertex  x = y = 0,          (phi, psi) in the closed coamoeba

with its subdivision into H1trop/H2trop/H3trop.
"""
import math
from typing import FrozenSet, Tuple

import numpy as np

from ..config import TOLERANCES
from ..pydantic_models.geometry import AmbientPoint, TropPart, TropStratum
from ..utils.exceptions import DomainError
from .constants import (
    A1_VERTICES,
    A2_VERTICES,
    B1_VERTICES,
    B2_VERTICES,
    C1_VERTICES,
    C2_VERTICES,
    COAMOEBA_TRIANGLES,
    PI,
)
from .torus import angle_difference, torus_distance_to_triangles, torus_in_triangles

_STRATA = tuple(TropStratum)
_PART_REGIONS = (
    (TropPart.H1TROP, (A1_VERTICES, A2_VERTICES)),
    (TropPart.H2TROP, (B1_VERTICES, B2_VERTICES)),
    (TropPart.H3TROP, (C1_VERTICES, C2_VERTICES)),
)


def stratum_distances(points: np.ndarray) -> np.ndarray:
    """Distance from each point to each stratum, shape (n, 4) in TropStratum order."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y, phi, psi = points.T
    leg1 = np.maximum(x, 0.0) ** 2 + y ** 2 + angle_difference(psi, PI) ** 2
    leg2 = x ** 2 + np.maximum(y, 0.0) ** 2 + angle_difference(phi, PI) ** 2
    s = np.maximum(0.5 * (x + y), 0.0)
    # psi = phi + pi is a line of slope 1 on the torus
    leg3 = (x - s) ** 2 + (y - s) ** 2 + 0.5 * angle_difference(psi - phi, PI) ** 2
    vertex = x ** 2 + y ** 2 + torus_distance_to_triangles(points[:, 2:], COAMOEBA_TRIANGLES) ** 2
    return np.sqrt(np.column_stack([leg1, leg2, leg3, vertex]))


def htrop_distances(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Nearest-stratum distance and the stratum index (ties go to the earlier stratum)."""
    table = stratum_distances(points)
    nearest = np.argmin(table, axis=1)
    return table[np.arange(table.shape[0]), nearest], nearest


def htrop_distance(point: AmbientPoint) -> Tuple[float, TropStratum]:
    """Distance from P to H_trop and the stratum that realises it; 0 iff P is on H_trop."""
    distance, nearest = htrop_distances(point.as_array()[None, :])
    return float(distance[0]), _STRATA[int(nearest[0])]


def htrop_part_masks(points: np.ndarray, tol: float = TOLERANCES.endpoint_tol) -> np.ndarray:
    """Boolean array (n, 3): membership in H1trop, H2trop, H3trop for points of H_trop."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = points[:, 0], points[:, 1]
    angles = points[:, 2:]
    rays = (
        (np.abs(y) <= tol) & (x <= tol),
        (np.abs(x) <= tol) & (y <= tol),
        (np.abs(x - y) <= tol) & (x >= -tol),
    )
    return np.column_stack([
        on_ray & torus_in_triangles(angles, regions, tol)
        for on_ray, (_, regions) in zip(rays, _PART_REGIONS)
    ])


def htrop_subdivision(point: AmbientPoint, tol: float = TOLERANCES.endpoint_tol) -> FrozenSet[TropPart]:
    distance, _ = htrop_distance(point)
    if not math.isfinite(distance) or distance > tol:
        raise DomainError(
            f"Point is not on H_trop (distance {distance:.3e})",
            detail=point.model_dump(),
        )
    mask = htrop_part_masks(point.as_array()[None, :], tol)[0]
    return frozenset(part for (part, _), hit in zip(_PART_REGIONS, mask) if hit)
