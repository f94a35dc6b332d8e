"""
Planar and torus primitives: angle normalization, the flat metric on the
fundamental domain, ray/segment geometry, triangles and bracketed bisection.
"""
import math
from typing import Callable, NewType, Sequence, Tuple

import numpy as np

from ..pydantic_models.geometry import PlanePoint
from ..utils.exceptions import BracketError, DegenerateGeometryError, DomainError
from .constants import PI, TAU

Angle = NewType("Angle", float)

_MAX_BISECTION_STEPS = 200
_LATTICE_SHIFTS = np.array([(i * TAU, j * TAU) for i in (-1, 0, 1) for j in (-1, 0, 1)])


def normalize_angle(theta: float) -> Angle:
    """Representative of theta in [0, 2pi)."""
    if not math.isfinite(theta):
        raise DomainError(f"Cannot normalize non-finite angle {theta}")
    value = theta % TAU
    # x % TAU rounds up to TAU for tiny negative x
    if value >= TAU:
        value = 0.0
    return Angle(value)


def normalize_angles(theta: np.ndarray) -> np.ndarray:
    """Vectorized normalize_angle."""
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise DomainError("Cannot normalize non-finite angles")
    value = np.mod(theta, TAU)
    return np.where(value >= TAU, 0.0, value)


def angle_difference(a, b):
    """Signed difference a - b wrapped into [-pi, pi)."""
    return np.mod(np.asarray(a) - np.asarray(b) + PI, TAU) - PI


def flat_distance(p: PlanePoint, q: PlanePoint) -> float:
    """Euclidean distance inside the fundamental domain (no wrap-around)."""
    return math.hypot(p.u - q.u, p.v - q.v)


def ray_hits_horizontal(
    cu: np.ndarray, cv: np.ndarray, pu: np.ndarray, pv: np.ndarray, level: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Where the rays from (cu, cv) through (pu, pv) meet the line v = level."""
    dv = pv - cv
    if np.any(np.abs(dv) < 1e-15):
        raise DegenerateGeometryError(
            "Ray is parallel to the target level",
            detail={"count": int(np.count_nonzero(np.abs(dv) < 1e-15)), "level": level},
        )
    s = (level - cv) / dv
    if np.any(s < 0.0):
        raise DegenerateGeometryError(
            "Target level lies behind the ray origin",
            detail={"count": int(np.count_nonzero(s < 0.0)), "level": level},
        )
    qu = cu + s * (pu - cu)
    return qu, np.full_like(qu, level)


def ray_hit_horizontal(center: PlanePoint, through: PlanePoint, level: float) -> PlanePoint:
    """The point Q' on the ray from center through `through` with v = level."""
    if center.u == through.u and center.v == through.v:
        raise DegenerateGeometryError("Ray through its own origin is undefined")
    qu, _ = ray_hits_horizontal(
        np.array([center.u]), np.array([center.v]),
        np.array([through.u]), np.array([through.v]), level,
    )
    return PlanePoint(u=float(qu[0]), v=level)


def bisect_root(f: Callable[[float], float], s_lo: float, s_hi: float, tol: float) -> float:
    """
    Plain bisection for a sign change of f on [s_lo, s_hi].

    Returns an endpoint when f vanishes there, otherwise the midpoint of a
    bracket of width at most tol.
    """
    if tol <= 0:
        raise DomainError(f"Bisection tolerance must be positive, got {tol}")
    lo, hi = (s_lo, s_hi) if s_lo <= s_hi else (s_hi, s_lo)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not (f_lo * f_hi < 0.0):
        raise BracketError(
            "No sign change on bisection interval",
            detail={"lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi},
        )

    for _ in range(_MAX_BISECTION_STEPS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_roots(
    f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray, tol: float
) -> np.ndarray:
    """Vectorized bisection: one independent bracket per entry of lo/hi."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    f_lo = f(lo)
    f_hi = f(hi)
    bad = (f_lo * f_hi > 0.0) | ~np.isfinite(f_lo) | ~np.isfinite(f_hi)
    if np.any(bad):
        raise BracketError(
            "No sign change on bisection interval",
            detail={"count": int(np.count_nonzero(bad)), "first": int(np.argmax(bad))},
        )

    exact_lo = f_lo == 0.0
    exact_hi = f_hi == 0.0
    width = float(np.max(hi - lo))
    steps = 0 if width <= tol else min(_MAX_BISECTION_STEPS, math.ceil(math.log2(width / tol)))
    lo_negative = f_lo < 0.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        move_lo = (f_mid < 0.0) == lo_negative
        lo = np.where(move_lo, mid, lo)
        hi = np.where(move_lo, hi, mid)
    root = 0.5 * (lo + hi)
    root = np.where(exact_hi, hi, root)
    return np.where(exact_lo, lo, root)


def _segment_distances(points: np.ndarray, start: np.ndarray, end: np.ndarray) -> np.ndarray:
    direction = end - start
    t = np.clip((points - start) @ direction / (direction @ direction), 0.0, 1.0)
    nearest = start + t[:, None] * direction
    return np.hypot(*(points - nearest).T)


def distance_to_triangle(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Planar distance from each point to a closed triangle (0 inside)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    a, b, c = (np.asarray(v, dtype=float) for v in vertices)
    denom = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1])
    dx = points[:, 0] - c[0]
    dy = points[:, 1] - c[1]
    l1 = ((b[1] - c[1]) * dx + (c[0] - b[0]) * dy) / denom
    l2 = ((c[1] - a[1]) * dx + (a[0] - c[0]) * dy) / denom
    inside = (l1 >= 0.0) & (l2 >= 0.0) & (1.0 - l1 - l2 >= 0.0)
    edges = np.minimum.reduce([
        _segment_distances(points, a, b),
        _segment_distances(points, b, c),
        _segment_distances(points, c, a),
    ])
    return np.where(inside, 0.0, edges)


def point_in_closed_triangle(points: np.ndarray, vertices: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Barycentric membership in a closed triangle, with distance slack tol."""
    return distance_to_triangle(points, vertices) <= tol


def torus_distance_to_triangles(points: np.ndarray, triangles: Sequence[np.ndarray]) -> np.ndarray:
    """
    Distance on the flat torus from angle pairs to a union of triangles drawn in
    the fundamental domain; lattice translates of each point are all tried so
    that identified vertices such as (pi, 2pi) ~ (pi, 0) are handled.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    best = np.full(points.shape[0], np.inf)
    for shift in _LATTICE_SHIFTS:
        lifted = points + shift
        for vertices in triangles:
            best = np.minimum(best, distance_to_triangle(lifted, vertices))
    return best


def torus_in_triangles(points: np.ndarray, triangles: Sequence[np.ndarray], tol: float) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    inside = np.zeros(points.shape[0], dtype=bool)
    for shift in _LATTICE_SHIFTS:
        for vertices in triangles:
            inside |= point_in_closed_triangle(points + shift, vertices, tol)
    return inside
