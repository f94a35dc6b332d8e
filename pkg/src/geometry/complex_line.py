"""
The complex line H = {1 + z1 + z2 = 0} in log/angle coordinates (x, y, phi, psi).

Membership, amoeba and coamoeba, the parametrizations of H, its subdivision
into H1/H2/H3 (and Leg/Triangle, Lower/Upper inside H1), the order-three
automorphism lambda and the analytic curves W_c used by the isotopy.

Scalar operations take and return ``AmbientPoint``; the ``*_many`` companions
work on float arrays of shape (n, 4) with columns (x, y, phi, psi).
"""
import cmath
import math
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ..config import TOLERANCES
from ..pydantic_models.geometry import (
    AmbientPoint,
    BoundaryKind,
    Major,
    RegionTag,
    Side,
    Sub,
)
from ..utils.exceptions import DomainError, SingularityError
from .constants import A1_VERTICES, A2_VERTICES, LN2, PI, TAU
from .torus import angle_difference, normalize_angle, normalize_angles, torus_in_triangles

_FORCED_ARGUMENTS = {
    BoundaryKind.X_MINUS_Y: (PI, 0.0),
    BoundaryKind.Y_MINUS_X: (0.0, PI),
    BoundaryKind.X_PLUS_Y: (PI, PI),
}


def make_point(x: float, y: float, phi: float, psi: float) -> AmbientPoint:
    """AmbientPoint with angles reduced to [0, 2pi)."""
    return AmbientPoint(x=x, y=y, phi=normalize_angle(phi), psi=normalize_angle(psi))


# --- residuals ------------------------------------------------------------

def line_residual(point: AmbientPoint) -> float:
    """|e^{x+i phi} + e^{y+i psi} + 1|; zero exactly on H."""
    value = cmath.exp(complex(point.x, point.phi)) + cmath.exp(complex(point.y, point.psi)) + 1.0
    return abs(value)


def line_residuals(points: np.ndarray) -> np.ndarray:
    x, y, phi, psi = np.asarray(points, dtype=float).T
    return np.abs(np.exp(x + 1j * phi) + np.exp(y + 1j * psi) + 1.0)


def relative_line_residuals(points: np.ndarray) -> np.ndarray:
    """Line residual divided by 1 + |z1| + |z2|."""
    x, y = np.asarray(points, dtype=float).T[:2]
    return line_residuals(points) / (1.0 + np.exp(x) + np.exp(y))


def eq1_residuals_many(points: np.ndarray, relative: bool = False) -> np.ndarray:
    """Both modulus identities of a point of H, shape (n, 2)."""
    x, y, phi, psi = np.asarray(points, dtype=float).T
    e2x, e2y = np.exp(2 * x), np.exp(2 * y)
    first = np.abs(e2x - 1.0 - 2.0 * np.exp(y) * np.cos(psi) - e2y)
    second = np.abs(e2y - 1.0 - 2.0 * np.exp(x) * np.cos(phi) - e2x)
    residuals = np.column_stack([first, second])
    if relative:
        residuals = residuals / (1.0 + e2x + e2y)[:, None]
    return residuals


def eq1_residuals(point: AmbientPoint) -> Tuple[float, float]:
    first, second = eq1_residuals_many(point.as_array()[None, :])[0]
    return float(first), float(second)


# --- amoeba -------------------------------------------------------------------

def amoeba_violations(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """How far (x, y) sits outside the amoeba, relative to 1 + e^x + e^y; 0 inside."""
    ex, ey = np.exp(x), np.exp(y)
    excess = np.maximum.reduce([ex - ey - 1.0, ey - ex - 1.0, 1.0 - ex - ey, np.zeros_like(ex)])
    return excess / (1.0 + ex + ey)


def amoeba_contains(x: float, y: float, tol: float = TOLERANCES.boundary_tol) -> bool:
    """The three inequalities e^x - e^y <= 1, e^y - e^x <= 1, e^x + e^y >= 1."""
    return bool(amoeba_violations(np.array(x), np.array(y)) <= tol)


def amoeba_boundary_class(x: float, y: float, tol: float = TOLERANCES.boundary_tol) -> BoundaryKind:
    """Which boundary equation holds, within tol relative to 1 + e^x + e^y."""
    ex, ey = math.exp(x), math.exp(y)
    scale = 1.0 + ex + ey
    if abs(ex - ey - 1.0) <= tol * scale:
        return BoundaryKind.X_MINUS_Y
    if abs(ey - ex - 1.0) <= tol * scale:
        return BoundaryKind.Y_MINUS_X
    if abs(ex + ey - 1.0) <= tol * scale:
        return BoundaryKind.X_PLUS_Y
    return BoundaryKind.NONE


def forced_arguments(kind: BoundaryKind) -> Optional[Tuple[float, float]]:
    """Arguments every point over a boundary curve must carry."""
    return _FORCED_ARGUMENTS.get(kind)


def amoeba_lift_many(x: np.ndarray, y: np.ndarray, upper: bool = False) -> np.ndarray:
    """
    Sections of the amoeba projection: the lower sheet has phi in [0, pi],
    the upper sheet is its conjugate (phi, psi) -> (2pi - phi, 2pi - psi).

    Half-angle forms keep full precision near the amoeba boundary; the slack
    factors are the three amoeba inequalities.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ex, ey = np.exp(x), np.exp(y)
    if np.any(amoeba_violations(x, y) > TOLERANCES.boundary_tol):
        raise DomainError("Cannot lift points outside the amoeba")
    total = 1.0 + ex + ey
    slack_x = np.maximum(1.0 + ex - ey, 0.0)
    slack_y = np.maximum(1.0 + ey - ex, 0.0)
    slack_sum = np.maximum(ex + ey - 1.0, 0.0)
    phi = 2.0 * np.arctan2(np.sqrt(slack_x * total), np.sqrt(slack_sum * slack_y))
    psi_abs = 2.0 * np.arctan2(np.sqrt(slack_y * total), np.sqrt(slack_sum * slack_x))
    # e^x sin(phi) + e^y sin(psi) = 0 puts psi in [pi, 2pi] when phi in [0, pi]
    psi = -psi_abs
    if upper:
        phi, psi = -phi, psi_abs
    lifted = np.column_stack([x, y, normalize_angles(phi), normalize_angles(psi)])
    bad = line_residuals(lifted) > TOLERANCES.h_tol * total
    if np.any(bad):
        raise DomainError(
            "Amoeba lift failed the line residual check",
            detail={"count": int(np.count_nonzero(bad))},
        )
    return lifted


def amoeba_lift(x: float, y: float, upper: bool = False) -> AmbientPoint:
    if not amoeba_contains(x, y):
        raise DomainError(f"({x}, {y}) is outside the amoeba")
    return AmbientPoint.from_array(amoeba_lift_many(np.array([x]), np.array([y]), upper)[0])


# --- coamoeba -----------------------------------------------------------------

def in_open_coamoeba(phi: np.ndarray, psi: np.ndarray, margin: float = 0.0) -> np.ndarray:
    """Membership in the open triangles T1 and T2, kept `margin` inside their edges."""
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    in_t1 = (phi > margin) & (phi < PI - margin) & (psi > PI + margin) & (psi < phi + PI - margin)
    in_t2 = (phi > PI + margin) & (phi < TAU - margin) & (psi > phi - PI + margin) & (psi < PI - margin)
    return in_t1 | in_t2


def coamoeba_contains(phi: float, psi: float, tol: float = TOLERANCES.boundary_tol) -> bool:
    """T1, T2 or one of the three isolated points (0, pi), (pi, 0), (pi, pi)."""
    phi, psi = normalize_angle(phi), normalize_angle(psi)
    if bool(in_open_coamoeba(phi, psi)):
        return True
    return any(
        abs(angle_difference(phi, u)) <= tol and abs(angle_difference(psi, v)) <= tol
        for u, v in _FORCED_ARGUMENTS.values()
    )


def coamoeba_lift_many(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    phi = normalize_angles(phi)
    psi = normalize_angles(psi)
    if not np.all(in_open_coamoeba(phi, psi)):
        raise DomainError("Arguments outside the open coamoeba triangles cannot be lifted")
    sin_diff = np.sin(psi - phi)
    ratio_x = -np.sin(psi) / sin_diff
    ratio_y = np.sin(phi) / sin_diff
    if np.any(ratio_x <= 0.0) or np.any(ratio_y <= 0.0):
        raise DomainError("Sign conditions of the lift fail near a triangle edge")
    return np.column_stack([np.log(ratio_x), np.log(ratio_y), phi, psi])


def coamoeba_lift(phi: float, psi: float) -> AmbientPoint:
    """The unique point of H over arguments in the open triangles T1, T2."""
    return AmbientPoint.from_array(coamoeba_lift_many(np.array([phi]), np.array([psi]))[0])


def chart_many(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    w = -1.0 - z
    if np.any(z == 0) or np.any(w == 0):
        raise DomainError("The chart excludes z = 0 and z = -1")
    return np.column_stack([
        np.log(np.abs(z)), np.log(np.abs(w)),
        normalize_angles(np.angle(z)), normalize_angles(np.angle(w)),
    ])


def chart_from_complex(re: float, im: float) -> AmbientPoint:
    """The point (z, -1 - z) of H."""
    return AmbientPoint.from_array(chart_many(np.array([complex(re, im)]))[0])


# --- subdivision ------------------------------------------------------------------

def major_masks(points: np.ndarray, tol: float = TOLERANCES.boundary_tol) -> np.ndarray:
    """Boolean array (n, 3): closed H1, H2, H3 inequalities with tie slack tol."""
    x, y = np.asarray(points, dtype=float).T[:2]
    return np.column_stack([
        (x <= y + tol) & (x <= tol),
        (y <= x + tol) & (y <= tol),
        (x >= -tol) & (y >= -tol),
    ])


def _require_on_line(point: AmbientPoint, h_tol: float) -> None:
    residual = float(relative_line_residuals(point.as_array()[None, :])[0])
    if residual >= h_tol:
        raise DomainError(
            f"Point is not on H (line residual {residual:.3e})",
            detail=point.model_dump(),
        )


def classify_major(
    point: AmbientPoint,
    tol: float = TOLERANCES.boundary_tol,
    h_tol: float = TOLERANCES.h_tol,
) -> FrozenSet[Major]:
    _require_on_line(point, h_tol)
    mask = major_masks(point.as_array()[None, :], tol)[0]
    return frozenset(major for major, hit in zip(Major, mask) if hit)


def classify_sub(point: AmbientPoint, tol: float = TOLERANCES.boundary_tol) -> FrozenSet[Sub]:
    """Leg above y = 2x + ln2, Triangle below, both on the curve."""
    if not major_masks(point.as_array()[None, :], tol)[0, 0]:
        raise DomainError("Leg/Triangle split is defined on H1 only", detail=point.model_dump())
    gap = point.y - (2.0 * point.x + LN2)
    if gap > tol:
        return frozenset({Sub.LEG})
    if gap < -tol:
        return frozenset({Sub.TRIANGLE})
    return frozenset({Sub.LEG, Sub.TRIANGLE})


def classify_side(phi: float, psi: float, tol: float = TOLERANCES.membership_tol) -> FrozenSet[Side]:
    phi, psi = normalize_angle(phi), normalize_angle(psi)
    if not torus_in_triangles(np.array([[phi, psi]]), (A1_VERTICES, A2_VERTICES), tol)[0]:
        raise DomainError(f"({phi}, {psi}) is outside the closed coamoeba of H1")
    if phi < PI - tol:
        return frozenset({Side.LOWER})
    if phi > PI + tol:
        return frozenset({Side.UPPER})
    return frozenset({Side.LOWER, Side.UPPER})


# --- lambda -------------------------------------------------------------------

def lambda_map_many(points: np.ndarray) -> np.ndarray:
    x, y, phi, psi = np.asarray(points, dtype=float).T
    return np.column_stack([-y, x - y, normalize_angles(TAU - psi), normalize_angles(phi - psi + TAU)])


def lambda_inv_many(points: np.ndarray) -> np.ndarray:
    """Inverse of lambda, computed as lambda squared."""
    x, y, phi, psi = np.asarray(points, dtype=float).T
    return np.column_stack([y - x, -x, normalize_angles(psi - phi), normalize_angles(-phi)])


def lambda_map(point: AmbientPoint) -> AmbientPoint:
    """(x, y, phi, psi) -> (-y, x - y, -psi, phi - psi); maps H1 -> H2 -> H3 -> H1."""
    return AmbientPoint.from_array(lambda_map_many(point.as_array()[None, :])[0])


def lambda_inv(point: AmbientPoint) -> AmbientPoint:
    return AmbientPoint.from_array(lambda_inv_many(point.as_array()[None, :])[0])


def to_h1(points: np.ndarray, major: Major) -> np.ndarray:
    """Pull points of the given major piece back to H1."""
    if major is Major.H1:
        return np.asarray(points, dtype=float)
    if major is Major.H2:
        return lambda_inv_many(points)
    return lambda_map_many(points)


def from_h1(points: np.ndarray, major: Major) -> np.ndarray:
    """Push H1 points forward to the given major piece."""
    if major is Major.H1:
        return np.asarray(points, dtype=float)
    if major is Major.H2:
        return lambda_map_many(points)
    return lambda_inv_many(points)


def region_tags(points: np.ndarray, tol: float = TOLERANCES.boundary_tol) -> List[RegionTag]:
    """
    Major pieces of each point, with Leg/Triangle and side read off the H1
    representatives (lambda pulls H2 and H3 points back to H1).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    residuals = relative_line_residuals(points)
    if np.any(residuals >= TOLERANCES.h_tol):
        raise DomainError(
            "Points are not on H",
            detail={"count": int(np.count_nonzero(residuals >= TOLERANCES.h_tol))},
        )
    masks = major_masks(points, tol)
    n = points.shape[0]
    flags = {member: np.zeros(n, dtype=bool) for member in (*Sub, *Side)}
    for column, major in enumerate(Major):
        rows = masks[:, column]
        if not np.any(rows):
            continue
        reps = to_h1(points[rows], major)
        inside = torus_in_triangles(reps[:, 2:], (A1_VERTICES, A2_VERTICES), TOLERANCES.membership_tol)
        if not np.all(inside):
            raise DomainError("H1 representative outside the closed coamoeba of H1")
        gap = reps[:, 1] - (2.0 * reps[:, 0] + LN2)
        flags[Sub.TRIANGLE][rows] |= gap <= tol
        flags[Sub.LEG][rows] |= gap >= -tol
        flags[Side.LOWER][rows] |= reps[:, 2] <= PI + TOLERANCES.membership_tol
        flags[Side.UPPER][rows] |= reps[:, 2] >= PI - TOLERANCES.membership_tol
    return [
        RegionTag(
            major=frozenset(major for major, hit in zip(Major, masks[i]) if hit),
            sub=frozenset(member for member in Sub if flags[member][i]),
            side=frozenset(member for member in Side if flags[member][i]),
        )
        for i in range(n)
    ]


def region_tag(point: AmbientPoint) -> RegionTag:
    return region_tags(point.as_array()[None, :])[0]


# --- Gamma1 and W_c -------------------------------------------------------------

def wc_residual(phi, psi, k: float):
    """sin^2(psi) - k sin(phi) sin(psi - phi); zero on Arg(W_c) for k = e^{-c}."""
    return np.sin(psi) ** 2 - k * np.sin(phi) * np.sin(psi - phi)


def gamma1_residual(phi, psi):
    """Positive on the Triangle side of Arg(Gamma1), negative on the Leg side."""
    return wc_residual(phi, psi, 0.5)


def wc_boundary_x(c: float) -> Tuple[float, float]:
    """x-coordinates where y = 2x + c meets e^y - e^x = 1 (x_plus) and e^y + e^x = 1 (x_minus)."""
    if not math.isfinite(c) or c < LN2 - 1e-15:
        raise DomainError(f"W_c is defined for c >= ln2, got {c}")
    ec = math.exp(c)
    root = math.sqrt(1.0 + 4.0 * ec)
    return math.log((1.0 + root) / (2.0 * ec)), math.log((root - 1.0) / (2.0 * ec))


def _slope_terms(x: float, c: float) -> Tuple[float, float, float]:
    k2 = math.exp(-2.0 * c)
    w = math.exp(2.0 * x)
    denominator = 3.0 * w * w - k2 * w + k2
    if abs(denominator) < 1e-300:
        raise SingularityError("Slope denominator vanishes", detail={"x": x, "c": c})
    return k2, w, denominator


def argwc_slope(x: float, c: float) -> float:
    """d psi / d phi along Arg(W_c), written in the x-coordinate of the point."""
    k2, w, denominator = _slope_terms(x, c)
    return (2.0 * w * w - 2.0 * k2) / denominator


def argwc_slope_derivative(x: float, c: float) -> float:
    k2, w, denominator = _slope_terms(x, c)
    return 4.0 * k2 * w * (-w * w + 8.0 * w - k2) / denominator ** 2


def argwc_slope_derivative_sign(x: float, c: float) -> int:
    k2 = math.exp(-2.0 * c)
    w = math.exp(2.0 * x)
    return int(np.sign(-w * w + 8.0 * w - k2))


def argwc_slope_phi(phi: float, psi: float, k: float) -> float:
    """The same slope by implicit differentiation in the angles."""
    numerator = 2.0 * k * math.sin(psi - 2.0 * phi)
    denominator = 2.0 * math.sin(2.0 * psi) - k * math.sin(psi) + k * math.sin(psi - 2.0 * phi)
    if abs(denominator) < 1e-300:
        raise SingularityError("Slope denominator vanishes", detail={"phi": phi, "psi": psi, "k": k})
    return numerator / denominator


# --- distances --------------------------------------------------------------

def ambient_distances(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Euclidean in (x, y), wrapped in the angles."""
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    delta = first - second
    d_phi = angle_difference(first[..., 2], second[..., 2])
    d_psi = angle_difference(first[..., 3], second[..., 3])
    return np.sqrt(delta[..., 0] ** 2 + delta[..., 1] ** 2 + d_phi ** 2 + d_psi ** 2)


def ambient_distance(first: AmbientPoint, second: AmbientPoint) -> float:
    return float(ambient_distances(first.as_array(), second.as_array()))
