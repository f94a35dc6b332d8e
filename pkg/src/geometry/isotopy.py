"""
The deformation of H onto H_trop.

On H1 the arguments flow radially away from the barycentre O (Lower side) or
O' (Upper side) while (x, y) contract: the Triangle piece onto the origin, the
Leg piece onto the ray y = 0. H2 and H3 are pulled back to H1 by lambda,
deformed there and pushed forward again, so the H1 map is the only formula.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import TOLERANCES
from ..pydantic_models.geometry import AmbientPoint, Major, PlanePoint, RadialFrame, Sub
from ..pydantic_models.reports import IsotopyParams
from ..utils.exceptions import DegenerateGeometryError, DomainError, SeamError
from .complex_line import (
    ambient_distances,
    from_h1,
    gamma1_residual,
    major_masks,
    relative_line_residuals,
    to_h1,
)
from .constants import LN2, O_CENTER, O_PRIME, PI
from .torus import bisect_roots, normalize_angles, ray_hits_horizontal

DEFAULT_PARAMS = IsotopyParams()

# Points this close to O or O' are the fixed centres of the flow.
_CENTER_EPS = 1e-14


def _on_corner_ray(
    cu: np.ndarray, cv: np.ndarray, phi: np.ndarray, psi: np.ndarray, lower: np.ndarray, tol: float
) -> np.ndarray:
    """
    True where (phi, psi) lies within tol of the line from its centre to one
    of the two corners on psi = pi: (0, pi), (pi, pi) for O and (pi, pi),
    (2pi, pi) for O'.

    The test uses the distance of the point itself, not of Q', so rounding
    near the centre is not magnified by b / d(centre, P).
    """
    du, dv = phi - cu, psi - cv
    hit = np.zeros(phi.shape, dtype=bool)
    for corner_lower, corner_upper in ((0.0, PI), (PI, 2.0 * PI)):
        ku = np.where(lower, corner_lower, corner_upper) - cu
        kv = PI - cv
        offset = np.abs(du * kv - dv * ku) / np.hypot(ku, kv)
        hit |= (offset <= tol) & (du * ku + dv * kv > 0.0)
    return hit


@dataclass(slots=True)
class RadialFrames:
    """Radial frames for a batch of argument pairs (one entry per point)."""

    center_u: np.ndarray
    center_v: np.ndarray
    q_u: np.ndarray
    q_v: np.ndarray
    b: np.ndarray
    a: np.ndarray
    fixed: np.ndarray

    def scale(self, t: float) -> np.ndarray:
        ratio = np.where(self.fixed, 1.0, self.b / np.where(self.fixed, 1.0, self.a))
        return ratio ** t


def radial_frames(
    phi: np.ndarray,
    psi: np.ndarray,
    leg: bool,
    root_tol: float = TOLERANCES.root_tol,
    corner_tol: float = TOLERANCES.corner_tol,
) -> RadialFrames:
    """
    Frames for arguments in the closed coamoeba of H1.

    Triangle points measure a along the ray up to Arg(Gamma1) by bisection
    (gamma1_residual is 3/8 at the centre and -sin^2/2 at Q'); Leg points
    measure a to themselves.
    """
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    lower = phi <= PI
    center_u = np.where(lower, O_CENTER[0], O_PRIME[0])
    center_v = np.where(lower, O_CENTER[1], O_PRIME[1])
    fixed = np.hypot(phi - center_u, psi - center_v) < _CENTER_EPS

    q_u = phi.copy()
    q_v = psi.copy()
    b = np.zeros_like(phi)
    a = np.zeros_like(phi)
    moving = ~fixed
    if np.any(moving):
        cu, cv = center_u[moving], center_v[moving]
        qu, qv = ray_hits_horizontal(cu, cv, phi[moving], psi[moving], PI)
        q_u[moving], q_v[moving] = qu, qv
        reach = np.hypot(qu - cu, qv - cv)
        b[moving] = reach
        if leg:
            a[moving] = np.hypot(phi[moving] - cu, psi[moving] - cv)
        else:
            along = np.ones_like(reach)
            # rays through a corner of the coamoeba end on Arg(Gamma1)
            on_corner = _on_corner_ray(cu, cv, phi[moving], psi[moving], lower[moving], corner_tol)
            open_ray = ~on_corner & (gamma1_residual(qu, qv) < 0.0)
            if np.any(open_ray):
                cu_o, cv_o = cu[open_ray], cv[open_ray]
                du, dv = qu[open_ray] - cu_o, qv[open_ray] - cv_o
                along[open_ray] = bisect_roots(
                    lambda s: gamma1_residual(cu_o + s * du, cv_o + s * dv),
                    np.zeros(du.shape), np.ones(du.shape), root_tol,
                )
            a[moving] = along * reach
    return RadialFrames(center_u, center_v, q_u, q_v, b, a, fixed)


def flow_angles(frames: RadialFrames, phi: np.ndarray, psi: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Scale each argument pair away from its centre by (b/a)^t."""
    scale = frames.scale(t)
    keep = scale == 1.0
    new_phi = np.where(keep, phi, frames.center_u + scale * (phi - frames.center_u))
    new_psi = np.where(keep, psi, frames.center_v + scale * (psi - frames.center_v))
    return normalize_angles(new_phi), normalize_angles(new_psi)


def radial_frame(phi: float, psi: float, sub: Sub, root_tol: float = TOLERANCES.root_tol) -> RadialFrame:
    frames = radial_frames(np.array([phi]), np.array([psi]), sub is Sub.LEG, root_tol)
    if frames.fixed[0]:
        raise DegenerateGeometryError("The flow centre has no radial frame", detail={"phi": phi, "psi": psi})
    return RadialFrame(
        center=PlanePoint(u=float(frames.center_u[0]), v=float(frames.center_v[0])),
        qprime=PlanePoint(u=float(frames.q_u[0]), v=float(frames.q_v[0])),
        b=float(frames.b[0]),
        a=float(frames.a[0]),
    )


def coamoeba_flow(
    phi: float, psi: float, sub: Sub, t: float, root_tol: float = TOLERANCES.root_tol
) -> Tuple[float, float]:
    _check_time(t)
    phi_a, psi_a = np.array([phi]), np.array([psi])
    frames = radial_frames(phi_a, psi_a, sub is Sub.LEG, root_tol)
    new_phi, new_psi = flow_angles(frames, phi_a, psi_a, t)
    return float(new_phi[0]), float(new_psi[0])


def _check_time(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"Deformation time must lie in [0, 1], got {t}")


def _h1_images(reps: np.ndarray, sub: Sub, frames: RadialFrames, t: float) -> np.ndarray:
    x, y, phi, psi = reps.T
    new_phi, new_psi = flow_angles(frames, phi, psi, t)
    if sub is Sub.TRIANGLE:
        return np.column_stack([x * (1.0 - t), y * (1.0 - t), new_phi, new_psi])
    return np.column_stack([x - t * (y - LN2) / 2.0, y * (1.0 - t), new_phi, new_psi])


@dataclass(slots=True)
class Branch:
    """Points handled by one (major, sub) formula, with their H1 representatives."""

    major: Major
    sub: Sub
    rows: np.ndarray
    reps: np.ndarray
    frames: RadialFrames


@dataclass(slots=True)
class DeformationStep:
    t: float
    images: np.ndarray
    seam_residuals: np.ndarray
    chosen: np.ndarray
    branch_images: List[Tuple[Branch, np.ndarray]] = field(default_factory=list)

    @property
    def max_seam_residual(self) -> float:
        return float(np.max(self.seam_residuals)) if self.seam_residuals.size else 0.0


class DeformationPlan:
    """
    Batch evaluation of the deformation. Frames depend only on the points, so
    they are computed once in ``build`` and reused for every time ``at(t)``.
    """

    def __init__(self, points: np.ndarray, branches: List[Branch], params: IsotopyParams):
        self.points = points
        self.branches = branches
        self.params = params

    @classmethod
    def build(
        cls,
        points: np.ndarray,
        params: IsotopyParams = DEFAULT_PARAMS,
        majors: Sequence[Major] = tuple(Major),
    ) -> "DeformationPlan":
        points = np.atleast_2d(np.asarray(points, dtype=float))
        residuals = relative_line_residuals(points)
        off_line = residuals >= TOLERANCES.h_tol
        if np.any(off_line):
            raise DomainError(
                "Cannot deform points off H",
                detail={"count": int(np.count_nonzero(off_line)), "max_residual": float(residuals.max())},
            )
        masks = major_masks(points)
        covered = np.zeros(points.shape[0], dtype=bool)
        branches: List[Branch] = []
        for column, major in enumerate(Major):
            if major not in majors:
                continue
            rows = np.flatnonzero(masks[:, column])
            covered[rows] = True
            if rows.size == 0:
                continue
            reps = to_h1(points[rows], major)
            gap = reps[:, 1] - (2.0 * reps[:, 0] + LN2)
            for sub in (Sub.TRIANGLE, Sub.LEG):
                take = gap <= TOLERANCES.boundary_tol if sub is Sub.TRIANGLE else gap >= -TOLERANCES.boundary_tol
                if not np.any(take):
                    continue
                branch_reps = reps[take]
                frames = radial_frames(branch_reps[:, 2], branch_reps[:, 3], sub is Sub.LEG, params.root_tol)
                branches.append(Branch(major, sub, rows[take], branch_reps, frames))
        if not np.all(covered):
            raise DomainError(
                "Points outside the requested pieces of H",
                detail={"count": int(np.count_nonzero(~covered)), "majors": [m.value for m in majors]},
            )
        return cls(points, branches, params)

    def at(self, t: float, strict: bool = False) -> DeformationStep:
        """Images at time t; every branch applying to a point is evaluated and compared."""
        _check_time(t)
        n = self.points.shape[0]
        images = np.full((n, 4), np.nan)
        chosen = np.full(n, -1)
        seam = np.zeros(n)
        step = DeformationStep(t, images, seam, chosen)
        for index, branch in enumerate(self.branches):
            branch_images = from_h1(_h1_images(branch.reps, branch.sub, branch.frames, t), branch.major)
            step.branch_images.append((branch, branch_images))
            first = chosen[branch.rows] < 0
            new_rows = branch.rows[first]
            images[new_rows] = branch_images[first]
            chosen[new_rows] = index
            seen_rows = branch.rows[~first]
            if seen_rows.size:
                gaps = ambient_distances(branch_images[~first], images[seen_rows])
                seam[seen_rows] = np.maximum(seam[seen_rows], gaps)
        if strict and step.max_seam_residual > self.params.seam_tol:
            worst = int(np.argmax(seam))
            raise SeamError(
                f"Branches disagree by {step.max_seam_residual:.3e} at t={t}",
                detail={"row": worst, "point": self.points[worst].tolist()},
            )
        return step

    def branch_of(self, step: DeformationStep, row: int) -> Branch:
        return self.branches[int(step.chosen[row])]


@dataclass(slots=True)
class DeformationResult:
    point: AmbientPoint
    major: Major
    sub: Sub
    seam_residual: float


def deform_point(point: AmbientPoint, t: float, params: IsotopyParams = DEFAULT_PARAMS) -> DeformationResult:
    """Image of a point of H at time t, with the branch used and the seam residual."""
    plan = DeformationPlan.build(point.as_array()[None, :], params)
    step = plan.at(t, strict=True)
    branch = plan.branch_of(step, 0)
    return DeformationResult(
        point=AmbientPoint.from_array(step.images[0]),
        major=branch.major,
        sub=branch.sub,
        seam_residual=float(step.seam_residuals[0]),
    )


def psi_t(point: AmbientPoint, t: float, params: IsotopyParams = DEFAULT_PARAMS) -> AmbientPoint:
    return deform_point(point, t, params).point


def phi1_branches(
    point: AmbientPoint, t: float, params: IsotopyParams = DEFAULT_PARAMS
) -> Dict[Sub, AmbientPoint]:
    """Images of an H1 point under each Leg/Triangle formula that applies to it."""
    plan = DeformationPlan.build(point.as_array()[None, :], params, majors=(Major.H1,))
    step = plan.at(t)
    return {branch.sub: AmbientPoint.from_array(images[0]) for branch, images in step.branch_images}


def phi1(point: AmbientPoint, t: float, params: IsotopyParams = DEFAULT_PARAMS) -> AmbientPoint:
    plan = DeformationPlan.build(point.as_array()[None, :], params, majors=(Major.H1,))
    return AmbientPoint.from_array(plan.at(t, strict=True).images[0])


def deform_many(
    points: np.ndarray, t: float, params: Optional[IsotopyParams] = None
) -> DeformationStep:
    """One-shot batch evaluation; raises SeamError on branch disagreement."""
    params = params or DEFAULT_PARAMS
    return DeformationPlan.build(points, params).at(t, strict=True)
