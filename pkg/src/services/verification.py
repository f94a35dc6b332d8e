"""
Executable verification suite.

Every check reduces a family of residuals to one ``CheckResult``. Checks
never raise: a library error inside a check is recorded as a failed check
with a NaN residual. A check whose applicable sample set is empty fails with
sample_count 0.
"""
import math
import time
import uuid
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..config import TOLERANCES
from ..geometry.complex_line import (
    ambient_distances,
    amoeba_boundary_class,
    amoeba_lift_many,
    amoeba_violations,
    argwc_slope,
    argwc_slope_derivative_sign,
    argwc_slope_phi,
    coamoeba_lift_many,
    eq1_residuals_many,
    forced_arguments,
    gamma1_residual,
    in_open_coamoeba,
    lambda_inv_many,
    lambda_map_many,
    major_masks,
    relative_line_residuals,
    to_h1,
    wc_boundary_x,
    wc_residual,
)
from ..geometry.constants import (
    A1_VERTICES,
    A2_VERTICES,
    COAMOEBA_TRIANGLES,
    LN2,
    O_CENTER,
    O_PRIME,
    PI,
    T1_VERTICES,
    T2_VERTICES,
    TAU,
)
from ..geometry.isotopy import DEFAULT_PARAMS, DeformationPlan, DeformationStep
from ..geometry.phase_tropical import htrop_distances, htrop_part_masks
from ..geometry.torus import angle_difference, bisect_root, torus_distance_to_triangles
from ..pydantic_models.geometry import BoundaryKind, SamplingStrategy
from ..pydantic_models.reports import CheckResult, IsotopyParams, VerificationReport
from ..utils.exceptions import DomainError, IsotopyException
from ..utils.logger import log_check_result, log_error_with_context, log_performance_metric, logger
from .sampling import SampleSet, sample_line, sample_wc_curve

DEFAULT_T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

# Seam curve density used when the caller supplies no seam samples.
DEFAULT_SEAM_N = 1000
RANDOM_POINTS = 10_000
WC_CURVE_POINTS = 1000
STRATUM_POINTS = 256

BOUNDARY_CHECK_C = (LN2, 1.0, 2.0, 5.0)
SLOPE_CHECK_C = (LN2, math.log(8.0))
ENDPOINT_SLOPE_C = (LN2, math.log(4.0), math.log(8.0))
LEG_COLLAPSE_C = (LN2, 2.0, 6.0)
UNIQUENESS_C = (LN2, math.log(4.0), math.log(8.0))
SLOPE_POINTS = 50
FAN_RAYS = 64
FAN_STEPS = 2000

# |sin| floor below which the inverse argument map is too ill-conditioned to compare
_SINE_FLOOR = 1e-2
_EDGE_FLOOR = 1e-12
_GAP_FLOOR = 1e-6


def _below(name: str, description: str, values, tolerance: float) -> CheckResult:
    """Pass when every residual is finite and below tolerance."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return _vacuous(name, description, tolerance)
    worst = float(np.max(values))
    return CheckResult(
        name=name,
        description=description,
        max_residual=worst,
        tolerance=tolerance,
        passed=bool(worst < tolerance),
        sample_count=int(values.size),
    )


def _above(name: str, description: str, values, threshold: float) -> CheckResult:
    """Pass when every value is finite and above threshold; reports the smallest."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return _vacuous(name, description, threshold)
    worst = float(np.min(values))
    return CheckResult(
        name=name,
        description=description,
        max_residual=worst,
        tolerance=threshold,
        passed=bool(worst > threshold),
        sample_count=int(values.size),
    )


def _count(name: str, description: str, failures: int, sample_count: int) -> CheckResult:
    """Pass when no sample fails an exact predicate."""
    if sample_count == 0:
        return _vacuous(name, description, 0.0)
    return CheckResult(
        name=name,
        description=description,
        max_residual=float(failures),
        tolerance=0.0,
        passed=failures == 0,
        sample_count=int(sample_count),
    )


def _vacuous(name: str, description: str, tolerance: float) -> CheckResult:
    return CheckResult(
        name=name,
        description=description,
        max_residual=float("nan"),
        tolerance=tolerance,
        passed=False,
        sample_count=0,
    )


def _normalize_grid(t_grid: Iterable[float]) -> Tuple[float, ...]:
    grid = {float(t) for t in t_grid} | {0.0, 1.0}
    bad = [t for t in grid if not 0.0 <= t <= 1.0]
    if bad:
        raise DomainError(f"Deformation times must lie in [0, 1], got {sorted(bad)}")
    return tuple(sorted(grid))


def _torus_embedding(points: np.ndarray) -> np.ndarray:
    """(x, y, cos phi, sin phi, cos psi, sin psi); chord lengths never exceed the wrapped metric."""
    x, y, phi, psi = points.T
    return np.column_stack([x, y, np.cos(phi), np.sin(phi), np.cos(psi), np.sin(psi)])


def injectivity_violations(domain: np.ndarray, images: np.ndarray, delta: float, eps: float) -> int:
    """Pairs at least delta apart whose images come within eps."""
    if domain.shape[0] < 2:
        return 0
    pairs = cKDTree(_torus_embedding(images)).query_pairs(eps, output_type="ndarray")
    if pairs.size == 0:
        return 0
    image_gap = ambient_distances(images[pairs[:, 0]], images[pairs[:, 1]])
    domain_gap = ambient_distances(domain[pairs[:, 0]], domain[pairs[:, 1]])
    return int(np.count_nonzero((domain_gap >= delta) & (image_gap <= eps)))


def _edge_stretch(domain: np.ndarray, images: np.ndarray, edges: np.ndarray) -> np.ndarray:
    domain_length = ambient_distances(domain[edges[:, 0]], domain[edges[:, 1]])
    usable = domain_length > _EDGE_FLOOR
    image_length = ambient_distances(images[edges[usable, 0]], images[edges[usable, 1]])
    return image_length / domain_length[usable]


def continuity_proxy(
    samples: SampleSet,
    t: float,
    params: IsotopyParams = DEFAULT_PARAMS,
    plan: Optional[DeformationPlan] = None,
) -> float:
    """Largest ratio image edge length / domain edge length over the mesh at time t."""
    if samples.adjacency.size == 0:
        raise DomainError("Continuity proxy needs a sample set with mesh adjacency")
    plan = plan or DeformationPlan.build(samples.points, params)
    ratios = _edge_stretch(samples.points, plan.at(t).images, samples.adjacency)
    if ratios.size == 0:
        raise DomainError("Every mesh edge is shorter than the length floor")
    return float(np.max(ratios))


def _random_ambient(seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    cutoff = TOLERANCES.leg_cutoff
    return np.column_stack([rng.uniform(-cutoff, cutoff, (n, 2)), rng.uniform(0.0, TAU, (n, 2))])


def _random_in_triangles(rng: np.random.Generator, triangles: Sequence[np.ndarray], n: int) -> np.ndarray:
    r1 = np.sqrt(rng.uniform(0.0, 1.0, n))
    r2 = rng.uniform(0.0, 1.0, n)
    choice = rng.integers(0, len(triangles), n)
    vertices = np.stack(triangles)[choice]
    a, b, c = vertices[:, 0], vertices[:, 1], vertices[:, 2]
    return (1.0 - r1)[:, None] * a + (r1 * (1.0 - r2))[:, None] * b + (r1 * r2)[:, None] * c


def htrop_stratum_samples(seed: int, n: int = STRATUM_POINTS) -> Dict[str, np.ndarray]:
    """Points built to lie on each stratum of H_trop, keyed by stratum name."""
    rng = np.random.default_rng(seed)
    cutoff = TOLERANCES.leg_cutoff
    zeros = np.zeros(n)
    phi = rng.uniform(0.0, TAU, n)
    ray = rng.uniform(0.0, cutoff, n)
    vertex_angles = _random_in_triangles(rng, COAMOEBA_TRIANGLES, n)
    return {
        "leg1": np.column_stack([-ray, zeros, phi, np.full(n, PI)]),
        "leg2": np.column_stack([zeros, -ray, np.full(n, PI), phi]),
        "leg3": np.column_stack([ray, ray, phi, np.mod(phi + PI, TAU)]),
        "vertex": np.column_stack([zeros, zeros, vertex_angles]),
    }


def _trace_wc(c: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Interior points of Arg(W_c) on the lower sheet, ordered by x."""
    x_plus, x_minus = wc_boundary_x(c)
    x = np.linspace(x_minus, x_plus, count + 2)[1:-1]
    return x, amoeba_lift_many(x, 2.0 * x + c)


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(np.diff(signs)))


class VerificationSuite:
    """
    Runs every check against one sample set.

    Deformation plans are built once; their evaluations at each grid time are
    cached so the seam, range, injectivity and stretch checks share them.
    """

    def __init__(
        self,
        samples: SampleSet,
        params: IsotopyParams = DEFAULT_PARAMS,
        t_grid: Iterable[float] = DEFAULT_T_GRID,
        seam_samples: Optional[SampleSet] = None,
        run_id: Optional[str] = None,
    ):
        self.samples = samples
        self.params = params
        self.t_grid = _normalize_grid(t_grid)
        self.seed = samples.seed
        self.seam_samples = seam_samples
        self.run_id = run_id or uuid.uuid4().hex[:8]
        self._plans: Dict[str, DeformationPlan] = {}
        self._steps: Dict[Tuple[str, float], DeformationStep] = {}

    # --- shared state -------------------------------------------------------------

    def _seams(self) -> SampleSet:
        if self.seam_samples is None:
            self.seam_samples = sample_line(SamplingStrategy.SEAM_CURVES, DEFAULT_SEAM_N, self.seed)
        return self.seam_samples

    def _all_points(self) -> np.ndarray:
        return np.vstack([self.samples.points, self._seams().points])

    def _plan(self, key: str) -> DeformationPlan:
        if key not in self._plans:
            points = self.samples.points if key == "main" else self._seams().points
            self._plans[key] = DeformationPlan.build(points, self.params)
        return self._plans[key]

    def _step(self, key: str, t: float) -> DeformationStep:
        if (key, t) not in self._steps:
            self._steps[(key, t)] = self._plan(key).at(t)
        return self._steps[(key, t)]

    # --- complex line ---------------------------------------------------------------

    def check_line_residual(self) -> CheckResult:
        return _below(
            "line_residual",
            "sampled points satisfy 1 + z1 + z2 = 0 (relative to 1 + |z1| + |z2|)",
            relative_line_residuals(self.samples.points),
            TOLERANCES.identity_tol,
        )

    def check_modulus_identities(self) -> CheckResult:
        return _below(
            "modulus_identities",
            "e^2x = 1 + 2e^y cos(psi) + e^2y and its mirror hold on samples (relative)",
            eq1_residuals_many(self.samples.points, relative=True),
            1e-11,
        )

    def check_argument_relift(self) -> CheckResult:
        points = self._all_points()
        phi, psi = points[:, 2], points[:, 3]
        sines = np.minimum.reduce([np.abs(np.sin(phi)), np.abs(np.sin(psi)), np.abs(np.sin(psi - phi))])
        usable = in_open_coamoeba(phi, psi) & (sines > _SINE_FLOOR)
        if not np.any(usable):
            return _vacuous("argument_relift", "no interior sample away from the triangle edges", 1e-10)
        relifted = coamoeba_lift_many(phi[usable], psi[usable])
        return _below(
            "argument_relift",
            "the inverse argument map reproduces (x, y) of interior samples",
            np.abs(relifted[:, :2] - points[usable, :2]),
            1e-10,
        )

    def check_amoeba_inequalities(self) -> CheckResult:
        points = self._all_points()
        return _below(
            "amoeba_inequalities",
            "(x, y) of every sample satisfies the three amoeba inequalities",
            amoeba_violations(points[:, 0], points[:, 1]),
            TOLERANCES.boundary_tol,
        )

    def check_coamoeba_membership(self) -> CheckResult:
        points = self._all_points()
        angles = points[:, 2:]
        open_part = in_open_coamoeba(angles[:, 0], angles[:, 1])
        isolated = np.array([forced_arguments(kind) for kind in BoundaryKind if forced_arguments(kind)])
        offsets = angle_difference(angles[:, None, :], isolated[None, :, :])
        to_isolated = np.min(np.hypot(offsets[..., 0], offsets[..., 1]), axis=1)
        return _below(
            "coamoeba_membership",
            "arguments lie in the open triangles T1, T2 or at one of the three isolated points",
            np.where(open_part, 0.0, to_isolated),
            TOLERANCES.membership_tol,
        )

    def check_forced_boundary_arguments(self) -> CheckResult:
        points = self._all_points()
        residuals = []
        for point in points:
            forced = forced_arguments(amoeba_boundary_class(point[0], point[1]))
            if forced is not None:
                residuals.append(max(
                    abs(float(angle_difference(point[2], forced[0]))),
                    abs(float(angle_difference(point[3], forced[1]))),
                ))
        # angles move like the square root of the distance to the boundary
        return _below(
            "forced_boundary_arguments",
            "points over an amoeba boundary curve carry the forced real arguments",
            residuals,
            math.sqrt(TOLERANCES.boundary_tol),
        )

    # --- lambda -------------------------------------------------------------------

    def check_lambda_order_three(self) -> CheckResult:
        points = _random_ambient(self.seed, RANDOM_POINTS)
        thrice = lambda_map_many(lambda_map_many(lambda_map_many(points)))
        return _below(
            "lambda_order_three",
            "lambda composed three times is the identity",
            ambient_distances(thrice, points),
            TOLERANCES.identity_tol,
        )

    def check_lambda_inverse(self) -> CheckResult:
        points = _random_ambient(self.seed + 1, RANDOM_POINTS)
        left = ambient_distances(lambda_inv_many(lambda_map_many(points)), points)
        right = ambient_distances(lambda_map_many(lambda_inv_many(points)), points)
        return _below(
            "lambda_inverse",
            "lambda^-1 undoes lambda on both sides",
            np.maximum(left, right),
            TOLERANCES.identity_tol,
        )

    def check_lambda_cycles_pieces(self) -> CheckResult:
        points = self._all_points()
        before = major_masks(points)
        after = major_masks(lambda_map_many(points))
        failures = int(np.count_nonzero(np.any(after != np.roll(before, 1, axis=1), axis=1)))
        return _count(
            "lambda_cycles_pieces",
            "lambda sends H1 to H2, H2 to H3 and H3 to H1",
            failures,
            points.shape[0],
        )

    # --- Gamma1 and W_c -------------------------------------------------------------

    def _h1_gaps(self) -> Tuple[np.ndarray, np.ndarray]:
        points = self._all_points()
        h1 = points[major_masks(points)[:, 0]]
        return h1, h1[:, 1] - (2.0 * h1[:, 0] + LN2)

    def check_gamma1_sign_separation(self) -> CheckResult:
        h1, gap = self._h1_gaps()
        phi, psi = h1[:, 2], h1[:, 3]
        usable = (np.abs(gap) > _GAP_FLOOR) & (np.abs(np.sin(psi - phi)) > _SINE_FLOOR)
        residual = gamma1_residual(phi[usable], psi[usable])
        failures = int(np.count_nonzero((residual > 0.0) != (gap[usable] < 0.0)))
        return _count(
            "gamma1_sign_separation",
            "the angle-form Gamma1 residual is positive on the Triangle and negative on the Leg",
            failures,
            int(np.count_nonzero(usable)),
        )

    def check_gamma1_residual_on_curve(self) -> CheckResult:
        h1, gap = self._h1_gaps()
        on_curve = np.abs(gap) < 1e-10
        return _below(
            "gamma1_residual_on_curve",
            "the angle-form Gamma1 residual vanishes on samples of Gamma1",
            np.abs(gamma1_residual(h1[on_curve, 2], h1[on_curve, 3])),
            TOLERANCES.h_tol,
        )

    def check_wc_boundary_closed_form(self) -> CheckResult:
        residuals = []
        for c in BOUNDARY_CHECK_C:
            x_plus, x_minus = wc_boundary_x(c)
            ref_plus = bisect_root(lambda x: math.exp(2 * x + c) - math.exp(x) - 1.0, -c - 1.0, 1.0, 1e-13)
            ref_minus = bisect_root(lambda x: math.exp(2 * x + c) + math.exp(x) - 1.0, -c - 1.0, 1.0, 1e-13)
            residuals += [abs(x_plus - ref_plus), abs(x_minus - ref_minus)]
        return _below(
            "wc_boundary_closed_form",
            "closed-form ends of W_c match bisection on the two boundary equations",
            residuals,
            1e-10,
        )

    def check_gamma1_ends(self) -> CheckResult:
        x_plus, x_minus = wc_boundary_x(LN2)
        return _below(
            "gamma1_ends",
            "Gamma1 meets the amoeba boundary at x = 0 and x = -ln2",
            [abs(x_plus), abs(x_minus + LN2)],
            1e-14,
        )

    def check_wc_slope_finite_differences(self) -> CheckResult:
        errors = []
        for c in SLOPE_CHECK_C:
            x_plus, x_minus = wc_boundary_x(c)
            x, _ = _trace_wc(c, SLOPE_POINTS)
            h = 1e-6 * (x_plus - x_minus)
            ahead = amoeba_lift_many(x + h, 2.0 * (x + h) + c)
            behind = amoeba_lift_many(x - h, 2.0 * (x - h) + c)
            numeric = (ahead[:, 3] - behind[:, 3]) / (ahead[:, 2] - behind[:, 2])
            exact = np.array([argwc_slope(value, c) for value in x])
            errors.append(np.abs(numeric - exact) / np.maximum(np.abs(exact), 1.0))
        return _below(
            "wc_slope_finite_differences",
            "the x-form slope of Arg(W_c) matches central differences of the traced curve",
            np.concatenate(errors),
            1e-4,
        )

    def check_wc_slope_forms_agree(self) -> CheckResult:
        errors = []
        for c in SLOPE_CHECK_C:
            x, traced = _trace_wc(c, SLOPE_POINTS)
            k = math.exp(-c)
            for value, (_, _, phi, psi) in zip(x, traced):
                exact = argwc_slope(value, c)
                errors.append(abs(argwc_slope_phi(phi, psi, k) - exact) / max(abs(exact), 1.0))
        return _below(
            "wc_slope_forms_agree",
            "the angle-form and x-form slopes of Arg(W_c) agree",
            errors,
            1e-8,
        )

    def check_wc_slope_decreasing(self) -> CheckResult:
        increments = []
        for c in SLOPE_CHECK_C:
            x, traced = _trace_wc(c, SLOPE_POINTS)
            order = np.argsort(traced[:, 2])
            slopes = np.array([argwc_slope(value, c) for value in x[order]])
            increments.append(np.diff(slopes))
        return _below(
            "wc_slope_decreasing",
            "the slope of Arg(W_c) strictly decreases as phi grows (concave arc)",
            np.concatenate(increments),
            0.0,
        )

    def check_wc_slope_derivative_sign(self) -> CheckResult:
        failures, total = 0, 0
        for c in SLOPE_CHECK_C:
            x_plus, x_minus = wc_boundary_x(c)
            for value in np.linspace(x_minus, x_plus, 200):
                failures += argwc_slope_derivative_sign(float(value), c) != 1
                total += 1
        return _count(
            "wc_slope_derivative_sign",
            "the x-derivative of the slope is positive across W_c",
            failures,
            total,
        )

    def check_wc_endpoint_slopes(self) -> CheckResult:
        residuals = []
        for c in ENDPOINT_SLOPE_C:
            x_plus, x_minus = wc_boundary_x(c)
            residuals += [argwc_slope(x_plus, c) - 0.5, -1.0 - argwc_slope(x_minus, c)]
        return _below(
            "wc_endpoint_slopes",
            "Arg(W_c) leaves (0, pi) with slope at most 1/2 and reaches (pi, pi) with slope at least -1",
            residuals,
            TOLERANCES.boundary_tol,
        )

    def check_wc_radial_uniqueness(self) -> CheckResult:
        """Each ray from O or O' to psi = pi crosses Arg(W_c) exactly once."""
        s = np.linspace(0.0, 1.0, FAN_STEPS + 1)
        ends = (np.arange(FAN_RAYS) + 0.5) * (PI / FAN_RAYS)
        failures, total = 0, 0
        for c in UNIQUENESS_C:
            k = math.exp(-c)
            for center, offset in ((O_CENTER, 0.0), (O_PRIME, PI)):
                for end in ends:
                    phi = center[0] + s * (offset + end - center[0])
                    psi = center[1] + s * (PI - center[1])
                    failures += _sign_changes(wc_residual(phi, psi, k)) != 1
                    total += 1
        return _count(
            "wc_radial_uniqueness",
            "every ray from the flow centre to psi = pi meets Arg(W_c) exactly once",
            failures,
            total,
        )

    # --- phase tropical line -------------------------------------------------------

    def check_htrop_strata_membership(self) -> CheckResult:
        strata = htrop_stratum_samples(self.seed)
        distances, _ = htrop_distances(np.vstack(list(strata.values())))
        return _below(
            "htrop_strata_membership",
            "points built on each stratum are at distance zero from H_trop",
            distances,
            TOLERANCES.identity_tol,
        )

    def check_htrop_strata_separation(self) -> CheckResult:
        rng = np.random.default_rng(self.seed + 2)
        n = STRATUM_POINTS
        far = rng.uniform(1.0, TOLERANCES.leg_cutoff, n)
        phi = rng.uniform(0.0, TAU, n)
        zeros = np.zeros(n)
        vertex_angles = _random_in_triangles(rng, COAMOEBA_TRIANGLES, n)
        base = {
            "leg1": (np.column_stack([-far, zeros, phi, np.full(n, PI)]), (1, 3), (-1.0, 1.0)),
            "leg2": (np.column_stack([zeros, -far, np.full(n, PI), phi]), (0, 2), (-1.0, 1.0)),
            "leg3": (np.column_stack([far, far, phi, np.mod(phi + PI, TAU)]), (0, 1, 2, 3), (-1.0, 1.0)),
            "vertex": (np.column_stack([zeros, zeros, vertex_angles]), (0, 1), (1.0,)),
        }
        displaced = []
        for points, columns, signs in base.values():
            for column in columns:
                for sign in signs:
                    moved = points.copy()
                    moved[:, column] += sign * 0.2
                    moved[:, 2:] = np.mod(moved[:, 2:], TAU)
                    displaced.append(moved)
        distances, _ = htrop_distances(np.vstack(displaced))
        return _above(
            "htrop_strata_separation",
            "moving 0.2 off a stratum in one coordinate leaves H_trop by more than 0.1",
            distances,
            0.1,
        )

    def check_htrop_vertex_identifications(self) -> CheckResult:
        corners = np.vstack([T1_VERTICES, T2_VERTICES, [O_CENTER, O_PRIME]])
        shifted = np.vstack([corners, np.mod(corners - 1e-15, TAU), np.mod(corners + TAU, TAU)])
        points = np.column_stack([np.zeros((shifted.shape[0], 2)), shifted])
        distances, _ = htrop_distances(points)
        return _below(
            "htrop_vertex_identifications",
            "triangle corners and their torus identifications belong to the vertex fibre",
            distances,
            TOLERANCES.identity_tol,
        )

    def check_htrop_parts_cycle(self) -> CheckResult:
        points = np.vstack(list(htrop_stratum_samples(self.seed).values()))
        before = htrop_part_masks(points)
        after = htrop_part_masks(lambda_map_many(points))
        failures = int(np.count_nonzero(np.any(after != np.roll(before, 1, axis=1), axis=1)))
        return _count(
            "htrop_parts_cycle",
            "lambda sends H1trop to H2trop, H2trop to H3trop and H3trop to H1trop",
            failures,
            points.shape[0],
        )

    # --- isotopy ------------------------------------------------------------------

    def check_identity_at_t0(self) -> CheckResult:
        step = self._step("main", 0.0)
        return _below(
            "identity_at_t0",
            "the deformation starts at the identity",
            ambient_distances(step.images, self.samples.points),
            TOLERANCES.identity_tol,
        )

    def check_endpoint_on_htrop(self) -> CheckResult:
        distances, _ = htrop_distances(self._step("main", 1.0).images)
        return _below(
            "endpoint_on_htrop",
            "the deformation ends on the phase tropical line",
            distances,
            TOLERANCES.endpoint_tol,
        )

    def check_endpoint_parts(self) -> CheckResult:
        images = self._step("main", 1.0).images
        majors = major_masks(self.samples.points)
        parts = htrop_part_masks(images)
        failures = int(np.count_nonzero(np.any(majors & ~parts, axis=1)))
        return _count(
            "endpoint_parts",
            "each piece Hi of H ends inside the matching piece Hitrop",
            failures,
            self.samples.points.shape[0],
        )

    def _seam_gaps(self, same_major: bool) -> List[np.ndarray]:
        """Distances between images of every pair of branches that share a row."""
        gaps: List[np.ndarray] = []
        for key in ("main", "seams"):
            for t in self.t_grid:
                branch_images = self._step(key, t).branch_images
                for i, (first, first_images) in enumerate(branch_images):
                    for second, second_images in branch_images[i + 1:]:
                        if (first.major is second.major) != same_major:
                            continue
                        common, a, b = np.intersect1d(first.rows, second.rows, return_indices=True)
                        if common.size:
                            gaps.append(ambient_distances(first_images[a], second_images[b]))
        return gaps

    def check_leg_triangle_seam(self) -> CheckResult:
        gaps = self._seam_gaps(same_major=True)
        return _below(
            "leg_triangle_seam",
            "on Gamma1 the Leg and Triangle formulas agree at every grid time",
            np.concatenate(gaps) if gaps else [],
            self.params.seam_tol,
        )

    def check_major_seam(self) -> CheckResult:
        gaps = self._seam_gaps(same_major=False)
        return _below(
            "major_seam",
            "on Hi n Hj the conjugated maps agree at every grid time",
            np.concatenate(gaps) if gaps else [],
            self.params.seam_tol,
        )

    def check_fixed_boundary_arguments(self) -> CheckResult:
        points = self.samples.points
        isolated = np.array([forced_arguments(kind) for kind in BoundaryKind if forced_arguments(kind)])
        offsets = angle_difference(points[:, None, 2:], isolated[None, :, :])
        corner = np.min(np.max(np.abs(offsets), axis=2), axis=1) <= TOLERANCES.boundary_tol
        seam_points = self._seams().points
        seam_offsets = angle_difference(seam_points[:, None, 2:], isolated[None, :, :])
        seam_corner = np.min(np.max(np.abs(seam_offsets), axis=2), axis=1) <= TOLERANCES.boundary_tol
        residuals = []
        for key, rows, source in (("main", corner, points), ("seams", seam_corner, seam_points)):
            if not np.any(rows):
                continue
            for t in self.t_grid:
                images = self._step(key, t).images[rows]
                moved = np.abs(angle_difference(images[:, 2:], source[rows, 2:]))
                residuals.append(np.max(moved, axis=1))
        return _below(
            "fixed_boundary_arguments",
            "real arguments (0, pi), (pi, 0), (pi, pi) never move",
            np.concatenate(residuals) if residuals else [],
            TOLERANCES.identity_tol,
        )

    def check_flow_in_closure(self) -> CheckResult:
        distances = []
        for t in self.t_grid:
            for branch, images in self._step("main", t).branch_images:
                representatives = to_h1(images, branch.major)
                distances.append(torus_distance_to_triangles(representatives[:, 2:], (A1_VERTICES, A2_VERTICES)))
        return _below(
            "flow_in_closure",
            "the coamoeba flow keeps arguments of H1 in the closure of Arg(H1)",
            np.concatenate(distances) if distances else [],
            TOLERANCES.membership_tol,
        )

    def check_sample_injectivity(self) -> CheckResult:
        failures = 0
        for t in self.t_grid:
            failures += injectivity_violations(
                self.samples.points,
                self._step("main", t).images,
                TOLERANCES.injectivity_delta,
                TOLERANCES.injectivity_eps,
            )
        return _count(
            "sample_injectivity",
            "samples at least 0.05 apart never map within 1e-6 of each other",
            failures,
            self.samples.points.shape[0] * len(self.t_grid),
        )

    def check_leg_collapse(self) -> CheckResult:
        residuals = []
        for c in LEG_COLLAPSE_C:
            curve = sample_wc_curve(c, WC_CURVE_POINTS, self.seed)
            images = DeformationPlan.build(curve.points, self.params).at(1.0).images
            residuals.append(np.max(np.column_stack([
                np.abs(images[:, 0] - (LN2 - c) / 2.0),
                np.abs(images[:, 1]),
                np.abs(angle_difference(images[:, 3], PI)),
            ]), axis=1))
        return _below(
            "leg_collapse",
            "W_c collapses at t = 1 onto x = (ln2 - c)/2, y = 0, psi = pi",
            np.concatenate(residuals),
            TOLERANCES.endpoint_tol,
        )

    def check_worked_leg_point(self) -> CheckResult:
        point = np.array([[-LN2, math.log(math.sqrt(3.0) / 2.0), 2.0 * PI / 3.0, 7.0 * PI / 6.0]])
        image = DeformationPlan.build(point, self.params).at(1.0, strict=True).images
        # W_c collapse value with c = y - 2x = ln(2 sqrt 3)
        c = point[0, 1] - 2.0 * point[0, 0]
        expected = np.array([[(LN2 - c) / 2.0, 0.0, 2.0 * PI / 3.0, PI]])
        closed_form = abs((LN2 - c) / 2.0 + 0.25 * math.log(3.0))
        return _below(
            "worked_leg_point",
            "a Leg point over (-ln2, ln(sqrt3/2)) lands on (-ln3/4, 0, 2pi/3, pi)",
            [float(ambient_distances(image, expected)[0]), closed_form],
            TOLERANCES.identity_tol,
        )

    def check_mesh_stretch_bounded(self) -> CheckResult:
        if self.samples.adjacency.size == 0:
            return _vacuous("mesh_stretch_bounded", "sample set has no mesh edges", TOLERANCES.stretch_limit)
        ratios = [
            _edge_stretch(self.samples.points, self._step("main", t).images, self.samples.adjacency)
            for t in self.t_grid
        ]
        return _below(
            "mesh_stretch_bounded",
            "mesh edges stretch by less than the recorded limit at every grid time",
            np.concatenate(ratios),
            TOLERANCES.stretch_limit,
        )

    def check_mesh_stretch_at_t0(self) -> CheckResult:
        if self.samples.adjacency.size == 0:
            return _vacuous("mesh_stretch_at_t0", "sample set has no mesh edges", 1e-9)
        ratios = _edge_stretch(self.samples.points, self._step("main", 0.0).images, self.samples.adjacency)
        return _below(
            "mesh_stretch_at_t0",
            "every mesh edge keeps its length at t = 0",
            np.abs(ratios - 1.0),
            1e-9,
        )

    # --- driver -------------------------------------------------------------------

    def checks(self) -> List[Callable[[], CheckResult]]:
        return [
            self.check_line_residual,
            self.check_modulus_identities,
            self.check_argument_relift,
            self.check_amoeba_inequalities,
            self.check_coamoeba_membership,
            self.check_forced_boundary_arguments,
            self.check_lambda_order_three,
            self.check_lambda_inverse,
            self.check_lambda_cycles_pieces,
            self.check_gamma1_sign_separation,
            self.check_gamma1_residual_on_curve,
            self.check_wc_boundary_closed_form,
            self.check_gamma1_ends,
            self.check_wc_slope_finite_differences,
            self.check_wc_slope_forms_agree,
            self.check_wc_slope_decreasing,
            self.check_wc_slope_derivative_sign,
            self.check_wc_endpoint_slopes,
            self.check_wc_radial_uniqueness,
            self.check_htrop_strata_membership,
            self.check_htrop_strata_separation,
            self.check_htrop_vertex_identifications,
            self.check_htrop_parts_cycle,
            self.check_identity_at_t0,
            self.check_endpoint_on_htrop,
            self.check_endpoint_parts,
            self.check_leg_triangle_seam,
            self.check_major_seam,
            self.check_fixed_boundary_arguments,
            self.check_flow_in_closure,
            self.check_sample_injectivity,
            self.check_leg_collapse,
            self.check_worked_leg_point,
            self.check_mesh_stretch_bounded,
            self.check_mesh_stretch_at_t0,
        ]

    def _run_check(self, check: Callable[[], CheckResult]) -> CheckResult:
        name = check.__name__.removeprefix("check_")
        try:
            result = check()
        except IsotopyException as e:
            log_error_with_context(
                f"Check {name} raised {type(e).__name__}: {e.message}",
                context={"detail": e.detail},
                run_id=self.run_id,
            )
            result = CheckResult(
                name=name,
                description=f"raised {type(e).__name__}: {e.message}",
                max_residual=float("nan"),
                tolerance=0.0,
                passed=False,
                sample_count=0,
            )
        log_check_result(
            result.name, result.passed, result.max_residual, result.tolerance, result.sample_count, self.run_id
        )
        return result

    def run(self) -> VerificationReport:
        started = time.perf_counter()
        logger.info(
            f"Verification run over {len(self.samples)} samples",
            extra_fields={"t_grid": list(self.t_grid), "seed": self.seed},
            run_id=self.run_id,
        )
        results = [self._run_check(check) for check in self.checks()]
        report = VerificationReport.from_checks(results)
        log_performance_metric(
            "verification_run",
            round((time.perf_counter() - started) * 1000.0, 1),
            tags={"overall": str(report.overall)},
            run_id=self.run_id,
        )
        return report


def run_suite(
    samples: SampleSet,
    params: IsotopyParams = DEFAULT_PARAMS,
    t_grid: Iterable[float] = DEFAULT_T_GRID,
    seam_samples: Optional[SampleSet] = None,
) -> VerificationReport:
    """
    Run every check on the samples.

    Seam checks need points on Gamma1 and on Hi n Hj; unless ``seam_samples``
    is given, a seam-curve set with the same seed is drawn for them.
    """
    return VerificationSuite(samples, params, t_grid, seam_samples).run()
