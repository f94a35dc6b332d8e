"""
Sample sets of H with mesh adjacency.

Four strategies cover H: a grid over the open coamoeba triangles lifted by
the inverse argument map, a grid over the amoeba interior lifted to both
sheets, a log-polar grid in the chart z -> (z, -1 - z), and dense 1-D samples
along the seams and boundary strata where the grids never land.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..config import TOLERANCES
from ..geometry.complex_line import (
    ambient_distances,
    amoeba_lift_many,
    chart_many,
    coamoeba_lift_many,
    in_open_coamoeba,
    relative_line_residuals,
    region_tags,
    wc_boundary_x,
)
from ..geometry.constants import LN2, PI, TAU
from ..pydantic_models.geometry import AmbientPoint, RegionTag, SamplingStrategy
from ..utils.exceptions import DomainError
from ..utils.logger import log_sample_event

# log|z| range of the complex chart grid
_CHART_RADIUS = 5.0
# real parameter range of the boundary strata
_BOUNDARY_RADIUS = 10.0


@dataclass
class SampleSet:
    """Points of H (rows x, y, phi, psi), their region tags and mesh edges."""

    points: np.ndarray
    tags: List[RegionTag]
    adjacency: np.ndarray
    strategy: SamplingStrategy
    seed: int

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 4)
        self.adjacency = np.asarray(self.adjacency, dtype=np.int64).reshape(-1, 2)
        n = self.points.shape[0]
        if len(self.tags) != n:
            raise DomainError("Every sample needs exactly one region tag", detail={"points": n, "tags": len(self.tags)})
        if self.adjacency.size:
            if self.adjacency.min() < 0 or self.adjacency.max() >= n:
                raise DomainError("Mesh edge index out of range")
            if np.any(self.adjacency[:, 0] == self.adjacency[:, 1]):
                raise DomainError("Mesh edges must join distinct points")
        if n and np.any(relative_line_residuals(self.points) >= TOLERANCES.h_tol):
            raise DomainError("Sample set contains points off H")

    def __len__(self) -> int:
        return self.points.shape[0]

    def ambient(self, index: int) -> AmbientPoint:
        return AmbientPoint.from_array(self.points[index])

    def serialized_tags(self) -> List[Tuple[str, str, str]]:
        return [tag.serialize() for tag in self.tags]

    def merge(self, other: "SampleSet") -> "SampleSet":
        """Disjoint union; the strategy and seed of the left operand are kept."""
        offset = len(self)
        return SampleSet(
            points=np.vstack([self.points, other.points]),
            tags=[*self.tags, *other.tags],
            adjacency=np.vstack([self.adjacency, other.adjacency + offset]),
            strategy=self.strategy,
            seed=self.seed,
        )


def _grid_edges(ids: np.ndarray, wrap_columns: bool = False) -> np.ndarray:
    """Edges between 4-neighbours of a 2-D id grid; -1 marks a missing node."""
    ids = ids.reshape(ids.shape[0], -1)
    pairs = [(ids[:-1, :], ids[1:, :]), (ids[:, :-1], ids[:, 1:])]
    if wrap_columns and ids.shape[1] > 2:
        pairs.append((ids[:, -1:], ids[:, :1]))
    edges = np.vstack([np.column_stack([a.ravel(), b.ravel()]) for a, b in pairs])
    keep = (edges >= 0).all(axis=1) & (edges[:, 0] != edges[:, 1])
    return edges[keep]


def _assemble(
    points: np.ndarray, edges: np.ndarray, strategy: SamplingStrategy, seed: int
) -> SampleSet:
    """Drop candidates beyond the leg cutoff or off H, re-index edges, tag the rest."""
    points = np.asarray(points, dtype=float).reshape(-1, 4)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    keep = np.all(np.isfinite(points), axis=1)
    keep &= np.all(np.abs(points[:, :2]) <= TOLERANCES.leg_cutoff, axis=1)
    keep[keep] &= relative_line_residuals(points[keep]) < TOLERANCES.h_tol

    remap = np.full(points.shape[0], -1, dtype=np.int64)
    remap[keep] = np.arange(int(np.count_nonzero(keep)))
    edges = remap[edges] if edges.size else edges
    edges = edges[(edges >= 0).all(axis=1) & (edges[:, 0] != edges[:, 1])] if edges.size else edges

    kept = points[keep]
    tags = region_tags(kept) if kept.shape[0] else []
    dropped = int(points.shape[0] - kept.shape[0])
    log_sample_event(strategy.value, kept.shape[0], edges.shape[0], seed, dropped)
    return SampleSet(points=kept, tags=tags, adjacency=edges, strategy=strategy, seed=seed)


def _coamoeba_grid(n: int, seed: int) -> SampleSet:
    """Cell-centred n x n grids over the squares holding T1 and T2, open triangles kept."""
    centres = (np.arange(n) + 0.5) * (PI / n)
    u, v = np.meshgrid(centres, centres, indexing="ij")
    blocks, edges, offset = [], [], 0
    for phi, psi in ((u, PI + v), (PI + u, v)):
        inside = in_open_coamoeba(phi, psi, TOLERANCES.grid_margin)
        ids = np.full(phi.shape, -1, dtype=np.int64)
        count = int(np.count_nonzero(inside))
        ids[inside] = offset + np.arange(count)
        if count:
            blocks.append(coamoeba_lift_many(phi[inside], psi[inside]))
        edges.append(_grid_edges(ids))
        offset += count
    points = np.vstack(blocks) if blocks else np.empty((0, 4))
    return _assemble(points, np.vstack(edges), SamplingStrategy.COAMOEBA_GRID, seed)


def _amoeba_grid(n: int, seed: int) -> SampleSet:
    """n x n grid over [-L, L]^2, interior amoeba nodes lifted to both sheets."""
    axis = np.linspace(-TOLERANCES.leg_cutoff, TOLERANCES.leg_cutoff, n)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    ex, ey = np.exp(x), np.exp(y)
    slack = np.minimum.reduce([1.0 + ex - ey, 1.0 + ey - ex, ex + ey - 1.0]) / (1.0 + ex + ey)
    interior = slack > TOLERANCES.grid_margin
    count = int(np.count_nonzero(interior))
    blocks, edges = [], []
    for sheet, upper in enumerate((False, True)):
        ids = np.full(x.shape, -1, dtype=np.int64)
        ids[interior] = sheet * count + np.arange(count)
        if count:
            blocks.append(amoeba_lift_many(x[interior], y[interior], upper=upper))
        edges.append(_grid_edges(ids))
    points = np.vstack(blocks) if blocks else np.empty((0, 4))
    return _assemble(points, np.vstack(edges), SamplingStrategy.AMOEBA_LIFT, seed)


def _complex_chart(n: int, seed: int) -> SampleSet:
    """
    Log-polar grid z = e^(rho + i theta): an odd number of rings symmetric about
    |z| = 1 and a multiple of four spokes, so z = +-1, +-i are grid nodes.
    """
    half = np.linspace(0.0, _CHART_RADIUS, n // 2 + 1)
    rho = np.concatenate([-half[:0:-1], half])
    spokes = 4 * max(1, -(-n // 4))
    theta = TAU * np.arange(spokes) / spokes
    z = np.exp(rho)[:, None] * np.exp(1j * theta)[None, :]
    valid = np.abs(z + 1.0) > 1e-12
    ids = np.full(z.shape, -1, dtype=np.int64)
    ids[valid] = np.arange(int(np.count_nonzero(valid)))
    points = chart_many(z[valid])
    return _assemble(points, _grid_edges(ids, wrap_columns=True), SamplingStrategy.COMPLEX_CHART, seed)


def _path_edges(ids: np.ndarray) -> np.ndarray:
    edges = np.column_stack([ids[:-1], ids[1:]])
    return edges[edges[:, 0] != edges[:, 1]]


def _curve_on_both_sheets(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Lift an amoeba curve to both sheets; upper copies of real-argument points are shared."""
    order = np.argsort(x, kind="stable")
    x, y = np.asarray(x, dtype=float)[order], np.asarray(y, dtype=float)[order]
    lower = amoeba_lift_many(x, y)
    upper = amoeba_lift_many(x, y, upper=True)
    duplicate = ambient_distances(lower, upper) <= 1e-15
    k = x.shape[0]
    lower_ids = np.arange(k)
    upper_ids = np.where(duplicate, lower_ids, k + np.cumsum(~duplicate) - 1)
    points = np.vstack([lower, upper[~duplicate]])
    edges = np.vstack([_path_edges(lower_ids), _path_edges(upper_ids)])
    return points, edges


def _stack_curves(curves: List[Tuple[np.ndarray, np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    blocks, edges, offset = [], [], 0
    for points, curve_edges in curves:
        blocks.append(points)
        edges.append(curve_edges + offset)
        offset += points.shape[0]
    return np.vstack(blocks), np.vstack(edges)


def _uniform_with_endpoints(rng: np.random.Generator, lo: float, hi: float, n: int) -> np.ndarray:
    return np.concatenate([[lo], rng.uniform(lo, hi, n), [hi]])


def _boundary_strata(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """The three real arcs of H: z > 0, z < -1 and -1 < z < 0."""
    rho = np.linspace(-_BOUNDARY_RADIUS, _BOUNDARY_RADIUS, n)
    curves = []
    for z in (np.exp(rho), -(1.0 + np.exp(rho)), -1.0 / (1.0 + np.exp(rho))):
        points = chart_many(z.astype(complex))
        curves.append((points, _path_edges(np.arange(points.shape[0]))))
    return curves


def _seam_curves(n: int, seed: int) -> SampleSet:
    rng = np.random.default_rng(seed)
    x_gamma = _uniform_with_endpoints(rng, -LN2, 0.0, n)
    segment = np.linspace(0.0, LN2, n)
    curves = [
        # Gamma1: y = 2x + ln2 across H1
        _curve_on_both_sheets(x_gamma, 2.0 * x_gamma + LN2),
        # H1 n H2, H2 n H3, H3 n H1
        _curve_on_both_sheets(-segment, -segment),
        _curve_on_both_sheets(segment, np.zeros_like(segment)),
        _curve_on_both_sheets(np.zeros_like(segment), segment),
        *_boundary_strata(n),
    ]
    points, edges = _stack_curves(curves)
    return _assemble(points, edges, SamplingStrategy.SEAM_CURVES, seed)


_STRATEGIES: Dict[SamplingStrategy, Callable[[int, int], SampleSet]] = {
    SamplingStrategy.COAMOEBA_GRID: _coamoeba_grid,
    SamplingStrategy.AMOEBA_LIFT: _amoeba_grid,
    SamplingStrategy.COMPLEX_CHART: _complex_chart,
    SamplingStrategy.SEAM_CURVES: _seam_curves,
}


def sample_line(strategy: SamplingStrategy, n: int, seed: int = 0) -> SampleSet:
    """
    Sample H with the given strategy.

    Args:
        strategy: which parametrization to sample through
        n: nodes per grid axis (grids) or per curve (seam curves)
        seed: random seed; only the seam curves draw random parameters

    Returns:
        SampleSet whose points all satisfy the line residual gate
    """
    if n < 1:
        raise DomainError(f"Sample size must be at least 1, got {n}")
    return _STRATEGIES[SamplingStrategy(strategy)](n, seed)


def sample_wc_curve(c: float, n: int, seed: int = 0) -> SampleSet:
    """Points of W_c (y = 2x + c inside the amoeba) on both sheets, endpoints included."""
    if n < 1:
        raise DomainError(f"Sample size must be at least 1, got {n}")
    x_plus, x_minus = wc_boundary_x(c)
    rng = np.random.default_rng(seed)
    x = _uniform_with_endpoints(rng, x_minus, x_plus, n)
    points, edges = _curve_on_both_sheets(x, 2.0 * x + c)
    return _assemble(points, edges, SamplingStrategy.SEAM_CURVES, seed)
