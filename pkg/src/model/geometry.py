"""Spatial point patterns of one network realisation.

All functions are pure given an explicit numpy Generator; the typical user
is the origin of the coordinate system.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..domain.errors import NoCandidateError, ParameterError
from ..domain.models import Deployment, Region, SimParams

# Lower bound of the density-adaptive window, in critical distances.
MIN_WINDOW_CRITICAL_DISTANCES = 4.0


def sample_ppp(
    intensity: float, region: Region, rng: np.random.Generator
) -> np.ndarray:
    """Draw a homogeneous Poisson point process on the disc `region`.

    The count is Poisson(intensity * pi * R^2); radii use the inverse CDF
    R * sqrt(u) and angles are uniform, which makes positions uniform on
    the disc.

    Args:
        intensity: Points per m^2
        region: Sampling window
        rng: Random stream

    Returns:
        (n, 2) array of positions in metres
    """
    if not (math.isfinite(intensity) and intensity >= 0):
        raise ParameterError(
            f"intensity must be a finite value >= 0, got {intensity!r}",
            key="intensity",
        )
    count = int(rng.poisson(intensity * region.area_m2))
    radius = region.radius_m * np.sqrt(rng.random(count))
    angle = 2.0 * math.pi * rng.random(count)
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


def thin(
    points: np.ndarray, beta: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Independently keep each point with probability `beta`.

    Returns:
        (kept, removed), both in input order
    """
    if not (0.0 <= beta <= 1.0):
        raise ParameterError(f"beta must lie in [0, 1], got {beta!r}", key="beta")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    keep = rng.random(len(points)) < beta
    return points[keep], points[~keep]


def distances_to_origin(points: np.ndarray) -> np.ndarray:
    """Euclidean norms of an (n, 2) array."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.hypot(points[:, 0], points[:, 1])


def nearest(
    points: np.ndarray, query: Sequence[float] = (0.0, 0.0)
) -> tuple[int, float]:
    """Return (index, distance) of the point closest to `query`.

    Ties go to the lowest index.

    Raises:
        NoCandidateError: `points` is empty
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        raise NoCandidateError("no candidate points")
    distances = np.hypot(points[:, 0] - query[0], points[:, 1] - query[1])
    index = int(np.argmin(distances))
    return index, float(distances[index])


def effective_region(params: SimParams) -> Region:
    """Return the window a realisation is sampled on.

    With `target_sbs_count` set, the radius is chosen so the mean SBS count
    equals the target, clipped to [4 * d_c, region.radius_m].
    """
    if params.target_sbs_count <= 0 or params.lambda_s <= 0:
        return params.region
    radius = math.sqrt(params.target_sbs_count / (math.pi * params.lambda_s))
    floor = MIN_WINDOW_CRITICAL_DISTANCES * params.path_loss.critical_distance_m
    radius = min(params.region.radius_m, max(floor, radius))
    return Region(radius)


def deploy(params: SimParams, rng: np.random.Generator) -> Deployment:
    """Sample macro and SBS fields, then split SBSs into on-grid/off-grid."""
    region = effective_region(params)
    macro = sample_ppp(params.lambda_m, region, rng)
    sbs = sample_ppp(params.lambda_s, region, rng)
    ongrid, offgrid = thin(sbs, params.beta, rng)
    return Deployment(
        macro_positions=macro,
        ongrid_positions=ongrid,
        offgrid_positions=offgrid,
        region=region,
    )
