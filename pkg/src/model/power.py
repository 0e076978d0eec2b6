"""Transmit power assignment.

On-grid SBSs and macro BSs transmit at their fixed grid powers. An off-grid
SBS transmits what it harvests from on-grid SBSs and macro BSs, scaled by the
RF-to-DC efficiency and capped by its battery capacity Ps. Harvesting is
instantaneous: power is a function of the current geometry only.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from ..domain.models import Deployment, PowerMap, SimParams
from .channel import dbm_to_watt, path_loss

# Off-grid rows per distance-matrix block.
HARVEST_BLOCK_ROWS = 1024


def grid_powers_w(params: SimParams) -> tuple[float, float]:
    """Return (Ps, Pm) in watts."""
    return dbm_to_watt(params.p_s_dbm), dbm_to_watt(params.p_m_dbm)


def _incident_power(
    targets: np.ndarray,
    ongrid_positions: np.ndarray,
    macro_positions: np.ndarray,
    params: SimParams,
) -> np.ndarray:
    """Sum of received grid-powered RF power at each target, in watts."""
    p_s, p_m = grid_powers_w(params)
    model = params.path_loss
    incident = np.zeros(len(targets))
    for start in range(0, len(targets), HARVEST_BLOCK_ROWS):
        block = targets[start : start + HARVEST_BLOCK_ROWS]
        total = np.zeros(len(block))
        if len(ongrid_positions):
            total += p_s * path_loss(cdist(block, ongrid_positions), model).sum(axis=1)
        if len(macro_positions):
            total += p_m * path_loss(cdist(block, macro_positions), model).sum(axis=1)
        incident[start : start + len(block)] = total
    return incident


def harvested_power(
    sbs_position: Sequence[float],
    ongrid_positions: np.ndarray,
    macro_positions: np.ndarray,
    params: SimParams,
) -> float:
    """Return the capped harvested transmit power of one off-grid SBS.

    p = min(Ps, eta * (sum over on-grid of Ps*L + sum over macros of Pm*L)).
    Other off-grid SBSs are not harvest sources.

    Raises:
        SingularDistanceError: The SBS coincides with a source and the
            path-loss model does not clamp gain
    """
    target = np.asarray(sbs_position, dtype=float).reshape(1, 2)
    ongrid = np.asarray(ongrid_positions, dtype=float).reshape(-1, 2)
    macro = np.asarray(macro_positions, dtype=float).reshape(-1, 2)
    p_s, _ = grid_powers_w(params)
    incident = _incident_power(target, ongrid, macro, params)[0]
    return float(min(p_s, params.eta * incident))


def assign_powers(deployment: Deployment, params: SimParams) -> PowerMap:
    """Assign a transmit power to every transmitter of a deployment."""
    p_s, p_m = grid_powers_w(params)
    incident = _incident_power(
        deployment.offgrid_positions,
        deployment.ongrid_positions,
        deployment.macro_positions,
        params,
    )
    return PowerMap(
        macro_powers_w=np.full(len(deployment.macro_positions), p_m),
        ongrid_powers_w=np.full(len(deployment.ongrid_positions), p_s),
        offgrid_powers_w=np.minimum(p_s, params.eta * incident),
    )


def cap_fraction(powers: PowerMap, params: SimParams) -> float:
    """Fraction of off-grid SBSs whose harvest reached the battery cap."""
    if len(powers.offgrid_powers_w) == 0:
        return 0.0
    p_s, _ = grid_powers_w(params)
    return float(np.mean(powers.offgrid_powers_w >= p_s))
