"""Typical-user metrics of one realisation: SINR, outage and energy efficiency."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..domain.errors import ParameterError
from ..domain.models import (
    AssociationPolicy,
    Deployment,
    PowerMap,
    ServingClass,
    SimParams,
    TrialOutcome,
)
from .channel import db_to_linear, dbm_to_watt, path_loss
from .geometry import distances_to_origin, nearest
from .power import cap_fraction, grid_powers_w

_LN2 = math.log(2.0)


def select_serving(
    deployment: Deployment, association: AssociationPolicy
) -> tuple[ServingClass, Optional[int]]:
    """Pick the serving SBS of the user at the origin.

    Macro BSs never serve. Under NEAREST_ANY the on-grid list precedes the
    off-grid list, so an exact distance tie goes to the on-grid SBS.

    Returns:
        (serving_class, index into that class's position array), or
        (ServingClass.NONE, None) when there is no candidate
    """
    best: Optional[tuple[float, ServingClass, int]] = None
    if association is AssociationPolicy.NEAREST_ANY and len(deployment.ongrid_positions):
        index, distance = nearest(deployment.ongrid_positions)
        best = (distance, ServingClass.ONGRID, index)
    if len(deployment.offgrid_positions):
        index, distance = nearest(deployment.offgrid_positions)
        if best is None or distance < best[0]:
            best = (distance, ServingClass.OFFGRID, index)
    if best is None:
        return ServingClass.NONE, None
    return best[1], best[2]


def serving_distance(
    deployment: Deployment, serving_class: ServingClass, serving_index: Optional[int]
) -> Optional[float]:
    """Distance from the origin to the serving SBS, None without one."""
    if serving_class is ServingClass.NONE or serving_index is None:
        return None
    points = (
        deployment.ongrid_positions
        if serving_class is ServingClass.ONGRID
        else deployment.offgrid_positions
    )
    x, y = points[serving_index]
    return float(math.hypot(x, y))


def _field_power(
    positions: np.ndarray,
    powers_w: np.ndarray,
    skip: Optional[int],
    params: SimParams,
) -> float:
    if len(positions) == 0:
        return 0.0
    keep = np.ones(len(positions), dtype=bool)
    if skip is not None:
        keep[skip] = False
    if not keep.any():
        return 0.0
    gains = path_loss(distances_to_origin(positions[keep]), params.path_loss)
    return float(np.sum(powers_w[keep] * gains))


def aggregate_interference(
    deployment: Deployment,
    powers: PowerMap,
    serving_class: ServingClass,
    serving_index: Optional[int],
    params: SimParams,
) -> float:
    """Received power at the origin from every transmitter but the server.

    All SBSs of both classes interfere at their assigned powers, plus every
    macro BS. With no server, every SBS interferes.

    Raises:
        SingularDistanceError: An interferer sits exactly at the origin
    """
    ongrid_skip = serving_index if serving_class is ServingClass.ONGRID else None
    offgrid_skip = serving_index if serving_class is ServingClass.OFFGRID else None
    return (
        _field_power(
            deployment.ongrid_positions, powers.ongrid_powers_w, ongrid_skip, params
        )
        + _field_power(
            deployment.offgrid_positions, powers.offgrid_powers_w, offgrid_skip, params
        )
        + _field_power(deployment.macro_positions, powers.macro_powers_w, None, params)
    )


def sinr(
    serving_power_w: float,
    serving_distance_m: float,
    interference_w: float,
    params: SimParams,
) -> float:
    """Downlink SINR p_s * L(d) / (I + N0); zero for a silent server."""
    if serving_power_w == 0:
        return 0.0
    gain = path_loss(serving_distance_m, params.path_loss)
    return serving_power_w * gain / (interference_w + dbm_to_watt(params.n0_dbm))


def is_outage(sinr_linear: float, params: SimParams) -> bool:
    """True when SINR does not exceed the target threshold."""
    return sinr_linear <= db_to_linear(params.theta_t_db)


def spectral_efficiency(sinr_linear: float) -> float:
    """log2(1 + SINR) in bits/s/Hz."""
    return math.log1p(sinr_linear) / _LN2


def energy_efficiency(
    sinr_linear: float, serving_class: ServingClass, params: SimParams
) -> float:
    """Rate per watt of grid power spent by the serving SBS.

    On-grid servers draw Ps + Pe from the grid, off-grid servers only the
    static Pe. No server means zero efficiency.
    """
    if sinr_linear < 0:
        raise ParameterError(f"sinr must be >= 0, got {sinr_linear!r}", key="sinr")
    if serving_class is ServingClass.NONE:
        return 0.0
    p_s, _ = grid_powers_w(params)
    p_eps = dbm_to_watt(params.p_eps_dbm)
    grid_power = p_s + p_eps if serving_class is ServingClass.ONGRID else p_eps
    return spectral_efficiency(sinr_linear) / grid_power


def evaluate(
    deployment: Deployment, powers: PowerMap, params: SimParams
) -> TrialOutcome:
    """Compute the typical-user outcome of a powered deployment."""
    serving_class, serving_index = select_serving(deployment, params.association)
    interference = aggregate_interference(
        deployment, powers, serving_class, serving_index, params
    )
    capped = cap_fraction(powers, params)
    if serving_class is ServingClass.NONE:
        return TrialOutcome(
            serving_class=serving_class,
            serving_index=None,
            serving_power_w=0.0,
            sinr_linear=0.0,
            outage=True,
            ee=0.0,
            interference_w=interference,
            cap_fraction=capped,
        )

    distance = serving_distance(deployment, serving_class, serving_index)
    class_powers = (
        powers.ongrid_powers_w
        if serving_class is ServingClass.ONGRID
        else powers.offgrid_powers_w
    )
    power = float(class_powers[serving_index])
    value = sinr(power, distance, interference, params)
    return TrialOutcome(
        serving_class=serving_class,
        serving_index=serving_index,
        serving_power_w=power,
        sinr_linear=value,
        outage=is_outage(value, params),
        ee=energy_efficiency(value, serving_class, params),
        serving_distance_m=distance,
        interference_w=interference,
        rate=spectral_efficiency(value),
        cap_fraction=capped,
    )
