"""Deterministic propagation: dual-slope path loss and unit conversions.

Every function accepts a scalar or a numpy array and returns the same shape
(a plain float for scalar input).
"""
from __future__ import annotations

from typing import Union

import numpy as np

from ..domain.errors import ParameterError, SingularDistanceError
from ..domain.models import PathLossModel

ArrayLike = Union[float, np.ndarray]


def _shaped(values: np.ndarray) -> ArrayLike:
    return float(values) if values.ndim == 0 else values


def path_loss(distance_m: ArrayLike, model: PathLossModel) -> ArrayLike:
    """Return the multiplicative gain d^-alpha of the piecewise law.

    The near exponent applies for d <= d_c, the far exponent for d > d_c.
    No continuity constant is applied at d_c, so the law jumps there
    whenever the exponents differ.

    Args:
        distance_m: Transmitter-receiver distance(s) in metres
        model: Path-loss parameters

    Returns:
        Gain(s), dimensionless

    Raises:
        SingularDistanceError: A distance is exactly zero and the model
            does not clamp gain
        ParameterError: A distance is negative or NaN
    """
    d = np.asarray(distance_m, dtype=float)
    if np.isnan(d).any() or (d < 0).any():
        raise ParameterError("distance must be >= 0", key="distance_m")
    if not model.clamp_gain and (d == 0).any():
        raise SingularDistanceError(
            "zero transmitter-receiver distance gives unbounded path gain"
        )

    with np.errstate(divide="ignore"):
        gain = np.where(
            d > model.critical_distance_m,
            np.power(d, -model.alpha_far),
            np.power(d, -model.alpha_near),
        )
    if model.clamp_gain:
        gain = np.minimum(gain, 1.0)
    return _shaped(gain)


def dbm_to_watt(p_dbm: ArrayLike) -> ArrayLike:
    """Convert dBm to watts."""
    return _shaped(np.power(10.0, (np.asarray(p_dbm, dtype=float) - 30.0) / 10.0))


def watt_to_dbm(p_w: ArrayLike) -> ArrayLike:
    """Convert watts to dBm (-inf for zero power)."""
    with np.errstate(divide="ignore"):
        return _shaped(10.0 * np.log10(np.asarray(p_w, dtype=float)) + 30.0)


def db_to_linear(x_db: ArrayLike) -> ArrayLike:
    """Convert a ratio in dB to linear scale."""
    return _shaped(np.power(10.0, np.asarray(x_db, dtype=float) / 10.0))


def linear_to_db(x: ArrayLike) -> ArrayLike:
    """Convert a linear ratio to dB (-inf for zero)."""
    with np.errstate(divide="ignore"):
        return _shaped(10.0 * np.log10(np.asarray(x, dtype=float)))
