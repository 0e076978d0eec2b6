"""Numerical kernels: point processes, propagation, power and user metrics."""
from .channel import db_to_linear, dbm_to_watt, linear_to_db, path_loss, watt_to_dbm
from .geometry import deploy, effective_region, nearest, sample_ppp, thin
from .metrics import (
    aggregate_interference,
    energy_efficiency,
    evaluate,
    select_serving,
    sinr,
)
from .power import assign_powers, cap_fraction, harvested_power

__all__ = [
    "aggregate_interference",
    "assign_powers",
    "cap_fraction",
    "db_to_linear",
    "dbm_to_watt",
    "deploy",
    "effective_region",
    "energy_efficiency",
    "evaluate",
    "harvested_power",
    "linear_to_db",
    "nearest",
    "path_loss",
    "sample_ppp",
    "select_serving",
    "sinr",
    "thin",
    "watt_to_dbm",
]
