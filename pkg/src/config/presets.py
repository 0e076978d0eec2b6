"""Named parameter points and sweep grids shipped with the simulator.

Grids are chosen for the regimes where the harvesting trade-offs show:
`sparse` spans a mean of 10 to 1000 SBSs in the default 500 m window, where
every link sits on the far slope; `ultra-dense` spans 1e-3 to 1 SBS per m^2,
where inter-site distances approach the critical distance and the near slope
takes over. The ultra-dense grid is only tractable with an adaptive window,
hence its recommended target_sbs_count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.domain.errors import ParameterError
from src.domain.models import Region, SimParams


@dataclass(frozen=True)
class GridPreset:
    """A named sweep grid.

    `target_sbs_count` is the window target the grid is meant to run with;
    0 means the fixed default window.
    """

    name: str
    values: tuple[float, ...]
    description: str
    target_sbs_count: float = 0.0


def _mean_count_grid(low: float, high: float, points: int) -> tuple[float, ...]:
    area = Region().area_m2
    grid = np.logspace(math.log10(low / area), math.log10(high / area), points)
    return tuple(float(v) for v in grid)


def _step_grid(stop: float, step: float) -> tuple[float, ...]:
    count = int(round(stop / step)) + 1
    return tuple(round(i * step, 10) for i in range(count))


ULTRA_DENSE_TARGET_SBS_COUNT = 500.0

LAMBDA_PRESETS: dict[str, GridPreset] = {
    "sparse": GridPreset(
        name="sparse",
        values=_mean_count_grid(10.0, 1000.0, 7),
        description="mean SBS count 10..1000 in the 500 m window, 7 log-spaced points",
    ),
    "ultra-dense": GridPreset(
        name="ultra-dense",
        values=tuple(float(v) for v in np.logspace(-3.0, 0.0, 10)),
        description="1e-3..1 SBS per m^2, 10 log-spaced points, adaptive window",
        target_sbs_count=ULTRA_DENSE_TARGET_SBS_COUNT,
    ),
}

BETA_PRESETS: dict[str, GridPreset] = {
    "standard": GridPreset(
        name="standard",
        values=_step_grid(1.0, 0.1),
        description="0..1 step 0.1",
    ),
    # beta = 1 leaves offgrid_only association with no candidate at all
    "association": GridPreset(
        name="association",
        values=_step_grid(0.9, 0.1),
        description="0..0.9 step 0.1",
    ),
}

PARAM_PRESETS: dict[str, SimParams] = {
    "defaults": SimParams(),
    "ultra-dense": SimParams(
        lambda_s=0.05,
        lambda_m=0.05 / 50,
        target_sbs_count=ULTRA_DENSE_TARGET_SBS_COUNT,
    ),
}


def get_grid_preset(kind: str, name: str) -> GridPreset:
    """Look up a lambda or beta grid preset by name.

    Raises:
        ParameterError: Unknown kind or name
    """
    table = {"lambda_s": LAMBDA_PRESETS, "beta": BETA_PRESETS}.get(kind)
    if table is None:
        raise ParameterError(f"no grid presets for {kind!r}", key="preset")
    try:
        return table[name]
    except KeyError:
        raise ParameterError(
            f"unknown {kind} grid preset {name!r} (known: {', '.join(sorted(table))})",
            key="preset",
        ) from None


def get_param_preset(name: str) -> SimParams:
    """Look up a parameter preset by name."""
    try:
        return PARAM_PRESETS[name]
    except KeyError:
        raise ParameterError(
            f"unknown parameter preset {name!r} (known: {', '.join(sorted(PARAM_PRESETS))})",
            key="config",
        ) from None
