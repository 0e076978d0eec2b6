"""Domain models for the harvesting small-cell simulator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

import numpy as np

from .errors import ParameterError


class PathLossMode(str, Enum):
    """Path-loss law family."""

    DUAL = "dual"
    SINGLE = "single"


class AssociationPolicy(str, Enum):
    """Which SBSs may serve the typical user.

    - NEAREST_ANY: closest SBS of either class
    - OFFGRID_ONLY: closest off-grid SBS, even if an on-grid one is closer
    """

    NEAREST_ANY = "nearest_any"
    OFFGRID_ONLY = "offgrid_only"


class ServingClass(str, Enum):
    """Class of the SBS serving the typical user."""

    ONGRID = "ongrid"
    OFFGRID = "offgrid"
    NONE = "none"


class MetricId(str, Enum):
    """Metric estimated by the Monte Carlo service."""

    OUTAGE = "outage"
    EE = "ee"
    RATE = "rate"


class SweptParam(str, Enum):
    """Parameter varied along a sweep grid."""

    LAMBDA_S = "lambda_s"
    BETA = "beta"


class Objective(str, Enum):
    """Optimisation target for grid searches."""

    MIN_OUTAGE = "min_outage"
    MAX_EE = "max_ee"


def _require(condition: bool, message: str, key: str) -> None:
    if not condition:
        raise ParameterError(f"{key}: {message}", key=key)


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass(frozen=True)
class Region:
    """Disc-shaped simulation window centred on the typical user."""

    radius_m: float = 500.0

    def __post_init__(self) -> None:
        _require(
            _is_real(self.radius_m)
            and math.isfinite(self.radius_m)
            and self.radius_m > 0,
            f"must be a positive finite length, got {self.radius_m!r}",
            "region_radius_m",
        )

    @property
    def area_m2(self) -> float:
        return math.pi * self.radius_m**2


@dataclass(frozen=True)
class PathLossModel:
    """Dual-slope power-law attenuation.

    `alpha_near` applies for d <= critical_distance_m, `alpha_far` beyond.
    Single mode is the same law with both exponents equal.
    """

    alpha_near: float = 2.0
    alpha_far: float = 4.0
    critical_distance_m: float = 4.0
    mode: PathLossMode = PathLossMode.DUAL
    clamp_gain: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", PathLossMode(self.mode))
        _require(
            _is_real(self.alpha_near) and self.alpha_near >= 0,
            f"must be >= 0, got {self.alpha_near!r}",
            "alpha_near",
        )
        _require(
            _is_real(self.alpha_far) and self.alpha_far >= 0,
            f"must be >= 0, got {self.alpha_far!r}",
            "alpha_far",
        )
        _require(
            _is_real(self.critical_distance_m)
            and math.isfinite(self.critical_distance_m)
            and self.critical_distance_m > 0,
            f"must be > 0, got {self.critical_distance_m!r}",
            "d_c_m",
        )
        if self.mode is PathLossMode.SINGLE:
            _require(
                self.alpha_near == self.alpha_far,
                "single mode requires alpha_near == alpha_far "
                f"(got {self.alpha_near!r} and {self.alpha_far!r})",
                "pathloss_mode",
            )

    @classmethod
    def single_slope(
        cls, alpha: float = 4.0, critical_distance_m: float = 4.0
    ) -> "PathLossModel":
        """Return the single-slope law d^-alpha."""
        return cls(
            alpha_near=alpha,
            alpha_far=alpha,
            critical_distance_m=critical_distance_m,
            mode=PathLossMode.SINGLE,
        )


@dataclass(frozen=True)
class SimParams:
    """Every scalar knob of the model.

    Powers are stored in dBm and ratios in dB as quoted for the network
    model; conversions to watts happen in the channel module.
    """

    lambda_s: float = 1e-3  # SBS intensity, per m^2
    lambda_m: float = 1e-3 / 50  # macro intensity, per m^2
    beta: float = 0.5  # on-grid proportion
    p_m_dbm: float = 40.0
    p_s_dbm: float = 23.0  # on-grid power and off-grid battery cap
    eta: float = 0.7
    n0_dbm: float = -120.0
    theta_t_db: float = 5.0
    p_eps_dbm: float = 6.0
    path_loss: PathLossModel = field(default_factory=PathLossModel)
    region: Region = field(default_factory=Region)
    n_trials: int = 10_000
    seed: int = 1
    association: AssociationPolicy = AssociationPolicy.NEAREST_ANY
    target_sbs_count: float = 0.0  # 0 keeps the window fixed

    def __post_init__(self) -> None:
        object.__setattr__(self, "association", AssociationPolicy(self.association))
        for key in ("lambda_s", "lambda_m"):
            value = getattr(self, key)
            _require(
                _is_real(value) and math.isfinite(value) and value >= 0,
                f"must be a finite intensity >= 0, got {value!r}",
                key,
            )
        _require(
            _is_real(self.beta) and 0.0 <= self.beta <= 1.0,
            f"must lie in [0, 1], got {self.beta!r}",
            "beta",
        )
        _require(
            _is_real(self.eta) and 0.0 < self.eta <= 1.0,
            f"must lie in (0, 1], got {self.eta!r}",
            "eta",
        )
        for key in ("p_m_dbm", "p_s_dbm", "n0_dbm", "theta_t_db", "p_eps_dbm"):
            value = getattr(self, key)
            _require(
                _is_real(value) and math.isfinite(value),
                f"must be a finite number, got {value!r}",
                key,
            )
        _require(
            isinstance(self.n_trials, int)
            and not isinstance(self.n_trials, bool)
            and self.n_trials >= 1,
            f"must be an integer >= 1, got {self.n_trials!r}",
            "n_trials",
        )
        _require(
            isinstance(self.seed, int)
            and not isinstance(self.seed, bool)
            and 0 <= self.seed < 2**64,
            f"must be an integer in [0, 2^64), got {self.seed!r}",
            "seed",
        )
        _require(
            _is_real(self.target_sbs_count)
            and math.isfinite(self.target_sbs_count)
            and self.target_sbs_count >= 0,
            f"must be >= 0, got {self.target_sbs_count!r}",
            "target_sbs_count",
        )
        _require(
            isinstance(self.path_loss, PathLossModel),
            "must be a PathLossModel",
            "path_loss",
        )
        _require(isinstance(self.region, Region), "must be a Region", "region")

    def with_overrides(self, **changes: Any) -> "SimParams":
        """Return a validated copy with the given fields replaced."""
        return replace(self, **changes)


def _as_points(value: Any) -> np.ndarray:
    points = np.asarray(value, dtype=float)
    if points.size == 0:
        return np.empty((0, 2), dtype=float)
    return points.reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class Deployment:
    """One spatial realisation; the typical user sits at the origin.

    Positions are (n, 2) float arrays in metres. A transmitter belongs to
    exactly one of the three arrays.
    """

    macro_positions: np.ndarray
    ongrid_positions: np.ndarray
    offgrid_positions: np.ndarray
    region: Region = field(default_factory=Region)

    def __post_init__(self) -> None:
        for name in ("macro_positions", "ongrid_positions", "offgrid_positions"):
            points = _as_points(getattr(self, name))
            if points.size:
                radii = np.hypot(points[:, 0], points[:, 1])
                if float(radii.max()) > self.region.radius_m * (1 + 1e-12):
                    raise ParameterError(
                        f"{name}: point outside the {self.region.radius_m} m window",
                        key=name,
                    )
            object.__setattr__(self, name, points)

    @property
    def n_sbs(self) -> int:
        return len(self.ongrid_positions) + len(self.offgrid_positions)


@dataclass(frozen=True, eq=False)
class PowerMap:
    """Transmit powers in watts, index-aligned with a Deployment."""

    macro_powers_w: np.ndarray
    ongrid_powers_w: np.ndarray
    offgrid_powers_w: np.ndarray


@dataclass(frozen=True)
class TrialOutcome:
    """Typical-user result of one realisation."""

    serving_class: ServingClass
    serving_index: Optional[int]
    serving_power_w: float
    sinr_linear: float
    outage: bool
    ee: float  # bits/s/Hz per watt
    serving_distance_m: Optional[float] = None
    interference_w: float = 0.0
    rate: float = 0.0  # bits/s/Hz
    cap_fraction: float = 0.0


@dataclass(frozen=True)
class MetricEstimate:
    """Monte Carlo estimate of one metric at one parameter point (95 % CI)."""

    metric_id: MetricId
    mean: float
    ci_low: float
    ci_high: float
    n_trials: int

    @property
    def ci_halfwidth(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0


@dataclass(frozen=True)
class PointEstimate:
    """All estimates for one parameter point."""

    outage: MetricEstimate
    ee: MetricEstimate
    rate: MetricEstimate
    cap_fraction: float
    n_trials: int  # trials requested
    n_failed: int  # trials excluded on singular geometry


@dataclass(frozen=True)
class SweepResult:
    """Estimates along a one-dimensional parameter grid."""

    swept_param: SweptParam
    grid: tuple[float, ...]
    points: tuple[PointEstimate, ...]
    fixed_params: SimParams
    path_loss_mode: PathLossMode
    association: AssociationPolicy

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.points):
            raise ParameterError(
                "grid and points must have the same length", key="grid"
            )
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ParameterError("grid must be strictly increasing", key="grid")


@dataclass(frozen=True)
class OptimumReport:
    """Best grid point of a sweep for one objective."""

    objective: Objective
    param_value: float
    index: int
    estimate: MetricEstimate
    runner_up_value: Optional[float]
    ci_separated: bool


@dataclass(frozen=True)
class LevelOptimum:
    """Optimum at one level of the held-fixed parameter, with its sweep."""

    level: float
    report: OptimumReport
    sweep: SweepResult


@dataclass
class RunManifest:
    """Everything needed to reproduce one CSV output."""

    command: str
    params: dict[str, Any]
    seed: int
    version: str
    grid: list[float] = field(default_factory=list)
    presets: dict[str, str] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    n_trials: dict[str, int] = field(default_factory=dict)
    n_failed: int = 0
    threads: int = 1
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "params": dict(self.params),
            "seed": self.seed,
            "version": self.version,
            "grid": list(self.grid),
            "presets": dict(self.presets),
            "options": dict(self.options),
            "n_trials": dict(self.n_trials),
            "n_failed": self.n_failed,
            "threads": self.threads,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "RunManifest":
        try:
            return cls(
                command=payload["command"],
                params=dict(payload["params"]),
                seed=int(payload["seed"]),
                version=str(payload.get("version", "")),
                grid=[float(v) for v in payload.get("grid", [])],
                presets=dict(payload.get("presets", {})),
                options=dict(payload.get("options", {})),
                n_trials=dict(payload.get("n_trials", {})),
                n_failed=int(payload.get("n_failed", 0)),
                threads=int(payload.get("threads", 1)),
                timestamp=str(payload.get("timestamp", "")),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParameterError(f"malformed manifest: {e}", key="manifest") from e
