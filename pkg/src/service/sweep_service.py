"""Parameter sweeps and grid-search optima over lambda_s and beta.

Grid point i always uses stream counter i, so a singleton grid reproduces a
direct estimate and two variants swept on the same grid (path-loss law,
association policy) see the same realisations point by point.
"""
from __future__ import annotations

import math
from logging import Logger
from typing import Callable, Optional, Sequence

from src.domain.errors import ParameterError, SimulationError
from src.domain.models import (
    AssociationPolicy,
    LevelOptimum,
    MetricEstimate,
    Objective,
    OptimumReport,
    PathLossMode,
    PathLossModel,
    PointEstimate,
    SimParams,
    SweepResult,
    SweptParam,
)
from src.service.base_service import BaseService
from src.service.monte_carlo_service import MonteCarloService

# Macro intensity coupling used for lambda sweeps: lambda_m = lambda_s / 50.
DEFAULT_LAMBDA_RATIO = 50.0


def _metric(point: PointEstimate, objective: Objective) -> MetricEstimate:
    return point.outage if objective is Objective.MIN_OUTAGE else point.ee


def _better(a: float, b: float, objective: Objective) -> bool:
    return a < b if objective is Objective.MIN_OUTAGE else a > b


def _separated(
    winner: MetricEstimate, other: MetricEstimate, objective: Objective
) -> bool:
    if objective is Objective.MIN_OUTAGE:
        return winner.ci_high < other.ci_low
    return winner.ci_low > other.ci_high


def _best_index(
    estimates: Sequence[MetricEstimate], objective: Objective, exclude: int = -1
) -> Optional[int]:
    best: Optional[int] = None
    for index, estimate in enumerate(estimates):
        if index == exclude:
            continue
        if best is None or _better(estimate.mean, estimates[best].mean, objective):
            best = index
    return best


def find_optimal(sweep: SweepResult, objective: Objective) -> OptimumReport:
    """Exhaustive argmin/argmax over the grid.

    Ties go to the smaller parameter value. The report says whether the
    winner's interval is disjoint from the runner-up's.
    """
    if not sweep.points:
        raise ParameterError("cannot optimise an empty sweep", key="grid")
    objective = Objective(objective)
    estimates = [_metric(point, objective) for point in sweep.points]
    winner = _best_index(estimates, objective)
    runner_up = _best_index(estimates, objective, exclude=winner)
    return OptimumReport(
        objective=objective,
        param_value=sweep.grid[winner],
        index=winner,
        estimate=estimates[winner],
        runner_up_value=None if runner_up is None else sweep.grid[runner_up],
        ci_separated=(
            runner_up is not None
            and _separated(estimates[winner], estimates[runner_up], objective)
        ),
    )


def interior_extremum(sweep: SweepResult, objective: Objective) -> Optional[int]:
    """Index of an interior grid point CI-separated from both endpoints.

    For MIN_OUTAGE the interior upper bound must lie below both endpoint
    lower bounds (and mirrored for MAX_EE). Returns the best such index,
    None when the curve shows no significant interior optimum.
    """
    objective = Objective(objective)
    estimates = [_metric(point, objective) for point in sweep.points]
    if len(estimates) < 3:
        return None
    first, last = estimates[0], estimates[-1]
    candidates = [
        index
        for index in range(1, len(estimates) - 1)
        if _separated(estimates[index], first, objective)
        and _separated(estimates[index], last, objective)
    ]
    if not candidates:
        return None
    best = _best_index([estimates[i] for i in candidates], objective)
    return candidates[best]


def validate_grid(
    grid: Sequence[float], key: str, lower: float, upper: float = math.inf
) -> tuple[float, ...]:
    """Check a sweep grid is non-empty, strictly increasing and in range."""
    values = tuple(float(value) for value in grid)
    if not values:
        raise ParameterError(f"{key} grid is empty", key=key)
    for value in values:
        if not (math.isfinite(value) or value == upper) or not lower <= value <= upper:
            raise ParameterError(
                f"{key} grid value {value!r} outside [{lower}, {upper}]", key=key
            )
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ParameterError(f"{key} grid must be strictly increasing", key=key)
    return values


class SweepService(BaseService):
    """Drives the Monte Carlo service along parameter grids."""

    def __init__(self, logger: Logger, monte_carlo: MonteCarloService):
        """Initialize sweep service.

        Args:
            logger: Logger instance for this service
            monte_carlo: Estimator used for every grid point
        """
        super().__init__(logger)
        self.monte_carlo = monte_carlo

    def _run(
        self,
        swept: SweptParam,
        grid: tuple[float, ...],
        base: SimParams,
        params_for: Callable[[float], SimParams],
    ) -> SweepResult:
        points: list[PointEstimate] = []
        for index, value in enumerate(grid):
            params = params_for(value)
            self.logger.info(
                "Sweep %s point %d/%d: %s=%g (%s, %s)",
                swept.value,
                index + 1,
                len(grid),
                swept.value,
                value,
                params.path_loss.mode.value,
                params.association.value,
            )
            try:
                points.append(self.monte_carlo.estimate(params, point_index=index))
            except SimulationError as e:
                self.logger.error("Sweep point %s=%g failed: %s", swept.value, value, e)
                raise SimulationError(f"{swept.value}={value:g}: {e}") from e
        return SweepResult(
            swept_param=swept,
            grid=grid,
            points=tuple(points),
            fixed_params=base,
            path_loss_mode=base.path_loss.mode,
            association=base.association,
        )

    def sweep_lambda(
        self,
        base: SimParams,
        lambda_grid: Sequence[float],
        lambda_ratio: Optional[float] = DEFAULT_LAMBDA_RATIO,
    ) -> SweepResult:
        """Estimate along lambda_s with lambda_m = lambda_s / lambda_ratio.

        Args:
            base: Fixed parameters
            lambda_grid: SBS intensities, per m^2
            lambda_ratio: Coupling ratio; None keeps base.lambda_m fixed
        """
        grid = validate_grid(lambda_grid, "lambda_s", 0.0)
        if lambda_ratio is not None and not (
            math.isfinite(lambda_ratio) and lambda_ratio > 0
        ):
            raise ParameterError(
                f"lambda_ratio must be > 0, got {lambda_ratio!r}", key="lambda_ratio"
            )

        def params_for(value: float) -> SimParams:
            if lambda_ratio is None:
                return base.with_overrides(lambda_s=value)
            return base.with_overrides(lambda_s=value, lambda_m=value / lambda_ratio)

        return self._run(SweptParam.LAMBDA_S, grid, base, params_for)

    def sweep_beta(self, base: SimParams, beta_grid: Sequence[float]) -> SweepResult:
        """Estimate along the on-grid proportion beta."""
        grid = validate_grid(beta_grid, "beta", 0.0, 1.0)
        return self._run(
            SweptParam.BETA, grid, base, lambda value: base.with_overrides(beta=value)
        )

    def compare_pathloss(
        self,
        base: SimParams,
        lambda_grid: Sequence[float],
        lambda_ratio: Optional[float] = DEFAULT_LAMBDA_RATIO,
        single_alpha: float = 4.0,
    ) -> dict[PathLossMode, SweepResult]:
        """Lambda sweep under the dual-slope law and a single-slope law."""
        dual_model = base.path_loss
        if dual_model.mode is not PathLossMode.DUAL:
            dual_model = PathLossModel(
                critical_distance_m=dual_model.critical_distance_m,
                clamp_gain=dual_model.clamp_gain,
            )
        single_model = PathLossModel(
            alpha_near=single_alpha,
            alpha_far=single_alpha,
            critical_distance_m=dual_model.critical_distance_m,
            mode=PathLossMode.SINGLE,
            clamp_gain=dual_model.clamp_gain,
        )
        return {
            mode: self.sweep_lambda(
                base.with_overrides(path_loss=model), lambda_grid, lambda_ratio
            )
            for mode, model in (
                (PathLossMode.DUAL, dual_model),
                (PathLossMode.SINGLE, single_model),
            )
        }

    def compare_association(
        self, base: SimParams, beta_grid: Sequence[float]
    ) -> dict[AssociationPolicy, SweepResult]:
        """Beta sweep for flexible and off-grid-only association."""
        return {
            policy: self.sweep_beta(base.with_overrides(association=policy), beta_grid)
            for policy in (AssociationPolicy.NEAREST_ANY, AssociationPolicy.OFFGRID_ONLY)
        }

    def optimize(
        self,
        base: SimParams,
        over: SweptParam,
        levels: Sequence[float],
        grid: Sequence[float],
        objective: Objective,
        lambda_ratio: Optional[float] = DEFAULT_LAMBDA_RATIO,
    ) -> list[LevelOptimum]:
        """Grid-search optimum of one parameter at each level of the other.

        Sweeping lambda_s, levels are beta values; sweeping beta, levels are
        lambda_s values (lambda_m follows lambda_ratio when given).

        Returns:
            One LevelOptimum per level, in level order, each with its full sweep
        """
        over = SweptParam(over)
        optima: list[LevelOptimum] = []
        for level in levels:
            if over is SweptParam.LAMBDA_S:
                sweep = self.sweep_lambda(
                    base.with_overrides(beta=level), grid, lambda_ratio
                )
            else:
                changes = {"lambda_s": level}
                if lambda_ratio is not None:
                    changes["lambda_m"] = level / lambda_ratio
                sweep = self.sweep_beta(base.with_overrides(**changes), grid)
            report = find_optimal(sweep, objective)
            if not report.ci_separated:
                self.logger.warning(
                    "Optimum %s=%g at level %g is not CI-separated from %s",
                    over.value,
                    report.param_value,
                    level,
                    report.runner_up_value,
                )
            optima.append(LevelOptimum(float(level), report, sweep))
        return optima
