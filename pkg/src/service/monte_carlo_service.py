"""Seeded Monte Carlo estimation of outage probability and energy efficiency.

Every trial draws from its own stream, derived from the master seed by the
counter pair (point_index, trial_index). Trials are split into contiguous
chunks run on a thread pool; outcomes are put back in trial order before
reduction, so estimates are bit-identical for any number of threads.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from logging import Logger
from typing import Any, Optional

import numpy as np

from src.domain.errors import SimulationError, SingularDistanceError
from src.domain.models import (
    MetricId,
    PointEstimate,
    ServingClass,
    SimParams,
    TrialOutcome,
)
from src.model.channel import linear_to_db, watt_to_dbm
from src.model.geometry import deploy
from src.model.metrics import evaluate
from src.model.power import assign_powers
from src.service.base_service import BaseService
from src.service.estimators import mean_estimate, proportion_estimate


def trial_rng(seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    """Independent random stream for one trial of one parameter point."""
    sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(point_index, trial_index)
    )
    return np.random.default_rng(sequence)


def run_trial(params: SimParams, rng: np.random.Generator) -> TrialOutcome:
    """Sample one realisation and evaluate the typical user.

    deploy -> assign_powers -> select_serving -> aggregate_interference ->
    sinr -> outage / EE.
    """
    deployment = deploy(params, rng)
    powers = assign_powers(deployment, params)
    return evaluate(deployment, powers, params)


class MonteCarloService(BaseService):
    """Runs independent trials and aggregates them into interval estimates."""

    DEFAULT_CHUNK_SIZE = 256

    def __init__(
        self,
        logger: Logger,
        threads: Optional[int] = None,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
    ):
        """Initialize Monte Carlo service.

        Args:
            logger: Logger instance for this service
            threads: Worker threads (None reads SIM_THREADS from config)
            chunk_size: Trials per work unit handed to a thread
        """
        super().__init__(logger)
        if threads is not None and threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        if chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
        self._threads = threads
        self.chunk_size = chunk_size

        self._stats_lock = threading.Lock()
        self._stats: dict[str, Any] = {
            "points": 0,
            "trials": 0,
            "failed": 0,
            "last_error": None,
        }

    @property
    def threads(self) -> int:
        if self._threads is None:
            return self.config.threads
        return self._threads

    def get_stats(self) -> dict[str, Any]:
        """Return counters accumulated over all estimates of this service."""
        with self._stats_lock:
            return dict(self._stats)

    def _run_chunk(
        self, params: SimParams, point_index: int, start: int, stop: int
    ) -> list[Optional[TrialOutcome]]:
        outcomes: list[Optional[TrialOutcome]] = []
        for trial_index in range(start, stop):
            rng = trial_rng(params.seed, point_index, trial_index)
            try:
                outcomes.append(run_trial(params, rng))
            except SingularDistanceError as e:
                self.logger.warning(
                    "Trial %d of point %d excluded: %s", trial_index, point_index, e
                )
                with self._stats_lock:
                    self._stats["failed"] += 1
                    self._stats["last_error"] = str(e)
                outcomes.append(None)
        self.logger.debug(
            "Point %d: trials %d-%d done", point_index, start, stop - 1
        )
        return outcomes

    def simulate(
        self, params: SimParams, point_index: int = 0
    ) -> list[Optional[TrialOutcome]]:
        """Run all trials of one point; None marks an excluded trial.

        Returns:
            Outcomes in trial-index order
        """
        n = params.n_trials
        chunks = [
            (start, min(start + self.chunk_size, n))
            for start in range(0, n, self.chunk_size)
        ]
        threads = min(self.threads, len(chunks))
        if threads == 1:
            parts = [
                self._run_chunk(params, point_index, start, stop)
                for start, stop in chunks
            ]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(
                    pool.map(
                        lambda chunk: self._run_chunk(params, point_index, *chunk),
                        chunks,
                    )
                )
        with self._stats_lock:
            self._stats["trials"] += n
        return [outcome for part in parts for outcome in part]

    def estimate(self, params: SimParams, point_index: int = 0) -> PointEstimate:
        """Estimate outage probability, mean EE and mean rate at one point.

        Args:
            params: Model parameters (n_trials and seed included)
            point_index: Counter separating streams of different sweep points

        Returns:
            PointEstimate; failed trials are counted and excluded

        Raises:
            SimulationError: Every trial failed
        """
        outcomes = self.simulate(params, point_index)
        valid = [outcome for outcome in outcomes if outcome is not None]
        n_failed = len(outcomes) - len(valid)
        if not valid:
            raise SimulationError(
                f"all {len(outcomes)} trials of point {point_index} failed"
            )

        outages = sum(1 for outcome in valid if outcome.outage)
        result = PointEstimate(
            outage=proportion_estimate(outages, len(valid), MetricId.OUTAGE),
            ee=mean_estimate((o.ee for o in valid), MetricId.EE),
            rate=mean_estimate((o.rate for o in valid), MetricId.RATE),
            cap_fraction=math.fsum(o.cap_fraction for o in valid) / len(valid),
            n_trials=params.n_trials,
            n_failed=n_failed,
        )
        with self._stats_lock:
            self._stats["points"] += 1

        if n_failed:
            self.logger.warning(
                "Point %d: %d of %d trials excluded", point_index, n_failed, len(outcomes)
            )
        served = [o.serving_power_w for o in valid if o.serving_class is not ServingClass.NONE]
        median_sinr_db = float(linear_to_db(np.median([o.sinr_linear for o in valid])))
        serving_dbm = (
            float(watt_to_dbm(math.fsum(served) / len(served))) if served else -math.inf
        )
        self.logger.info(
            "Point %d: outage=%.4f [%.4f, %.4f], ee=%.4g +/- %.3g (n=%d), "
            "median SINR %.1f dB, mean serving power %.1f dBm",
            point_index,
            result.outage.mean,
            result.outage.ci_low,
            result.outage.ci_high,
            result.ee.mean,
            result.ee.ci_halfwidth,
            len(valid),
            median_sinr_db,
            serving_dbm,
        )
        return result
