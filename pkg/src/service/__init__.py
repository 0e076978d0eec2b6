"""Service layer: Monte Carlo estimation and parameter sweeps."""
from .monte_carlo_service import MonteCarloService
from .sweep_service import SweepService, find_optimal, interior_extremum

__all__ = [
    "MonteCarloService",
    "SweepService",
    "find_optimal",
    "interior_extremum",
]
