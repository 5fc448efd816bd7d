"""
Monte Carlo checks of truthful arrival under incomplete information.
"""
from services.simulation.priors import build_prior, sample_type_matrix, sample_type_profile
from services.simulation.monte_carlo import (
    best_response_scan,
    deviation_gain,
    deviation_table,
    mc_expected_service_time,
)

__all__ = [
    "build_prior",
    "sample_type_matrix",
    "sample_type_profile",
    "best_response_scan",
    "deviation_gain",
    "deviation_table",
    "mc_expected_service_time",
]
