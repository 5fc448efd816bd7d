"""
Complete-information equilibrium sets, focal selection, Nash verification
and slack.
"""
from services.equilibrium.intervals import (
    equilibrium_interval,
    equilibrium_intervals,
    green_profile,
    sftw_profile,
    theta,
)
from services.equilibrium.slack import slack_aggregate, slack_vector
from services.equilibrium.verifier import is_nash

__all__ = [
    "equilibrium_interval",
    "equilibrium_intervals",
    "green_profile",
    "sftw_profile",
    "theta",
    "slack_aggregate",
    "slack_vector",
    "is_nash",
]
