"""
Counterfactual slack analysis on observed voyages.
Observed port entries are read as types of vessels already playing SFTW.
"""
import math
from collections import defaultdict
from typing import Dict, List, Optional

from pydantic import ValidationError

from core import constants
from core.exceptions import EmptyResultException, InvariantViolationException, ProfileException
from core.logger import get_logger
from models.analysis import AnalysisWindow
from models.equilibrium import SlackReport
from models.voyage import Voyage
from services.equilibrium.intervals import green_profile, sftw_profile
from services.equilibrium.slack import build_slack_report, slack_vector
from services.queue.waiting import completion_times

logger = get_logger(__name__)

WINDOW_HOURS = {"day": 24.0, "week": 168.0}
COMPLETION_TOLERANCE = 1e-9


def types_from_observations(
    voyages: List[Voyage],
    gamma: float,
    t0: Optional[float] = None,
    label: str = "all",
) -> AnalysisWindow:
    """
    Build the game instance: entries sorted, ties broken by vessel_id.

    Raises:
        EmptyResultException: no voyages
        ProfileException: non-positive gamma
    """
    if not voyages:
        raise EmptyResultException("No voyages to analyse")
    try:
        return AnalysisWindow(voyages=voyages, gamma=gamma, t0=t0, label=label)
    except ValidationError as e:
        raise ProfileException("Invalid analysis window", {"reason": e.errors()[0]["msg"]}) from e


def split_windows(voyages: List[Voyage], gamma: float, mode: str = "none") -> List[AnalysisWindow]:
    """
    One game over everything, or one per calendar day/week bucket of t_entry.

    Every bucket starts without backlog (t0 = its first entry).
    """
    if mode == "none":
        return [types_from_observations(voyages, gamma)]
    if mode not in WINDOW_HOURS:
        raise ProfileException("Unknown window split", {"mode": mode})
    if not voyages:
        raise EmptyResultException("No voyages to analyse")

    buckets: Dict[int, List[Voyage]] = defaultdict(list)
    for voyage in voyages:
        buckets[math.floor(voyage.t_entry / WINDOW_HOURS[mode])].append(voyage)
    return [types_from_observations(buckets[k], gamma, label=f"{mode}-{k}") for k in sorted(buckets)]


def run_slack_analysis(window: AnalysisWindow, eps_tie: float = constants.DEFAULT_EPS_TIE) -> SlackReport:
    """Per-voyage slack of one window, labelled by vessel_id."""
    report = slack_vector(window.type_profile(), eps_tie, labels=window.vessel_ids)
    entries = [entry.model_copy(update={"window": window.label}) for entry in report.entries]
    logger.info(
        "[SLACK] Window analysed",
        context={"window": window.label, "voyages": len(entries), "total": round(report.total, 4)},
    )
    return report.model_copy(update={"entries": entries})


def merge_reports(reports: List[SlackReport]) -> SlackReport:
    """Pool the rows of several window reports and recompute the aggregates."""
    return build_slack_report([entry for report in reports for entry in report.entries])


def verify_green_realizability(
    window: AnalysisWindow,
    eps_green: float = constants.DEFAULT_EPS_GREEN,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> None:
    """
    Check that the latest-arrival equilibrium keeps every completion time of SFTW.

    Raises:
        InvariantViolationException: some completion differs by more than 1e-9
    """
    types = window.type_profile()
    truthful = sftw_profile(types)
    green = green_profile(types, eps_green, eps_tie)

    base = completion_times(truthful.canonical_order(), truthful)
    delayed = completion_times(green.canonical_order(), green)
    for position, (a, b) in enumerate(zip(base, delayed)):
        if abs(a - b) > COMPLETION_TOLERANCE:
            raise InvariantViolationException(
                "Green profile changes a completion time",
                {"window": window.label, "position": position + 1, "sftw": a, "green": b},
            )
