import math
from typing import List, Optional

import numpy as np

from core import constants
from core.exceptions import ProfileException
from core.logger import get_logger
from models.equilibrium import DistributionSummary, SlackEntry, SlackReport
from models.game import TypeProfile
from services.statistics import summarize_distribution

logger = get_logger(__name__)


def slack_vector(
    types: TypeProfile,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
    labels: Optional[List[str]] = None,
) -> SlackReport:
    """
    How long each vessel could delay arrival without changing its service.

    Runs the SFTW completion chain C_i = max(t_i, C_{i-1}) + gamma from
    C_{-1} = t0 and sets slack_i = max(0, min(t_{i+1}, C_{i-1}) - t_i).
    A vessel tied with its predecessor's type gets zero.

    Raises:
        ProfileException: labels do not match the players
    """
    if labels is not None and len(labels) != types.n:
        raise ProfileException("one label per player is required", {"n": types.n, "labels": len(labels)})

    entries: List[SlackEntry] = []
    predecessor = types.t0
    for i, t_i in enumerate(types.types):
        slack = max(0.0, min(types.next_type(i), predecessor) - t_i)
        if i > 0 and t_i - types.types[i - 1] <= eps_tie:
            slack = 0.0
        entries.append(
            SlackEntry(
                player=i,
                label=labels[i] if labels is not None else str(i + 1),
                type_time=t_i,
                predecessor_completion=predecessor,
                slack=slack,
            )
        )
        predecessor = max(t_i, predecessor) + types.gamma

    report = build_slack_report(entries)
    logger.debug(
        "[SLACK] Slack computed",
        context={"n": types.n, "total": report.total, "positive": report.count_positive},
    )
    return report


def build_slack_report(entries: List[SlackEntry]) -> SlackReport:
    """Attach mean, median, total and positive count to slack rows."""
    if not entries:
        return SlackReport()
    slacks = [e.slack for e in entries]
    return SlackReport(
        entries=entries,
        mean=math.fsum(slacks) / len(slacks),
        median=float(np.median(slacks)),
        total=math.fsum(slacks),
        count_positive=sum(1 for s in slacks if s > 0),
    )


def slack_aggregate(
    report: SlackReport,
    bin_width: float = constants.DEFAULT_SLACK_BIN_HOURS,
    trim: float = constants.DEFAULT_TRIM,
) -> DistributionSummary:
    """Mean, median, total, zero share and histogram of a slack report."""
    return summarize_distribution(report.slacks, bin_width, trim)
