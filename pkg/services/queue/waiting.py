"""
Waiting times and their expectations over random tie-breaking.

Arrivals inside a tie block are snapped to the block's earliest member, so
every order in the block sees the same arrival sequence and only the
positions differ. Expectations follow from averaging positional starts.
"""
import math
from typing import List, Optional, Tuple

from core import constants
from core.exceptions import InvariantViolationException
from core.logger import get_logger
from models.game import QueueOutcome, ServiceOrder, StrategyProfile, tie_blocks
from services.queue.orders import check_order_consistency, enumerate_orders

logger = get_logger(__name__)

CROSS_CHECK_TOLERANCE = 1e-9


def completion_times(order: ServiceOrder, profile: StrategyProfile) -> List[float]:
    """
    Discrete-event completion instant of each served position.

    C_k = max(s_g(k), C_{k-1}) + gamma with C_{-1} = t0.
    """
    check_order_consistency(order, profile)
    effective = profile.effective_arrivals()

    completions = []
    previous = profile.t0
    for player in order.order:
        previous = max(effective[player], previous) + profile.gamma
        completions.append(previous)
    return completions


def waiting_time(i: int, order: ServiceOrder, profile: StrategyProfile) -> float:
    """
    Closed-form waiting of player i under a service order.

    The largest backlog over the players served no later than i, with the
    initial boundary t0 acting as a virtual player ahead of position 0.
    """
    profile.owner.check_player(i)
    check_order_consistency(order, profile)

    effective = profile.effective_arrivals()
    gamma = profile.gamma
    p = order.inverse[i]
    s_i = effective[i]

    wait = profile.t0 + p * gamma - s_i
    for k in range(p + 1):
        wait = max(wait, effective[order.order[k]] + (p - k) * gamma - s_i)
    return max(wait, 0.0)


def expected_start_times(
    arrivals: List[float],
    gamma: float,
    t0: float,
    tolerance: float = constants.DEFAULT_EPS_TIE,
) -> List[float]:
    """
    Expected service start of every player (arrival plus expected waiting).

    Works on bare lists so deviation scans can call it in tight loops.
    """
    expected = [0.0] * len(arrivals)
    previous = t0
    for block in tie_blocks(arrivals, tolerance):
        anchor = arrivals[block[0]]
        starts = []
        for _ in block:
            start = max(anchor, previous)
            starts.append(start)
            previous = start + gamma
        mean_start = math.fsum(starts) / len(starts)
        for player in block:
            expected[player] = mean_start
    return expected


def _block_position(i: int, profile: StrategyProfile) -> Tuple[int, int]:
    """First 0-based position and size of the tie block holding player i."""
    position = 0
    for block in profile.tie_blocks():
        if i in block:
            return position, len(block)
        position += len(block)
    raise InvariantViolationException("Player missing from tie blocks", {"player": i})


def enumerated_expectations(
    i: int,
    profile: StrategyProfile,
    cap: int = constants.DEFAULT_ENUMERATION_CAP,
) -> Tuple[float, float]:
    """
    Expected waiting and 1-based expected order of player i by full enumeration.

    Raises:
        EnumerationCapException: a tie block is larger than cap
    """
    profile.owner.check_player(i)
    orders = enumerate_orders(profile, cap)
    waits = [waiting_time(i, order, profile) for order in orders]
    positions = [order.inverse[i] + 1 for order in orders]
    return math.fsum(waits) / len(orders), math.fsum(positions) / len(orders)


def expected_waiting(
    i: int,
    profile: StrategyProfile,
    cross_check: bool = False,
    cap: int = constants.DEFAULT_ENUMERATION_CAP,
) -> float:
    """
    Ex-ante expected waiting of player i, uniform over the feasible orders.

    Args:
        i: 0-based player index
        profile: Strategy profile
        cross_check: Also enumerate the orders and compare when every tie
            block fits under cap

    Raises:
        InvariantViolationException: analytic and enumerated values disagree
    """
    profile.owner.check_player(i)
    starts = expected_start_times(profile.arrivals, profile.gamma, profile.t0, profile.tie_tolerance)
    value = max(starts[i] - profile.effective_arrivals()[i], 0.0)

    if cross_check and max(len(b) for b in profile.tie_blocks()) <= cap:
        enumerated, _ = enumerated_expectations(i, profile, cap)
        if abs(enumerated - value) > CROSS_CHECK_TOLERANCE:
            logger.error(
                "[QUEUE] Analytic expectation disagrees with enumeration",
                context={"player": i, "analytic": value, "enumerated": enumerated},
            )
            raise InvariantViolationException(
                "Expected waiting cross-check failed",
                {"player": i, "analytic": value, "enumerated": enumerated},
            )
    return value


def expected_service_order(i: int, profile: StrategyProfile) -> float:
    """1-based expected position; a block of size m starting at q gives q + 1 + (m - 1) / 2."""
    profile.owner.check_player(i)
    start, size = _block_position(i, profile)
    return start + 1 + (size - 1) / 2.0


def expected_service_time(i: int, profile: StrategyProfile) -> float:
    """Arrival plus expected waiting; smaller is strictly preferred."""
    profile.owner.check_player(i)
    return profile.effective_arrivals()[i] + expected_waiting(i, profile)


def queue_outcome(
    profile: StrategyProfile,
    order: Optional[ServiceOrder] = None,
    cross_check_cap: Optional[int] = None,
) -> QueueOutcome:
    """
    Per-player statistics; realized waiting uses the canonical order unless one is given.

    With cross_check_cap set, every expected waiting is also recomputed by
    enumeration when all tie blocks fit under the cap.
    """
    order = order or profile.canonical_order()
    effective = profile.effective_arrivals()
    starts = expected_start_times(profile.arrivals, profile.gamma, profile.t0, profile.tie_tolerance)

    if cross_check_cap is not None:
        for i in range(profile.n):
            expected_waiting(i, profile, cross_check=True, cap=cross_check_cap)

    waiting = [waiting_time(i, order, profile) for i in range(profile.n)]
    expected_wait = [max(starts[i] - effective[i], 0.0) for i in range(profile.n)]
    expected_time = [effective[i] + expected_wait[i] for i in range(profile.n)]
    return QueueOutcome(
        waiting=waiting,
        expected_waiting=expected_wait,
        expected_order=[expected_service_order(i, profile) for i in range(profile.n)],
        expected_service_time=expected_time,
        completion=[t + profile.gamma for t in expected_time],
    )
