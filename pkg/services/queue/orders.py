"""
Arrival-consistent service orders.
Simultaneous arrivals are served in uniformly random order, so the feasible
orders are the permutations inside each tie block.
"""
import itertools
import math
from typing import List

from core import constants
from core.exceptions import EnumerationCapException, OrderConsistencyException
from models.game import ServiceOrder, StrategyProfile


def enumerate_orders(
    profile: StrategyProfile,
    cap: int = constants.DEFAULT_ENUMERATION_CAP,
) -> List[ServiceOrder]:
    """
    All arrival-consistent service orders of a profile.

    The count is the product of factorials of the tie-block sizes.

    Raises:
        EnumerationCapException: a tie block is larger than cap
    """
    blocks = profile.tie_blocks()
    largest = max(len(b) for b in blocks)
    if largest > cap:
        raise EnumerationCapException(
            "Tie block too large to enumerate; use analytic expectations",
            {"block_size": largest, "cap": cap, "orders": math.factorial(largest)},
        )

    per_block = [list(itertools.permutations(block)) for block in blocks]
    orders = []
    for combo in itertools.product(*per_block):
        orders.append(ServiceOrder(order=[p for block in combo for p in block]))
    return orders


def check_order_consistency(order: ServiceOrder, profile: StrategyProfile) -> None:
    """
    Reject an order that serves a later arrival before an earlier one.

    Raises:
        OrderConsistencyException: details carry the violating 0-based positions
    """
    if len(order.order) != profile.n:
        raise OrderConsistencyException(
            "Order length does not match the profile",
            {"order_length": len(order.order), "n": profile.n},
        )

    effective = profile.effective_arrivals()
    for a in range(profile.n - 1):
        first, second = order.order[a], order.order[a + 1]
        if effective[first] > effective[second]:
            raise OrderConsistencyException(
                "Service order contradicts arrivals",
                {"positions": (a, a + 1), "players": (first, second)},
            )
