import math
from typing import List

from core import constants
from core.logger import get_logger
from models.equilibrium import NashVerdict
from models.game import StrategyProfile, TypeProfile
from services.queue.waiting import expected_start_times

logger = get_logger(__name__)


def _candidate_arrivals(
    i: int,
    arrivals: List[float],
    t_i: float,
    gamma: float,
    t0: float,
    eps_probe: float,
) -> List[float]:
    """
    Deviations worth probing for player i.

    Expected service time is piecewise linear in the player's own arrival with
    kinks only at other arrivals and at completions of the others' chain, so
    breakpoints, probes around them and midpoints cover every piece.
    """
    others = sorted(s for j, s in enumerate(arrivals) if j != i)

    points = {t_i}
    for s in others:
        points.update((s, s - eps_probe, s + eps_probe))

    completion = t0
    points.add(completion)
    for s in others:
        completion = max(s, completion) + gamma
        points.add(completion)

    breakpoints = sorted(p for p in points if math.isfinite(p))
    midpoints = [(a + b) / 2.0 for a, b in zip(breakpoints, breakpoints[1:])]
    return sorted(c for c in set(breakpoints).union(midpoints) if c >= t_i)


def is_nash(
    profile: StrategyProfile,
    types: TypeProfile,
    eps_probe: float = constants.DEFAULT_EPS_PROBE,
) -> NashVerdict:
    """
    Brute-force check that no player gains by moving its own arrival.

    A deviation counts only when it improves the expected service time by
    more than the tie tolerance. The witness is the best deviation of the
    first player that has one, preferring the latest arrival among equals.

    Raises:
        ProfileException: the profile is infeasible for these types
    """
    profile = StrategyProfile.build(profile.arrivals, types, profile.tie_tolerance)
    arrivals = list(profile.arrivals)
    tolerance = profile.tie_tolerance
    current_times = expected_start_times(arrivals, types.gamma, types.t0, tolerance)

    for i in range(types.n):
        current = current_times[i]
        best_arrival, best_time = None, current
        for candidate in _candidate_arrivals(i, arrivals, types.types[i], types.gamma, types.t0, eps_probe):
            trial = list(arrivals)
            trial[i] = candidate
            value = expected_start_times(trial, types.gamma, types.t0, tolerance)[i]
            if best_arrival is None or value < best_time or (value == best_time and candidate > best_arrival):
                best_arrival, best_time = candidate, value

        if best_arrival is not None and current - best_time > tolerance:
            logger.debug(
                "[EQUILIBRIUM] Profitable deviation found",
                context={"player": i, "deviation": best_arrival, "from": current, "to": best_time},
            )
            return NashVerdict(
                is_equilibrium=False,
                player=i,
                deviation=best_arrival,
                current_service_time=current,
                improved_service_time=best_time,
            )

    return NashVerdict(is_equilibrium=True)
