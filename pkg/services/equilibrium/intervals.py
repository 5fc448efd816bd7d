"""
Nash sets of the complete-information game.

Player i may arrive anywhere in [t_i, min(theta_i, t_{i+1})] without changing
its service start: theta_i is when the players ahead would finish. Ties with
a neighbouring type, or a predecessor chain that ends before t_i, collapse
the set to {t_i}.
"""
from typing import List, Optional, Sequence, Tuple

from core import constants
from core.exceptions import ProfileException
from models.equilibrium import EquilibriumInterval
from models.game import StrategyProfile, TypeProfile


def theta(i: int, prior_choices: Sequence[float], gamma: float, t0: float) -> float:
    """
    Service termination of the players ahead of i.

    max(t0 + i*gamma, max_k s_k + (i - k)*gamma) over the 0-based earlier
    players; for i = 0 the boundary t0 itself.

    Raises:
        ProfileException: prior_choices does not hold exactly i arrivals
    """
    if len(prior_choices) != i:
        raise ProfileException(
            "theta needs the choices of every earlier player",
            {"player": i, "prior_choices": len(prior_choices)},
        )
    value = t0 + i * gamma
    for k, s_k in enumerate(prior_choices):
        value = max(value, s_k + (i - k) * gamma)
    return value


def equilibrium_interval(
    i: int,
    types: TypeProfile,
    prior_choices: Sequence[float],
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> EquilibriumInterval:
    """Nash set of player i given the earlier players' equilibrium choices."""
    types.check_player(i)
    return _interval(i, types, theta(i, prior_choices, types.gamma, types.t0), eps_tie)


def _interval(i: int, types: TypeProfile, boundary: float, eps_tie: float) -> EquilibriumInterval:
    t_i = types.types[i]
    t_next = types.next_type(i)

    tied_before = i > 0 and t_i - types.types[i - 1] <= eps_tie
    tied_after = t_next - t_i <= eps_tie
    if tied_before or tied_after or boundary <= t_i:
        return EquilibriumInterval(
            player=i, lower=t_i, upper=t_i, upper_closed=True, is_singleton=True, theta=boundary
        )

    return EquilibriumInterval(
        player=i,
        lower=t_i,
        upper=min(boundary, t_next),
        upper_closed=boundary < t_next,
        is_singleton=False,
        theta=boundary,
    )


def sftw_profile(types: TypeProfile) -> StrategyProfile:
    """Everyone arrives at its earliest feasible time."""
    return StrategyProfile.build(list(types.types), types)


def _green_recursion(
    types: TypeProfile,
    eps_green: float,
    eps_tie: float,
) -> Tuple[List[EquilibriumInterval], List[float]]:
    intervals: List[EquilibriumInterval] = []
    choices: List[float] = []
    boundary = types.t0
    for i in range(types.n):
        if i > 0:
            # theta_i = max(theta_{i-1}, s_{i-1}) + gamma
            boundary = max(boundary, choices[-1]) + types.gamma
        interval = _interval(i, types, boundary, eps_tie)
        intervals.append(interval)
        choices.append(interval.supremum_choice(eps_green))
    return intervals, choices


def green_profile(
    types: TypeProfile,
    epsilon_green: float = constants.DEFAULT_EPS_GREEN,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> StrategyProfile:
    """
    Latest arrival inside every Nash set, chosen recursively.

    An open upper end t_{i+1} is replaced by t_{i+1} - epsilon_green.
    """
    if not epsilon_green > 0:
        raise ProfileException("epsilon_green must be positive", {"epsilon_green": epsilon_green})
    _, choices = _green_recursion(types, epsilon_green, eps_tie)
    return StrategyProfile.build(choices, types, eps_tie)


def equilibrium_intervals(
    types: TypeProfile,
    choices: Optional[Sequence[float]] = None,
    epsilon_green: float = constants.DEFAULT_EPS_GREEN,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> List[EquilibriumInterval]:
    """
    Nash set of every player along a chain of choices.

    Without choices the green selection drives the recursion.
    """
    if choices is None:
        intervals, _ = _green_recursion(types, epsilon_green, eps_tie)
        return intervals
    if len(choices) != types.n:
        raise ProfileException("expected one choice per player", {"n": types.n, "choices": len(choices)})
    return [equilibrium_interval(i, types, list(choices[:i]), eps_tie) for i in range(types.n)]
