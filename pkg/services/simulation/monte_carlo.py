"""
Monte Carlo estimates of expected service time under a common prior.

Randomness: the root seed spawns one child SeedSequence per fixed-size batch,
so results do not depend on how batches are scheduled. Estimates that are
compared (truthful against deviated, grid point against grid point) reuse
the same draws.
"""
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core import constants
from core.exceptions import SimulationException
from core.logger import get_logger
from models.simulation import (
    BestResponseScan,
    DeviationCell,
    McEstimate,
    PriorSpec,
    ScanRow,
    StrategyFunction,
)
from services.queue.batch import batch_expected_service_times
from services.simulation.priors import build_prior, sample_type_matrix

logger = get_logger(__name__)

BatchEvaluator = Callable[[np.ndarray], np.ndarray]


def _batch_sizes(samples: int) -> List[int]:
    full, rest = divmod(samples, constants.MC_BATCH_SIZE)
    return [constants.MC_BATCH_SIZE] * full + ([rest] if rest else [])


def _estimate(values: np.ndarray, samples: int, seed: int) -> McEstimate:
    mean = math.fsum(values.tolist()) / samples
    if samples > 1:
        half_width = constants.CONFIDENCE_Z_95 * float(np.std(values, ddof=1)) / math.sqrt(samples)
    else:
        half_width = 0.0
    return McEstimate(mean=mean, half_width_95=half_width, samples=samples, seed=seed)


def _run_batches(prior: PriorSpec, samples: int, seed: int, evaluator: BatchEvaluator) -> np.ndarray:
    """Draw types batch by batch and collect the evaluator's per-sample values."""
    if samples < 1:
        raise SimulationException("samples must be at least 1", {"samples": samples})

    sizes = _batch_sizes(samples)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    values = []
    for size, child in zip(sizes, children):
        types = sample_type_matrix(prior, size, child)
        values.append(evaluator(types))
    return np.concatenate(values)


def _check_player(i: int, prior: PriorSpec) -> None:
    if not 0 <= i < prior.n:
        raise SimulationException("Player index out of range", {"player": i, "n": prior.n})


def _check_gamma(gamma: float) -> None:
    if gamma < 0:
        raise SimulationException("gamma must be nonnegative", {"gamma": gamma})


def _service_times(
    i: int,
    types: np.ndarray,
    arrivals: np.ndarray,
    gamma: float,
    eps_tie: float,
) -> np.ndarray:
    expected = batch_expected_service_times(arrivals, gamma, types.min(axis=1), eps_tie)
    return expected[:, i]


def _arrivals(types: np.ndarray, strategies: Sequence[StrategyFunction]) -> np.ndarray:
    return np.column_stack([strategy.apply(types[:, j]) for j, strategy in enumerate(strategies)])


def mc_expected_service_time(
    i: int,
    strategies: Sequence[StrategyFunction],
    prior: PriorSpec,
    samples: int = constants.DEFAULT_SAMPLES,
    seed: int = constants.DEFAULT_SEED,
    gamma: float = 0.1,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> McEstimate:
    """
    Expected service time of player i when every player follows its strategy.

    Raises:
        SimulationException: zero samples, wrong strategy count, bad player index
    """
    _check_player(i, prior)
    _check_gamma(gamma)
    if len(strategies) != prior.n:
        raise SimulationException(
            "one strategy per player is required", {"n": prior.n, "strategies": len(strategies)}
        )

    def evaluate(types: np.ndarray) -> np.ndarray:
        return _service_times(i, types, _arrivals(types, strategies), gamma, eps_tie)

    return _estimate(_run_batches(prior, samples, seed, evaluate), samples, seed)


def deviation_gain(
    i: int,
    shift: float,
    window: Tuple[float, float],
    prior: PriorSpec,
    samples: int = constants.DEFAULT_SAMPLES,
    seed: int = constants.DEFAULT_SEED,
    gamma: float = 0.1,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> McEstimate:
    """
    Truthful minus deviated expected service time of player i, paired per draw.

    Player i delays by `shift` whenever its type lies in `window`; everyone
    else stays truthful. A non-positive gain means the delay does not pay.

    Raises:
        SimulationException: negative shift or a window missing the support
    """
    _check_player(i, prior)
    _check_gamma(gamma)
    if shift < 0:
        raise SimulationException("shift must be nonnegative", {"shift": shift})
    a, b = window
    if b < a or b < prior.low or a > prior.high:
        raise SimulationException("deviation window is empty", {"window": window})

    truthful = [StrategyFunction.truthful()] * prior.n
    deviated = list(truthful)
    deviated[i] = StrategyFunction.shifted(shift, (a, b))

    def evaluate(types: np.ndarray) -> np.ndarray:
        base = _service_times(i, types, _arrivals(types, truthful), gamma, eps_tie)
        moved = _service_times(i, types, _arrivals(types, deviated), gamma, eps_tie)
        return base - moved

    return _estimate(_run_batches(prior, samples, seed, evaluate), samples, seed)


def best_response_scan(
    i: int,
    own_type: float,
    grid: Sequence[float],
    prior: PriorSpec,
    samples: int = constants.DEFAULT_SAMPLES,
    seed: int = constants.DEFAULT_SEED,
    gamma: float = 0.1,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> BestResponseScan:
    """
    Estimated expected service time of player i at each candidate arrival.

    Opponents are truthful; player i's own type is fixed. Every grid point
    sees the same opponent draws, and the earliest minimizer wins ties.

    Raises:
        SimulationException: empty grid or a grid point before own_type
    """
    _check_player(i, prior)
    _check_gamma(gamma)
    if not grid:
        raise SimulationException("grid must not be empty")
    early = [g for g in grid if g < own_type]
    if early:
        raise SimulationException("grid points precede own type", {"own_type": own_type, "point": early[0]})

    rows = []
    for candidate in grid:

        def evaluate(types: np.ndarray, candidate=candidate) -> np.ndarray:
            types = types.copy()
            types[:, i] = own_type
            arrivals = types.copy()
            arrivals[:, i] = candidate
            return _service_times(i, types, arrivals, gamma, eps_tie)

        estimate = _estimate(_run_batches(prior, samples, seed, evaluate), samples, seed)
        rows.append(ScanRow(arrival=candidate, estimate=estimate))

    best = min(rows, key=lambda row: row.estimate.mean)
    logger.info(
        "[SIM] Best-response scan finished",
        context={"player": i + 1, "own_type": own_type, "best": best.arrival, "points": len(rows)},
    )
    return BestResponseScan(player=i, own_type=own_type, best_arrival=best.arrival, rows=rows)


def deviation_table(
    players: Iterable[int] = constants.DEFAULT_SIM_PLAYERS,
    gammas: Iterable[float] = constants.DEFAULT_SIM_GAMMAS,
    shifts: Iterable[float] = constants.DEFAULT_SIM_SHIFTS,
    low: float = 0.0,
    high: float = 1.0,
    samples: int = constants.DEFAULT_SAMPLES,
    seed: int = constants.DEFAULT_SEED,
    window: Optional[Tuple[float, float]] = None,
    eps_tie: float = constants.DEFAULT_EPS_TIE,
) -> List[DeviationCell]:
    """Deviation gain of player 1 on every (n, gamma, shift) cell under a uniform prior."""
    window = window or (low, high)
    cells = []
    for n in players:
        prior = build_prior("uniform", low, high, n)
        for gamma in gammas:
            for shift in shifts:
                gain = deviation_gain(0, shift, window, prior, samples, seed, gamma, eps_tie)
                cells.append(DeviationCell(n=n, gamma=gamma, shift=shift, window=window, gain=gain))
                logger.debug(
                    "[SIM] Deviation cell",
                    context={"n": n, "gamma": gamma, "shift": shift, "gain": gain.mean, "hw": gain.half_width_95},
                )
    return cells
