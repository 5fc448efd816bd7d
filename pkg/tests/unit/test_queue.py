"""
Unit tests for the FCFS queue core.

Tests cover:
- Completion chain and closed-form waiting
- Arrival-consistent order enumeration
- Expected waiting/order over random tie-breaking
- Batch kernel against the list implementation
- Order-independence and monotonicity properties of the expectations
"""

import numpy as np
import pytest
import simpy

from core.exceptions import EnumerationCapException, InvariantViolationException, OrderConsistencyException
from models.game import ServiceOrder, StrategyProfile, TypeProfile
import services.queue.waiting as waiting_module
from services.queue import (
    batch_expected_service_times,
    completion_times,
    enumerate_orders,
    enumerated_expectations,
    expected_service_order,
    expected_service_time,
    expected_start_times,
    expected_waiting,
    queue_outcome,
    waiting_time,
)


def _random_profile(rng, n_max=8, gamma_max=2.0):
    """Arrivals on a half-hour grid so tie blocks are common."""
    n = int(rng.integers(1, n_max + 1))
    arrivals = (rng.integers(0, 2 * n + 1, size=n) * 0.5).tolist()
    gamma = float(rng.uniform(0.1, gamma_max))
    owner = TypeProfile.from_types([min(arrivals)] * n, gamma)
    return StrategyProfile.build(arrivals, owner)


def _simulate_berth(order, profile):
    """Completion instants of a one-berth port fed the profile's arrivals in the given order."""
    env = simpy.Environment()
    berth = simpy.Resource(env, capacity=1)
    completions = []

    def backlog():
        with berth.request() as request:
            yield request
            yield env.timeout(profile.t0)

    def vessel(arrival):
        yield env.timeout(arrival)
        with berth.request() as request:
            yield request
            yield env.timeout(profile.gamma)
            completions.append(env.now)

    if profile.t0 > 0:
        env.process(backlog())
    effective = profile.effective_arrivals()
    for player in order.order:
        env.process(vessel(effective[player]))
    env.run()
    return completions


class TestCompletionTimes:
    """Test suite for the completion chain"""

    def test_single_vessel(self, make_profile):
        profile = make_profile([0.0], 1.0)
        assert completion_times(ServiceOrder(order=[0]), profile) == [1.0]

    def test_backlog_chain(self, make_profile):
        profile = make_profile([0.0, 0.5, 1.2], 1.0, t0=0.0)
        assert completion_times(ServiceOrder(order=[0, 1, 2]), profile) == pytest.approx([1.0, 2.0, 3.0])

    def test_idle_server(self, make_profile):
        profile = make_profile([0.0, 2.5], 1.0)
        assert completion_times(ServiceOrder(order=[0, 1]), profile) == pytest.approx([1.0, 3.5])

    def test_initial_backlog_delays_first_vessel(self, make_profile):
        profile = make_profile([0.0, 0.5], 1.0, t0=2.0)
        assert completion_times(ServiceOrder(order=[0, 1]), profile) == pytest.approx([3.0, 4.0])

    def test_inconsistent_order_rejected(self, make_profile):
        profile = make_profile([0.0, 1.0], 1.0)
        with pytest.raises(OrderConsistencyException) as exc_info:
            completion_times(ServiceOrder(order=[1, 0]), profile)
        assert exc_info.value.details["positions"] == (0, 1)

    def test_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            ServiceOrder(order=[0, 0, 1])


    def test_matches_event_driven_berth(self, rng):
        for _ in range(200):
            profile = _random_profile(rng)
            if rng.uniform() < 0.5:
                backlog = min(profile.arrivals) + float(rng.uniform(0.0, 3.0))
                owner = TypeProfile.from_types(profile.owner.types, profile.gamma, backlog)
                profile = StrategyProfile.build(profile.arrivals, owner)
            order = profile.canonical_order()
            assert _simulate_berth(order, profile) == pytest.approx(completion_times(order, profile), abs=1e-9)


class TestWaitingTime:
    """Test suite for closed-form waiting"""

    def test_first_position_never_waits(self, make_profile):
        profile = make_profile([0.0, 0.5, 1.2], 1.0)
        assert waiting_time(0, profile.canonical_order(), profile) == 0.0

    def test_third_vessel_waits_behind_chain(self, make_profile):
        profile = make_profile([0.0, 0.5, 1.2], 1.0)
        assert waiting_time(2, ServiceOrder(order=[0, 1, 2]), profile) == pytest.approx(0.8)

    def test_full_tie_last_served(self, make_profile):
        profile = make_profile([0.0, 0.0, 0.0], 1.0)
        assert waiting_time(2, ServiceOrder(order=[0, 1, 2]), profile) == pytest.approx(2.0)

    def test_order_within_tie_block_is_consistent(self, make_profile):
        profile = make_profile([0.0, 0.0, 0.0], 1.0)
        assert waiting_time(0, ServiceOrder(order=[2, 1, 0]), profile) == pytest.approx(2.0)

    def test_matches_completion_chain(self, rng):
        """Closed-form waiting equals the discrete-event start minus arrival."""
        for _ in range(500):
            profile = _random_profile(rng)
            order = profile.canonical_order()
            completions = completion_times(order, profile)
            effective = profile.effective_arrivals()
            for position, player in enumerate(order.order):
                chain_wait = completions[position] - profile.gamma - effective[player]
                assert waiting_time(player, order, profile) == pytest.approx(chain_wait, abs=1e-9)

    @pytest.mark.slow
    def test_matches_completion_chain_every_order(self):
        rng = np.random.default_rng(2024)
        for _ in range(10_000):
            profile = _random_profile(rng)
            blocks = profile.tie_blocks()
            order = ServiceOrder(order=[p for block in blocks for p in rng.permutation(block).tolist()])
            completions = completion_times(order, profile)
            effective = profile.effective_arrivals()
            for position, player in enumerate(order.order):
                chain_wait = completions[position] - profile.gamma - effective[player]
                assert abs(waiting_time(player, order, profile) - chain_wait) <= 1e-9


class TestEnumerateOrders:
    """Test suite for arrival-consistent order enumeration"""

    @pytest.mark.parametrize(
        "arrivals,expected",
        [
            ([0.0, 0.5, 1.2], 1),
            ([0.0, 0.0, 1.0], 2),
            ([0.0, 0.0, 0.0], 6),
            ([0.0, 0.0, 1.0, 1.0], 4),
        ],
    )
    def test_counts(self, make_profile, arrivals, expected):
        assert len(enumerate_orders(make_profile(arrivals, 1.0))) == expected

    def test_cap_exceeded(self, make_profile):
        profile = make_profile([0.0] * 4, 1.0)
        with pytest.raises(EnumerationCapException) as exc_info:
            enumerate_orders(profile, cap=3)
        assert exc_info.value.details["block_size"] == 4


    def test_every_order_shares_completions_by_position(self, rng):
        for _ in range(200):
            profile = _random_profile(rng, n_max=5)
            orders = enumerate_orders(profile)
            reference = completion_times(orders[0], profile)
            for order in orders[1:]:
                assert completion_times(order, profile) == pytest.approx(reference, abs=1e-12)


class TestExpectations:
    """Test suite for expectations over random tie-breaking"""

    def test_single_player(self, make_profile):
        profile = make_profile([0.0], 1.0)
        assert expected_waiting(0, profile) == 0.0
        assert expected_service_order(0, profile) == 1.0
        assert expected_service_time(0, profile) == 0.0

    def test_two_tied_players(self, make_profile):
        profile = make_profile([0.0, 0.0], 0.5)
        for i in range(2):
            assert expected_waiting(i, profile) == pytest.approx(0.25)
            assert expected_service_order(i, profile) == pytest.approx(1.5)
            assert expected_service_time(i, profile) == pytest.approx(0.25)

    def test_distinct_arrivals(self, make_profile):
        profile = make_profile([0.0, 0.5, 1.2], 1.0)
        assert expected_waiting(1, profile) == pytest.approx(0.5)
        assert expected_service_time(2, profile) == pytest.approx(2.0)
        assert expected_service_order(1, make_profile([0.0, 0.5], 1.0)) == 2.0

    def test_near_ties_snap_to_block_anchor(self, make_profile):
        profile = make_profile([0.0, 1e-12], 1.0)
        assert profile.effective_arrivals() == [0.0, 0.0]
        assert expected_service_order(1, profile) == pytest.approx(1.5)

    def test_cross_check_passes(self, make_profile):
        profile = make_profile([0.0, 0.0, 0.5, 0.5, 0.5, 3.0], 1.0)
        for i in range(profile.n):
            assert expected_waiting(i, profile, cross_check=True) >= 0.0

    def test_cross_check_failure_raises(self, make_profile, mocker):
        profile = make_profile([0.0, 0.0], 1.0)
        mocker.patch("services.queue.waiting.enumerated_expectations", return_value=(99.0, 1.5))
        with pytest.raises(InvariantViolationException):
            expected_waiting(0, profile, cross_check=True)

    def test_analytic_equals_enumeration(self, rng):
        for _ in range(200):
            profile = _random_profile(rng, n_max=5)
            for i in range(profile.n):
                wait, order = enumerated_expectations(i, profile)
                assert expected_waiting(i, profile) == pytest.approx(wait, abs=1e-9)
                assert expected_service_order(i, profile) == pytest.approx(order, abs=1e-9)

    @pytest.mark.slow
    def test_analytic_equals_enumeration_large_blocks(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 8))
            arrivals = (rng.integers(0, 2, size=n) * 0.5).tolist()
            owner = TypeProfile.from_types([min(arrivals)] * n, float(rng.uniform(0.1, 2.0)))
            profile = StrategyProfile.build(arrivals, owner)
            for i in range(n):
                wait, order = enumerated_expectations(i, profile)
                assert abs(expected_waiting(i, profile) - wait) <= 1e-9
                assert abs(expected_service_order(i, profile) - order) <= 1e-9

    def test_queue_outcome(self, make_profile):
        outcome = queue_outcome(make_profile([0.0, 0.5, 1.2], 1.0))
        assert outcome.waiting == pytest.approx([0.0, 0.5, 0.8])
        assert outcome.expected_order == [1.0, 2.0, 3.0]
        assert outcome.expected_service_time == pytest.approx([0.0, 1.0, 2.0])
        assert outcome.completion == pytest.approx([1.0, 2.0, 3.0])


    def test_queue_outcome_cross_check(self, make_profile, mocker):
        spy = mocker.spy(waiting_module, "enumerated_expectations")
        queue_outcome(make_profile([0.0, 0.0, 0.0, 1.0], 1.0), cross_check_cap=3)
        assert spy.call_count == 4

    def test_queue_outcome_cross_check_skips_blocks_over_cap(self, make_profile, mocker):
        spy = mocker.spy(waiting_module, "enumerated_expectations")
        queue_outcome(make_profile([0.0, 0.0, 0.0, 1.0], 1.0), cross_check_cap=2)
        assert spy.call_count == 0

    def test_queue_outcome_cross_check_failure(self, make_profile, mocker):
        mocker.patch("services.queue.waiting.enumerated_expectations", return_value=(99.0, 1.5))
        with pytest.raises(InvariantViolationException):
            queue_outcome(make_profile([0.0, 0.0], 1.0), cross_check_cap=2)

    def test_earlier_expected_order_means_earlier_service(self, rng):
        for _ in range(300):
            profile = _random_profile(rng, n_max=6)
            orders = [expected_service_order(i, profile) for i in range(profile.n)]
            times = [expected_service_time(i, profile) for i in range(profile.n)]
            for i in range(profile.n):
                for j in range(profile.n):
                    if orders[i] < orders[j]:
                        assert times[i] < times[j], (profile.arrivals, profile.gamma, i, j)

    def test_service_time_nondecreasing_in_own_arrival(self, rng):
        for _ in range(200):
            profile = _random_profile(rng, n_max=6)
            i = int(rng.integers(0, profile.n))
            t_i = profile.owner.types[i]
            others = [s for j, s in enumerate(profile.arrivals) if j != i]
            points = sorted({t_i, t_i + 2.0 * profile.n, *others, *(s + 0.25 for s in others)})
            points = [x for x in points if x >= t_i]
            grid = sorted(set(points).union((a + b) / 2.0 for a, b in zip(points, points[1:])))
            values = [expected_service_time(i, profile.with_arrival(i, x)) for x in grid]
            for earlier, later in zip(values, values[1:]):
                assert later >= earlier - 1e-9, (profile.arrivals, profile.gamma, i, grid, values)


class TestBatchKernel:
    """Test suite for the vectorised expectation kernel"""

    def test_matches_list_implementation(self, rng):
        arrivals = rng.integers(0, 6, size=(300, 5)) * 0.5
        gamma = 0.75
        batch = batch_expected_service_times(arrivals, gamma)
        for row, expected in zip(arrivals, batch):
            starts = expected_start_times(row.tolist(), gamma, float(row.min()))
            assert expected.tolist() == pytest.approx(starts, abs=1e-12)

    def test_explicit_boundary(self):
        result = batch_expected_service_times(np.array([[0.0, 0.5]]), 1.0, t0=np.array([2.0]))
        np.testing.assert_allclose(result, [[2.0, 3.0]], atol=1e-12)

    def test_zero_gamma_means_no_waiting(self, rng):
        arrivals = rng.uniform(0, 1, size=(50, 3))
        assert np.allclose(batch_expected_service_times(arrivals, 0.0), arrivals)

    def test_tied_row(self):
        result = batch_expected_service_times(np.array([[0.0, 0.0]]), 0.5)
        np.testing.assert_allclose(result, [[0.25, 0.25]], atol=1e-12)

    def test_rejects_negative_gamma(self):
        from core.exceptions import SimulationException

        with pytest.raises(SimulationException):
            batch_expected_service_times(np.zeros((1, 2)), -1.0)
