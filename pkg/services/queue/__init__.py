"""
FCFS single-server queue mechanics.
Service orders, closed-form waiting, the completion-chain oracle,
tie-block expectations and a vectorized batch kernel.
"""
from services.queue.orders import check_order_consistency, enumerate_orders
from services.queue.waiting import (
    completion_times,
    enumerated_expectations,
    expected_service_order,
    expected_service_time,
    expected_start_times,
    expected_waiting,
    queue_outcome,
    waiting_time,
)
from services.queue.batch import batch_expected_service_times

__all__ = [
    "check_order_consistency",
    "enumerate_orders",
    "completion_times",
    "enumerated_expectations",
    "expected_service_order",
    "expected_service_time",
    "expected_start_times",
    "expected_waiting",
    "queue_outcome",
    "waiting_time",
    "batch_expected_service_times",
]
