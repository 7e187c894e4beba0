"""Python bindings for the qtrack simulator."""

from ._core import (
    Error,
    academic_value_grad,
    edge_list_lambda2,
    exponential_edge_list,
    quantize_log,
    quantize_uniform,
    run,
    step_size_bound,
    validate,
)

__all__ = [
    "Error",
    "academic_value_grad",
    "edge_list_lambda2",
    "exponential_edge_list",
    "quantize_log",
    "quantize_uniform",
    "run",
    "step_size_bound",
    "validate",
]
