"""Partition functions of cut potentials via finite-field point counts."""

from .count import (
    CountSample,
    count_polynomial,
    count_reps,
    count_samples,
    coha_coefficient,
    coha_coefficient_rational,
    default_primes,
    degree_bound,
    gauge_order,
    gauge_order_rational,
    partition_function,
    stack_count_series,
    zseries_w0,
)
from .cut import CutData, cut_reduce, default_cut

__all__ = [
    "CountSample",
    "CutData",
    "coha_coefficient",
    "coha_coefficient_rational",
    "count_polynomial",
    "count_reps",
    "count_samples",
    "cut_reduce",
    "default_cut",
    "default_primes",
    "degree_bound",
    "gauge_order",
    "gauge_order_rational",
    "partition_function",
    "stack_count_series",
    "zseries_w0",
]
