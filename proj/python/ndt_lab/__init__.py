"""NDT bounds, one-shot schedules and alignment schemes for cache-aided relay networks."""

from ._ndt_lab import (
    SCHEMA,
    NdtError,
    achievable_dof,
    classify_region,
    cli,
    delta_man,
    delta_os,
    empirical_gap,
    envelope,
    gap_sweep,
    lower_bound,
    optimal_tradeoff_closed,
    simulate,
    subpacketize,
)

__all__ = [
    "SCHEMA",
    "NdtError",
    "achievable_dof",
    "classify_region",
    "cli",
    "delta_man",
    "delta_os",
    "empirical_gap",
    "envelope",
    "gap_sweep",
    "lower_bound",
    "optimal_tradeoff_closed",
    "simulate",
    "subpacketize",
]
