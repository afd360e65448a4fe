"""Deterministic discrete-event simulator for global-snapshot algorithms.

The heavy lifting lives in the compiled ``_core`` extension; this package is a
thin, stable import surface over it. Configs are plain dicts using the same
keys as the config-file format (``hosts``, ``messages``, ``algorithm``,
``latency``, ``seed``, ...).
"""

from ._core import (
    ConfigError,
    ConsistencyViolationError,
    EventLimitExceededError,
    InvalidParametersError,
    IoError,
    SimError,
    run_experiment,
    run_sweep,
    sample_latency,
    vc_compare,
    vc_merge,
    vc_tick,
    verify_trace,
)

__all__ = [
    "ConfigError",
    "ConsistencyViolationError",
    "EventLimitExceededError",
    "InvalidParametersError",
    "IoError",
    "SimError",
    "run_experiment",
    "run_sweep",
    "sample_latency",
    "vc_compare",
    "vc_merge",
    "vc_tick",
    "verify_trace",
]
