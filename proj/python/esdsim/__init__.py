"""Damped-pair concurrence protocol simulator."""

from ._core import (
    InitialState,
    SimError,
    analytic_rho_environment,
    analytic_rho_system,
    closed_concurrence_environment,
    closed_concurrence_system,
    concurrence_xstate,
    esb_time,
    esd_time,
    run_series,
    transpile_roundtrip_ok,
    witness_probability,
)
from ._core import __version__

__all__ = [
    "InitialState",
    "SimError",
    "analytic_rho_environment",
    "analytic_rho_system",
    "closed_concurrence_environment",
    "closed_concurrence_system",
    "concurrence_xstate",
    "esb_time",
    "esd_time",
    "run_series",
    "transpile_roundtrip_ok",
    "witness_probability",
    "__version__",
]
