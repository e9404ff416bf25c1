"""Multi-antenna deployment on high-speed trains: capacity, service amount and outage analysis."""

__version__ = "0.1.0"

from .channel import LinkState, capacity_at, distance_at, link_state_at, snr_sum  # noqa: E402
from .deployment import (  # noqa: E402
    Deployment,
    Strategy,
    equidistant_offsets,
    explicit_offsets,
    fixed_interval_offsets,
    n_max,
)
from .errors import (  # noqa: E402
    ConstraintViolation,
    ConvergenceError,
    EmptySweepError,
    HSTLabError,
    InvalidCountError,
    InvalidParameterError,
    RegimeError,
    SpacingViolationError,
)
from .metrics import CapacityTrace, OutageReport, outage_report, sample_trace, service_amount  # noqa: E402
from .scenario import (  # noqa: E402
    Scenario,
    calibrate_from_max_snr,
    calibrate_from_physics,
    observation_window,
    scenario_from_dict,
    table1_scenario,
)

__all__ = [
    "CapacityTrace",
    "ConstraintViolation",
    "ConvergenceError",
    "Deployment",
    "EmptySweepError",
    "HSTLabError",
    "InvalidCountError",
    "InvalidParameterError",
    "LinkState",
    "OutageReport",
    "RegimeError",
    "Scenario",
    "SpacingViolationError",
    "Strategy",
    "calibrate_from_max_snr",
    "calibrate_from_physics",
    "capacity_at",
    "distance_at",
    "equidistant_offsets",
    "explicit_offsets",
    "fixed_interval_offsets",
    "link_state_at",
    "n_max",
    "observation_window",
    "outage_report",
    "sample_trace",
    "scenario_from_dict",
    "service_amount",
    "snr_sum",
    "table1_scenario",
]
