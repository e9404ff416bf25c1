"""Mobile service amount and outage time ratio over one serving window."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import capacity_at, distance_at
from .deployment import as_offsets
from .errors import InvalidParameterError
from .numerics import adaptive_simpson, bisect_brackets
from .scenario import observation_window

DEFAULT_REL_TOL = 1e-8
DEFAULT_REFINE_TOL = 1e-7
MAX_DOUBLINGS = 24


@dataclass(frozen=True)
class CapacityTrace:
    times: np.ndarray
    capacities: np.ndarray
    sample_step: float
    offsets: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.times)


@dataclass(frozen=True)
class OutageReport:
    threshold: float
    intervals: list[tuple[float, float]]
    otr: float
    duration: float

    @property
    def outage_time(self) -> float:
        return sum(b - a for a, b in self.intervals)


def sample_trace(scenario, deployment, sample_step: float) -> CapacityTrace:
    """Capacity on a uniform grid spanning the window, both endpoints included.

    The grid has ``ceil(T / sample_step)`` intervals, so the realised step may
    be slightly smaller than requested; it is stored in ``sample_step``.
    """
    t0, t1 = observation_window(scenario)
    total = t1 - t0
    if not (math.isfinite(sample_step) and sample_step > 0.0):
        raise InvalidParameterError(f"sample_step must be > 0, got {sample_step!r}")
    if sample_step > total / 10.0 * (1.0 + 1e-12):
        raise InvalidParameterError(f"sample_step must be <= T/10 = {total / 10.0:g} s")
    n = max(10, math.ceil(total / sample_step - 1e-9))
    times = np.linspace(t0, t1, n + 1)
    offsets = as_offsets(deployment)
    return CapacityTrace(times, capacity_at(scenario, offsets, times), total / n, offsets)


def service_amount(scenario, deployment, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Time integral of capacity over the window, in bits/Hz (bit*s/s/Hz)."""
    if not (0.0 < rel_tol <= 1e-3):
        raise InvalidParameterError(f"rel_tol must lie in (0, 1e-3], got {rel_tol!r}")
    offsets = as_offsets(deployment)
    t0, t1 = observation_window(scenario)
    value, _ = adaptive_simpson(
        lambda t: capacity_at(scenario, offsets, t), t0, t1, rel_tol=rel_tol, max_doublings=MAX_DOUBLINGS
    )
    return value


def outage_report(
    scenario,
    deployment,
    c_th: float | None = None,
    scan_step: float | None = None,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> OutageReport:
    """Locate every sub-threshold stretch of ``C(t)`` inside the window.

    ``C(t) - c_th`` is sampled every ``scan_step`` (default ``T/12000``); each
    sign change is refined by bisection to ``refine_tol``. Stretches that run
    into a window edge are clipped there. A touch of the threshold without a
    sign change has zero measure and is ignored.
    """
    c_th = scenario.c_th if c_th is None else float(c_th)
    t0, t1 = observation_window(scenario)
    total = t1 - t0
    if scan_step is None:
        scan_step = total / 12000.0
    if not (scan_step > 0.0 and scan_step <= total / 100.0 * (1.0 + 1e-12)):
        raise InvalidParameterError(f"scan_step must lie in (0, T/100 = {total / 100.0:g}] s")
    if not (refine_tol > 0.0 and refine_tol <= scan_step / 100.0 * (1.0 + 1e-12)):
        raise InvalidParameterError(f"refine_tol must lie in (0, scan_step/100 = {scan_step / 100.0:g}] s")

    offsets = as_offsets(deployment)

    def excess(t):
        return capacity_at(scenario, offsets, t) - c_th

    n = math.ceil(total / scan_step - 1e-9)
    grid = np.linspace(t0, t1, n + 1)
    below = excess(grid) < 0.0

    edges = np.flatnonzero(below[1:] != below[:-1])
    if edges.size:
        crossings = bisect_brackets(excess, grid[edges], grid[edges + 1], refine_tol)
    else:
        crossings = np.empty(0)

    intervals = []
    start = t0 if below[0] else None
    for k, tc in zip(edges, crossings):
        if below[k + 1]:
            start = float(tc)
        else:
            intervals.append((start, float(tc)))
            start = None
    if start is not None:
        intervals.append((start, t1))
    intervals = [(a, b) for a, b in intervals if b > a]

    otr = sum(b - a for a, b in intervals) / total
    return OutageReport(c_th, intervals, min(1.0, max(0.0, otr)), total)


# -- CSV interfaces ----------------------------------------------------------


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_trace_csv(path, trace: CapacityTrace, scenario=None, include_snrs=False, footer=()):
    """``t_s,capacity_bps_hz[,snr_1..snr_N]``; one row per sample, 17 significant digits."""
    header = ["t_s", "capacity_bps_hz"]
    if include_snrs:
        if scenario is None or trace.offsets is None:
            raise InvalidParameterError("per-antenna SNR columns need the scenario and trace offsets")
        header += [f"snr_{k + 1}" for k in range(trace.offsets.size)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, c in zip(trace.times, trace.capacities):
            row = [_fmt(t), _fmt(c)]
            if include_snrs:
                d = distance_at(scenario, trace.offsets, t)
                row += [_fmt(s) for s in scenario.snr0 / (d * d)]
            w.writerow(row)
        for line in footer:
            fh.write(f"# {line}\n")


def write_outage_csv(path, report: OutageReport, footer=()):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_minus_s", "t_plus_s"])
        for a, b in report.intervals:
            w.writerow([_fmt(a), _fmt(b)])
        fh.write(f"# otr={_fmt(report.otr)}\n")
        for line in footer:
            fh.write(f"# {line}\n")
