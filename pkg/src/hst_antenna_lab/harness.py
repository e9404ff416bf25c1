"""Parameter sweeps, figure presets and CSV emission."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .deployment import Deployment, Strategy
from .errors import EmptySweepError, HSTLabError, InvalidParameterError
from .metrics import DEFAULT_REFINE_TOL, DEFAULT_REL_TOL, outage_report, sample_trace, service_amount, write_trace_csv
from .scenario import table1_scenario

log = logging.getLogger(__name__)

VARIABLES = ("antenna_separation", "train_length", "antenna_count", "delta")
OUTPUTS = ("service", "otr", "trace")
SWEEP_STRATEGIES = (Strategy.EQUIDISTANT, Strategy.FIXED_INTERVAL)
FIGURE_IDS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")
TRACE_STEP = 1e-3


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable; the remaining parameters stay fixed.

    ``antenna_count`` and ``delta`` are the fixed N and delta when they are
    not the swept variable. ``indexing`` selects the fixed-interval layout
    (see :mod:`hst_antenna_lab.deployment`).
    """

    variable: str
    values: tuple
    strategies: tuple = SWEEP_STRATEGIES
    outputs: tuple = ("service", "otr")
    antenna_count: int = 2
    delta: float = 1.0
    c_th: float | None = None
    indexing: str = "verbatim"
    rel_tol: float = DEFAULT_REL_TOL
    refine_tol: float = DEFAULT_REFINE_TOL
    trace_step: float = TRACE_STEP

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise InvalidParameterError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        values = tuple(float(x) for x in self.values)
        if not values:
            raise InvalidParameterError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InvalidParameterError("sweep values must be strictly increasing")
        object.__setattr__(self, "values", values)
        strategies = tuple(Strategy(s) for s in self.strategies)
        if not strategies or any(s not in SWEEP_STRATEGIES for s in strategies):
            raise InvalidParameterError("strategies must be a non-empty subset of {equidistant, fixed_interval}")
        object.__setattr__(self, "strategies", strategies)
        outputs = tuple(self.outputs)
        if not outputs or any(o not in OUTPUTS for o in outputs):
            raise InvalidParameterError(f"outputs must be a non-empty subset of {OUTPUTS}")
        object.__setattr__(self, "outputs", outputs)


@dataclass
class SweepRow:
    x: float
    strategy: Strategy
    service: float | None = None
    otr: float | None = None
    trace: object = field(default=None, repr=False)
    deployment: Deployment | None = field(default=None, repr=False)
    scenario: object = field(default=None, repr=False)


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]
    skipped: list[tuple[float, str, str]]
    provenance: dict

    def column(self, strategy, name):
        strategy = Strategy(strategy)
        return np.array([getattr(r, name) for r in self.rows if r.strategy is strategy], dtype=float)

    def xs(self, strategy):
        strategy = Strategy(strategy)
        return np.array([r.x for r in self.rows if r.strategy is strategy])


def _resolve(scenario, spec: SweepSpec, x: float, strategy: Strategy):
    """Scenario and deployment for one sweep combination; raises on constraint violations."""
    n, delta = spec.antenna_count, spec.delta
    if spec.variable == "antenna_separation":
        if strategy is not Strategy.EQUIDISTANT:
            raise InvalidParameterError("separation sweeps define equidistant-style antenna pairs only")
        # N=2 equidistant pins the pair to {0, L}; other separations need explicit offsets
        return scenario, Deployment(Strategy.EQUIDISTANT, [0.0, x])
    if spec.variable == "train_length":
        scenario = scenario.with_(train_length=x)
    elif spec.variable == "antenna_count":
        if x != int(x):
            raise InvalidParameterError(f"antenna count must be integral, got {x}")
        n = int(x)
    else:
        delta = x
    if strategy is Strategy.EQUIDISTANT:
        return scenario, Deployment.equidistant(n, scenario)
    return scenario, Deployment.fixed_interval(n, delta, scenario, indexing=spec.indexing)


def _evaluate(scenario, deployment, spec, c_th, x, strategy):
    row = SweepRow(x, strategy, deployment=deployment, scenario=scenario)
    if "service" in spec.outputs:
        row.service = service_amount(scenario, deployment, rel_tol=spec.rel_tol)
    if "otr" in spec.outputs:
        row.otr = outage_report(scenario, deployment, c_th, refine_tol=spec.refine_tol).otr
    if "trace" in spec.outputs:
        row.trace = sample_trace(scenario, deployment, spec.trace_step)
    return row


def run_sweep(scenario, spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every (value, strategy) combination in input order.

    Combinations that violate a deployment constraint are skipped and
    logged. ``workers > 1`` evaluates combinations on a thread pool; rows
    come back in input order regardless.
    """
    c_th = scenario.c_th if spec.c_th is None else spec.c_th
    jobs, skipped = [], []
    for x in spec.values:
        for strategy in spec.strategies:
            try:
                sc, dep = _resolve(scenario, spec, x, strategy)
            except HSTLabError as exc:
                log.info("skipping %s=%g (%s): %s", spec.variable, x, strategy.value, exc)
                skipped.append((x, strategy.value, str(exc)))
                continue
            jobs.append((sc, dep, spec, c_th, x, strategy))
    if not jobs:
        raise EmptySweepError(f"all {len(skipped)} combinations of the {spec.variable} sweep were skipped")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _evaluate(*job), jobs))
    else:
        rows = [_evaluate(*job) for job in jobs]

    provenance = {
        "scenario_sha256": scenario.digest(),
        "version": __version__,
        "rel_tol": spec.rel_tol,
        "refine_tol": spec.refine_tol,
        "c_th": c_th,
        "variable": spec.variable,
        "indexing": spec.indexing,
    }
    return SweepResult(spec, rows, skipped, provenance)


def _fmt(x):
    return "" if x is None else format(float(x), ".17g")


def write_sweep_csv(path, result: SweepResult, reproducible=True):
    """``x,strategy,service_bits_per_hz_s,otr`` rows followed by ``#`` provenance lines."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "strategy", "service_bits_per_hz_s", "otr"])
        for r in result.rows:
            w.writerow([_fmt(r.x), r.strategy.value, _fmt(r.service), _fmt(r.otr)])
        for key, value in result.provenance.items():
            fh.write(f"# {key}={value}\n")
        for x, strategy, reason in result.skipped:
            fh.write(f"# skipped x={_fmt(x)} strategy={strategy}: {reason}\n")
        if not reproducible:
            fh.write(f"# generated={timestamp()}\n")


def timestamp():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


_SPEC_KEYS = {
    "variable",
    "values",
    "strategies",
    "outputs",
    "n",
    "delta_m",
    "c_th_bits",
    "indexing",
    "rel_tol",
    "refine_tol",
    "trace_step_s",
}


def sweep_spec_from_dict(data: dict) -> SweepSpec:
    if not isinstance(data, dict):
        raise InvalidParameterError("sweep spec must be a JSON object")
    unknown = sorted(set(data) - _SPEC_KEYS)
    if unknown:
        raise InvalidParameterError(f"unknown key(s) in sweep spec: {', '.join(unknown)}")
    if "variable" not in data or "values" not in data:
        raise InvalidParameterError("sweep spec needs 'variable' and 'values'")
    kwargs = dict(variable=data["variable"], values=data["values"])
    renames = {
        "strategies": "strategies",
        "outputs": "outputs",
        "n": "antenna_count",
        "delta_m": "delta",
        "c_th_bits": "c_th",
        "indexing": "indexing",
        "rel_tol": "rel_tol",
        "refine_tol": "refine_tol",
        "trace_step_s": "trace_step",
    }
    for key, name in renames.items():
        if key in data:
            kwargs[name] = data[key]
    try:
        return SweepSpec(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParameterError):
            raise
        raise InvalidParameterError(str(exc)) from None


def load_sweep_spec(path) -> SweepSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            return sweep_spec_from_dict(json.load(fh))
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InvalidParameterError(f"{path}: {exc.strerror}") from None


# -- peak counting -----------------------------------------------------------


def count_rate_peaks(trace) -> int:
    """Number of strict interior local maxima of a sampled capacity curve.

    Runs of equal samples are collapsed first so a flat top counts once;
    the first and last samples are never peaks.
    """
    y = np.asarray(getattr(trace, "capacities", trace), dtype=float)
    if y.size < 3:
        raise InvalidParameterError("peak counting needs at least 3 samples")
    keep = np.concatenate([[True], np.diff(y) != 0.0])
    y = y[keep]
    if y.size < 3:
        return 0
    mid = y[1:-1]
    return int(np.count_nonzero((mid > y[:-2]) & (mid > y[2:])))


# -- figure presets ----------------------------------------------------------


@dataclass
class TraceSpec:
    label: str
    deployment: Deployment


@dataclass
class FigurePreset:
    fig_id: str
    scenario: object
    sweep: SweepSpec | None = None
    traces: list[TraceSpec] = field(default_factory=list)
    trace_step: float = TRACE_STEP
    description: str = ""


FIG7_DELTA = 0.075
FIG7_N_MAX = 2666


def figure_preset(fig_id: str, scenario=None) -> FigurePreset:
    """Fully resolved configuration for one of the result figures.

    Every preset starts from the baseline scenario (100 m/s, d0 = 50 m,
    L = 200 m, window [-6, 6] s, 5 dB peak SNR, ``c_th = 0.15``). Fixed-interval
    presets use the ``"anchored"`` layout.
    """
    sc = table1_scenario() if scenario is None else scenario
    anchored = "anchored"
    if fig_id == "fig3":
        seps = np.concatenate([[0.1, 0.5, 1.0, 2.0], np.arange(5.0, 200.0 + 1e-9, 5.0)])
        spec = SweepSpec("antenna_separation", seps, strategies=("equidistant",), antenna_count=2, c_th=0.15)
        return FigurePreset(fig_id, sc, sweep=spec, description="N=2 service and OTR versus antenna separation")
    if fig_id == "fig4":
        lengths = np.linspace(10.0, 3.0 * sc.coverage, 50)
        spec = SweepSpec(
            "train_length", lengths, strategies=("equidistant",), outputs=("service",), antenna_count=2, c_th=0.15
        )
        return FigurePreset(fig_id, sc, sweep=spec, description="N=2 service versus head-to-tail length")
    if fig_id == "fig5":
        traces = []
        for n in (10, 50, 100, 200):
            traces.append(TraceSpec(f"equidistant_N{n}", Deployment.equidistant(n, sc)))
            traces.append(TraceSpec(f"fixed_interval_N{n}", Deployment.fixed_interval(n, 1.0, sc, indexing=anchored)))
        return FigurePreset(fig_id, sc, traces=traces, description="capacity traces, delta = 1 m")
    if fig_id == "fig6":
        traces = [
            TraceSpec("equidistant_N600", Deployment.equidistant(600, sc)),
            TraceSpec("fixed_interval_N600", Deployment.fixed_interval(600, 0.15, sc, indexing=anchored)),
        ]
        return FigurePreset(fig_id, sc, traces=traces, description="capacity traces, N = 600, delta = 0.15 m")
    if fig_id == "fig7":
        ns = np.unique(np.concatenate([np.arange(2, 200, 2), np.arange(200, FIG7_N_MAX, 20), [FIG7_N_MAX]]))
        spec = SweepSpec(
            "antenna_count", ns, outputs=("service",), delta=FIG7_DELTA, indexing=anchored, c_th=0.15
        )
        return FigurePreset(fig_id, sc, sweep=spec, description="service versus N, delta = 0.075 m")
    if fig_id == "fig8":
        ns = [2, 4, 6, 8, 10, 20, 30, 40, 50, 60, 80, 100, 120, 140, 160, 180, 200]
        spec = SweepSpec("antenna_count", ns, delta=1.0, indexing=anchored, c_th=0.15)
        return FigurePreset(fig_id, sc, sweep=spec, description="service and OTR versus N, delta = 1 m")
    if fig_id == "fig9":
        deltas = [0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0]
        spec = SweepSpec(
            "delta", deltas, strategies=("fixed_interval",), antenna_count=20, indexing=anchored, c_th=0.15
        )
        return FigurePreset(fig_id, sc, sweep=spec, description="N=20 fixed-interval versus delta")
    raise InvalidParameterError(f"unknown figure id {fig_id!r}; expected one of {', '.join(FIGURE_IDS)}")


def run_figure(fig_id, out_dir, reproducible=True, workers=1) -> list[Path]:
    """Write one CSV per curve of a figure into ``out_dir``; returns the paths."""
    preset = figure_preset(fig_id)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    footer = [] if reproducible else [f"generated={timestamp()}"]
    written = []
    if preset.sweep is not None:
        result = run_sweep(preset.scenario, preset.sweep, workers=workers)
        for strategy in preset.sweep.strategies:
            sub = SweepResult(
                result.spec,
                [r for r in result.rows if r.strategy is strategy],
                [s for s in result.skipped if s[1] == strategy.value],
                result.provenance,
            )
            path = out_dir / f"{fig_id}_{strategy.value}.csv"
            write_sweep_csv(path, sub, reproducible=reproducible)
            written.append(path)
    for ts in preset.traces:
        trace = sample_trace(preset.scenario, ts.deployment, preset.trace_step)
        path = out_dir / f"{fig_id}_{ts.label}.csv"
        write_trace_csv(path, trace, footer=footer)
        written.append(path)
    return written
