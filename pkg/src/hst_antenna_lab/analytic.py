"""Closed-form results for two antennas and their numerical cross-checks.

The two-antenna geometry is offsets ``{0, s}``: one antenna at the head and
one ``s`` metres behind it. Closed forms are evaluated exactly as printed and
compared against root finding on the capacity curve; any mismatch is
reported, not patched. Where a printed expression is wrong the report also
carries an independently derived value, labelled as such.

Threshold crossings solve ``C(t) = c_th`` with ``beta = (2**c_th - 1)/snr0``.
Substituting ``u = v*t - s/2`` turns the equation into a quadratic in
``u**2``, whose two roots give the outer pair ``(s +/- Phi)/(2v)`` and the
inner pair ``(s -/+ Psi)/(2v)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import capacity_at
from .deployment import _check_count
from .errors import InvalidCountError, InvalidParameterError, RegimeError, SpacingViolationError
from .metrics import outage_report, service_amount
from .numerics import scan_roots
from .scenario import observation_window


def beta(scenario, c_th: float, base: str = "2") -> float:
    """Threshold in SNR-per-``snr0`` units, ``(2**c_th - 1) / snr0``.

    ``base="e"`` gives the natural-log variant ``(exp(c_th) - 1) / snr0``.
    """
    if base == "2":
        return math.expm1(c_th * math.log(2.0)) / scenario.snr0
    if base == "e":
        return math.expm1(c_th) / scenario.snr0
    raise InvalidParameterError(f"base must be '2' or 'e', got {base!r}")


def _sqrt_or_nan(x):
    return math.sqrt(x) if x >= 0.0 else math.nan


def capacity_derivative_numerator(scenario, separation, t):
    """Numerator of ``dC/dt`` for offsets ``{0, s}``; shares its sign with ``dC/dt``."""
    t = np.asarray(t, dtype=float)
    v, d0sq, s0, s = scenario.speed, scenario.d0**2, scenario.snr0, float(separation)
    far = s - v * t
    near = v * t
    return 2.0 * s0 * v * far / (far * far + d0sq) ** 2 - 2.0 * s0 * t * v * v / (d0sq + near * near) ** 2


# -- critical points ---------------------------------------------------------


@dataclass
class CriticalPoints:
    numeric: list[float]
    kinds: list[str]
    printed: dict[str, float]
    flags: dict[str, str] = field(default_factory=dict)
    deviations: dict[str, float] = field(default_factory=dict)


def printed_critical_times(scenario, separation) -> dict[str, float]:
    """Printed stationary points t1, t2, t3 (NaN where the radicand is negative)."""
    s, d0, v = float(separation), scenario.d0, scenario.speed
    root = _sqrt_or_nan(2.0 * s * (s * s + 4.0 * d0 * d0))
    t1 = _sqrt_or_nan(s - root - s * s - 4.0 * d0 * d0) / (2.0 * v)
    t3 = _sqrt_or_nan(s + root - s * s - 4.0 * d0 * d0) / (2.0 * v)
    return {"t1": t1, "t2": s / (2.0 * v), "t3": t3}


def critical_points_n2(scenario, separation, scan_step=1e-3, tol=1e-10) -> CriticalPoints:
    """Stationary points of ``C(t)`` for offsets ``{0, s}`` inside the window.

    Numeric roots come from sign-scanning the derivative numerator on a grid
    of ``scan_step`` seconds and bisecting to ``tol``. Each root is labelled
    ``"max"`` or ``"min"`` from the sign pattern around it.
    """
    s = float(separation)
    if not (math.isfinite(s) and s > 0.0):
        raise InvalidParameterError(f"separation must be > 0, got {separation!r}")
    t0, t1 = observation_window(scenario)
    grid = np.linspace(t0, t1, math.ceil((t1 - t0) / scan_step) + 1)

    def g(t):
        return capacity_derivative_numerator(scenario, s, t)

    roots = scan_roots(g, grid, tol)
    probe = 10.0 * tol + 1e-7
    kinds = []
    for r in roots:
        left, right = g(r - probe), g(r + probe)
        kinds.append("max" if left > 0 > right else "min" if left < 0 < right else "flat")

    printed = printed_critical_times(scenario, s)
    flags = {k: "complex" for k, val in printed.items() if math.isnan(val)}
    deviations = {}
    for k, val in printed.items():
        if not math.isnan(val) and roots.size:
            deviations[k] = float(np.min(np.abs(roots - val)))
    return CriticalPoints([float(r) for r in roots], kinds, printed, flags, deviations)


# -- threshold crossings -----------------------------------------------------


@dataclass
class Crossing:
    label: str
    time: float
    residual: float
    in_window: bool
    source: str = "printed"


@dataclass
class CrossingSet:
    beta: float
    crossings: list[Crossing]
    radicands: dict[str, float]

    @property
    def times(self) -> list[float]:
        return [c.time for c in self.crossings]


def crossing_parts(beta_value, separation, d0):
    """Intermediate quantities of the crossing formulas: Q, Theta and the two radicands."""
    b, s = beta_value, float(separation)
    r = b * s * s - b * b * s * s * d0 * d0 + 1.0
    q = b * (s * s - 4.0 * d0 * d0)
    theta = 4.0 * _sqrt_or_nan(r) + 4.0
    return {
        "R": r,
        "Q": q,
        "Theta": theta,
        "Phi_sq": (q + theta) / b,
        "Psi_sq": (q - theta) / b,
        # inner root of the quadratic in u**2: Q + 4 - 4*sqrt(R), not Q - Theta
        "Psi_sq_derived": (q + 4.0 - 4.0 * _sqrt_or_nan(r)) / b,
    }


def threshold_crossings_n2(scenario, separation, c_th, inner="printed") -> CrossingSet:
    """Closed-form times where ``C(t) = c_th`` for offsets ``{0, s}``.

    ``inner="printed"`` evaluates the printed inner pair, ``inner="derived"``
    uses the root that actually solves the quadratic. Pairs whose radicand is
    negative are absent. Every returned time carries ``|C(T) - c_th|``.
    """
    if inner not in ("printed", "derived"):
        raise InvalidParameterError(f"inner must be 'printed' or 'derived', got {inner!r}")
    s = float(separation)
    if not (math.isfinite(s) and s > 0.0):
        raise InvalidParameterError(f"separation must be > 0, got {separation!r}")
    c_th = float(c_th)
    if not c_th > 0.0:
        raise InvalidParameterError(f"c_th must be > 0, got {c_th!r}")
    b = beta(scenario, c_th)
    parts = crossing_parts(b, s, scenario.d0)
    v = scenario.speed
    t0, t1 = observation_window(scenario)

    candidates = []
    phi = _sqrt_or_nan(parts["Phi_sq"])
    if not math.isnan(phi):
        candidates += [("T1", (s + phi) / (2 * v)), ("T2", (s - phi) / (2 * v))]
    psi_sq = parts["Psi_sq"] if inner == "printed" else parts["Psi_sq_derived"]
    psi = _sqrt_or_nan(psi_sq)
    if not math.isnan(psi):
        candidates += [("T3", (s - psi) / (2 * v)), ("T4", (s + psi) / (2 * v))]

    crossings = []
    for label, t in candidates:
        res = abs(capacity_at(scenario, [0.0, s], t) - c_th)
        source = "printed" if label in ("T1", "T2") or inner == "printed" else "derived"
        crossings.append(Crossing(label, t, res, t0 <= t <= t1, source))
    crossings.sort(key=lambda c: c.time)
    return CrossingSet(b, crossings, parts)


def numeric_crossings_n2(scenario, separation, c_th, scan_step=None, tol=1e-10) -> np.ndarray:
    """Bisection-refined roots of ``C(t) - c_th`` inside the window."""
    t0, t1 = observation_window(scenario)
    scan_step = (t1 - t0) / 12000.0 if scan_step is None else scan_step
    grid = np.linspace(t0, t1, math.ceil((t1 - t0) / scan_step) + 1)
    offsets = np.array([0.0, float(separation)])
    return scan_roots(lambda t: capacity_at(scenario, offsets, t) - c_th, grid, tol)


# -- outage time ratio -------------------------------------------------------


def _otr_formula(beta_value, separation, d0, coverage):
    s, b = float(separation), beta_value
    rad = (b * s * s - 4.0 * b * d0 * d0 + 4.0 * _sqrt_or_nan(-b * b * s * s * d0 * d0 + b * s * s + 1.0) + 4.0) / b
    return 1.0 - _sqrt_or_nan(rad) / coverage


def otr_closed_form_n2(scenario, separation, c_th, base="2", clip_to_window=False) -> float:
    """Closed-form outage time ratio for offsets ``{0, s}`` in the two-crossing regime.

    Valid only for ``0 < c_th < C(s/(2v))``, i.e. the threshold lies below the
    dip between the two rate peaks. The raw formula assumes both crossings
    fall inside the window; with ``clip_to_window=True`` they are clipped to
    the window edges first, matching how the numerical report treats
    stretches that run past the window.
    """
    s = float(separation)
    c_th = float(c_th)
    if not (math.isfinite(s) and s > 0.0):
        raise InvalidParameterError(f"separation must be > 0, got {separation!r}")
    c_mid = capacity_at(scenario, [0.0, s], s / (2.0 * scenario.speed))
    if not (0.0 < c_th < c_mid):
        raise RegimeError(
            f"c_th={c_th:g} is outside the two-crossing regime (0, C(t2)={c_mid:.6g}); "
            "use metrics.outage_report instead"
        )
    b = beta(scenario, c_th, base)
    if not clip_to_window:
        return _otr_formula(b, s, scenario.d0, scenario.coverage)
    phi = math.sqrt(crossing_parts(b, s, scenario.d0)["Phi_sq"])
    v = scenario.speed
    t0, t1 = observation_window(scenario)
    covered = min((s + phi) / (2 * v), t1) - max((s - phi) / (2 * v), t0)
    return min(1.0, max(0.0, 1.0 - covered / (t1 - t0)))


# -- service amount versus separation ----------------------------------------


@dataclass
class LengthSlopePoint:
    length: float
    derivative: float
    sign: int


@dataclass
class LengthSlopeProfile:
    points: list[LengthSlopePoint]
    coverage: float

    @property
    def sign_changes(self) -> int:
        signs = [p.sign for p in self.points if p.sign != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    @property
    def violations(self) -> list[float]:
        """Lengths beyond the inter-BS spacing where the service did not decrease."""
        return [p.length for p in self.points if p.length > self.coverage and p.sign >= 0]

    @property
    def peak_bracket(self):
        for a, b in zip(self.points, self.points[1:]):
            if a.sign > 0 and b.sign < 0:
                return a.length, b.length
        return None


def service_n2(scenario, separation, rel_tol=1e-10):
    return service_amount(scenario, [0.0, float(separation)], rel_tol=rel_tol)


def length_slope_check(scenario, lengths, rel_tol=1e-10) -> LengthSlopeProfile:
    """Sign of ``dS/dL`` for a head/tail antenna pair, by central differences.

    The step is ``max(1 m, 1e-3 * L)``. Lengths may exceed the scenario's
    train length; only the pair geometry matters here.
    """
    lengths = np.asarray(lengths, dtype=float)
    if lengths.size == 0 or np.any(lengths <= 0.0):
        raise InvalidParameterError("lengths must be non-empty and positive")
    if np.any(np.diff(lengths) < 0.0):
        raise InvalidParameterError("lengths must be sorted")
    points = []
    for L in lengths:
        h = max(1.0, 1e-3 * L)
        lo = max(L - h, 1e-6)
        deriv = (service_n2(scenario, L + h, rel_tol) - service_n2(scenario, lo, rel_tol)) / (L + h - lo)
        points.append(LengthSlopePoint(float(L), deriv, int(np.sign(deriv))))
    return LengthSlopeProfile(points, scenario.coverage)


# -- group distances ---------------------------------------------------------


@dataclass(frozen=True)
class GroupDistances:
    group: int
    d_equ: float
    d_fix: float


def group_distances(n, length, delta) -> list[GroupDistances]:
    """Separation of antennas ``m`` and ``N+1-m`` under both strategies, m = 1..N/2."""
    n = _check_count(n)
    if n % 2:
        raise InvalidCountError(f"antenna count must be even, got {n}")
    length, delta = float(length), float(delta)
    if not (length > 0.0 and delta > 0.0):
        raise InvalidParameterError("length and delta must be > 0")
    spacing = length / (n - 1)
    if delta > spacing * (1.0 + 1e-12):
        raise SpacingViolationError(f"delta {delta:g} m exceeds L/(N-1) = {spacing:.6g} m")
    return [
        GroupDistances(m, length - 2.0 * spacing * (m - 1), length - 2.0 * delta * (m - 1))
        for m in range(1, n // 2 + 1)
    ]


# -- combined report ---------------------------------------------------------


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def validation_report(
    scenario,
    separation,
    c_th,
    slope_lengths=None,
    groups_n=4,
    groups_delta=1.0,
    residual_tol=1e-8,
) -> dict:
    """Everything the ``validate`` command prints, as a JSON-ready mapping.

    NaN and infinite values are emitted as ``null``.
    """
    s = float(separation)
    cp = critical_points_n2(scenario, s)
    printed_x = threshold_crossings_n2(scenario, s, c_th, inner="printed")
    derived_x = threshold_crossings_n2(scenario, s, c_th, inner="derived")
    numeric_x = numeric_crossings_n2(scenario, s, c_th)

    def crossing_rows(cs):
        rows = []
        for c in cs.crossings:
            near = float(np.min(np.abs(numeric_x - c.time))) if numeric_x.size else None
            rows.append(
                {
                    "label": c.label,
                    "time": c.time,
                    "residual": c.residual,
                    "in_window": c.in_window,
                    "source": c.source,
                    "nearest_numeric_dev": near,
                    "passes": c.residual <= residual_tol,
                }
            )
        return rows

    numeric_otr = outage_report(scenario, [0.0, s], c_th).otr
    otr = {"numeric": numeric_otr}
    try:
        otr["closed_form"] = otr_closed_form_n2(scenario, s, c_th)
        otr["closed_form_clipped"] = otr_closed_form_n2(scenario, s, c_th, clip_to_window=True)
        otr["abs_dev"] = abs(otr["closed_form"] - numeric_otr)
        otr["regime"] = "two-crossing"
    except RegimeError as exc:
        otr.update(closed_form=None, closed_form_clipped=None, abs_dev=None, regime=str(exc))
    otr["closed_form_e_variant"] = _otr_formula(beta(scenario, c_th, "e"), s, scenario.d0, scenario.coverage)

    if slope_lengths is None:
        slope_lengths = np.linspace(10.0, 3.0 * scenario.coverage, 50)
    profile = length_slope_check(scenario, slope_lengths)

    report = {
        "scenario": scenario.to_dict(),
        "separation_m": s,
        "c_th_bits": float(c_th),
        "critical_points": {
            "numeric": cp.numeric,
            "kinds": cp.kinds,
            "printed_closed_form": cp.printed,
            "flags": cp.flags,
            "deviations": cp.deviations,
        },
        "crossings": {
            "beta": printed_x.beta,
            "beta_e_variant": beta(scenario, c_th, "e"),
            "radicands": printed_x.radicands,
            "numeric": [float(t) for t in numeric_x],
            "printed": crossing_rows(printed_x),
            "derived_inner": [r for r in crossing_rows(derived_x) if r["source"] == "derived"],
        },
        "otr": otr,
        "length_slope": {
            "points": [asdict(p) for p in profile.points],
            "sign_changes": profile.sign_changes,
            "violations": profile.violations,
            "peak_bracket": profile.peak_bracket,
        },
        "group_distances": {
            "n": groups_n,
            "delta_m": groups_delta,
            "groups": [asdict(g) for g in group_distances(groups_n, scenario.train_length, groups_delta)],
        },
    }
    return _sanitize(report)


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    return _clean(obj)
