import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from hst_antenna_lab import (
    ConvergenceError,
    Deployment,
    InvalidParameterError,
    capacity_at,
    outage_report,
    sample_trace,
    service_amount,
    table1_scenario,
)
from hst_antenna_lab.analytic import otr_closed_form_n2
from hst_antenna_lab.metrics import write_outage_csv, write_trace_csv

# mpmath.quad of C(t) for offsets {0, 200} over [-6, 6], 40 digits
SERVICE_N2_TABLE1 = 7.9084578624237560098
# same for a single antenna at offset 0
SERVICE_N1_TABLE1 = 4.3364682657729881872


def trapezoid_oracle(sc, offsets, step=1e-4):
    t = np.linspace(-sc.duration / 2, sc.duration / 2, round(sc.duration / step) + 1)
    return np.trapezoid(capacity_at(sc, offsets, t), t)


def brute_force_otr(sc, offsets, c_th, n=600001):
    t = np.linspace(-sc.duration / 2, sc.duration / 2, n)
    return float(np.mean(capacity_at(sc, offsets, t) < c_th))


def test_sample_trace_grid(table1):
    tr = sample_trace(table1, [0.0], 1.0)
    assert len(tr) == 13
    assert tr.times[0] == -6.0 and tr.times[-1] == 6.0
    assert np.max(np.abs(np.diff(tr.times) - tr.sample_step)) <= 1e-12
    assert np.all(tr.capacities > 0)


def test_sample_trace_argmax_single(table1):
    tr = sample_trace(table1, [0.0], 1e-3)
    assert tr.times[np.argmax(tr.capacities)] == pytest.approx(0.0, abs=1e-12)


def test_sample_trace_two_maxima(table1):
    c = sample_trace(table1, [0.0, 200.0], 1e-3).capacities
    interior = (c[1:-1] > c[:-2]) & (c[1:-1] > c[2:])
    assert np.count_nonzero(interior) == 2


@pytest.mark.parametrize("step", [0.0, -1.0, 1.3])
def test_sample_trace_rejects(table1, step):
    with pytest.raises(InvalidParameterError):
        sample_trace(table1, [0.0], step)


def test_service_constant_integrand(table1, monkeypatch):
    import hst_antenna_lab.metrics as m

    monkeypatch.setattr(m, "capacity_at", lambda sc, off, t: np.full_like(np.asarray(t, float), 2.5))
    assert service_amount(table1, [0.0]) == pytest.approx(2.5 * 12.0, rel=1e-15)


def test_service_matches_reference(table1):
    assert service_amount(table1, [0.0, 200.0]) == pytest.approx(SERVICE_N2_TABLE1, rel=1e-9)
    assert service_amount(table1, [0.0]) == pytest.approx(SERVICE_N1_TABLE1, rel=1e-9)


def test_service_matches_trapezoid(table1):
    assert service_amount(table1, [0.0, 200.0]) == pytest.approx(trapezoid_oracle(table1, [0.0, 200.0]), rel=1e-6)


def test_service_mirror(table1):
    # antenna at offset L over [-T/2, T/2] is the antenna at 0 shifted by L/v
    sym = table1.with_(coverage=1200.0)
    a = service_amount(sym, [0.0])
    b = service_amount(sym, [100.0])
    c = service_amount(sym, [-100.0])
    assert b == pytest.approx(c, rel=1e-10)
    assert a > b


@pytest.mark.parametrize("tol", [0.0, 1e-2])
def test_service_rejects_tolerance(table1, tol):
    with pytest.raises(InvalidParameterError):
        service_amount(table1, [0.0], rel_tol=tol)


def test_service_convergence_error(table1, monkeypatch):
    import hst_antenna_lab.metrics as m

    monkeypatch.setattr(m, "MAX_DOUBLINGS", 3)
    with pytest.raises(ConvergenceError) as info:
        service_amount(table1, [0.0, 200.0], rel_tol=1e-12)
    assert len(info.value.estimates) == 2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0, 200), min_size=1, max_size=8), st.floats(0, 200))
def test_service_monotone_in_antennas(offsets, extra):
    sc = table1_scenario()
    assert service_amount(sc, offsets + [extra]) >= service_amount(sc, offsets) * (1 - 1e-9)


def test_outage_trivial_thresholds(table1):
    r = outage_report(table1, [0.0, 200.0], 0.0)
    assert r.otr == 0.0 and r.intervals == []
    r = outage_report(table1, [0.0, 200.0], 10.0)
    assert r.otr == 1.0 and r.intervals == [(-6.0, 6.0)]


def test_outage_two_antennas_against_closed_form(table1):
    r = outage_report(table1, [0.0, 200.0], 0.15)
    closed = otr_closed_form_n2(table1, 200.0, 0.15)
    assert abs(r.otr - closed) <= 2 * 1e-7 / table1.duration
    assert len(r.intervals) == 2
    assert r.intervals[0][0] == -6.0 and r.intervals[1][1] == 6.0


def test_outage_crossings_against_brentq(table1):
    r = outage_report(table1, [0.0, 200.0], 1.5)
    f = lambda t: capacity_at(table1, [0.0, 200.0], t) - 1.5
    ends = [t for iv in r.intervals for t in iv if abs(t) < 6.0]
    assert len(ends) == 4
    for t in ends:
        ref = brentq(f, t - 1e-3, t + 1e-3, xtol=1e-14)
        assert abs(t - ref) <= 1e-7


@pytest.mark.parametrize("c_th", [0.15, 0.5, 1.2, 1.5, 2.0])
def test_outage_against_brute_force(table1, c_th):
    r = outage_report(table1, [0.0, 200.0], c_th)
    assert r.otr == pytest.approx(brute_force_otr(table1, [0.0, 200.0], c_th), abs=5e-5)


def test_outage_intervals_bookkeeping(table1):
    dep = Deployment.fixed_interval(10, 1.0, table1, indexing="anchored")
    for c_th in np.linspace(0, 6, 25):
        r = outage_report(table1, dep, c_th)
        flat = [t for iv in r.intervals for t in iv]
        assert flat == sorted(flat)
        assert all(-6.0 <= t <= 6.0 for t in flat)
        assert r.outage_time <= 12.0 + 1e-12
        assert r.otr == pytest.approx(r.outage_time / 12.0)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(0, 200), min_size=1, max_size=6), st.floats(0, 3), st.floats(0, 3))
def test_otr_monotone_in_threshold(offsets, a, b):
    sc = table1_scenario()
    lo, hi = sorted([a, b])
    assert outage_report(sc, offsets, lo).otr <= outage_report(sc, offsets, hi).otr + 1e-12


@pytest.mark.parametrize("kwargs", [dict(scan_step=0.5), dict(scan_step=1e-3, refine_tol=1e-4), dict(scan_step=0.0)])
def test_outage_rejects_steps(table1, kwargs):
    with pytest.raises(InvalidParameterError):
        outage_report(table1, [0.0], 0.15, **kwargs)


def test_trace_csv(tmp_path, table1):
    tr = sample_trace(table1, [0.0, 200.0], 0.5)
    path = tmp_path / "t.csv"
    write_trace_csv(path, tr, table1, include_snrs=True)
    lines = path.read_text().splitlines()
    assert lines[0] == "t_s,capacity_bps_hz,snr_1,snr_2"
    assert len(lines) == 1 + len(tr)
    t, c, s1, s2 = map(float, lines[1].split(","))
    assert (t, c) == (tr.times[0], tr.capacities[0])  # 17 significant digits round-trip exactly
    assert math.log2(1 + s1 + s2) == pytest.approx(c, rel=1e-14)


def test_outage_csv(tmp_path, table1):
    r = outage_report(table1, [0.0, 200.0], 0.15)
    path = tmp_path / "o.csv"
    write_outage_csv(path, r)
    lines = path.read_text().splitlines()
    assert lines[0] == "t_minus_s,t_plus_s"
    assert len(lines) == 4
    assert lines[-1] == f"# otr={r.otr:.17g}"
    assert float(lines[-1].split("=")[1]) == r.otr
