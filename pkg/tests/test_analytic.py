import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from hst_antenna_lab import (
    InvalidCountError,
    RegimeError,
    SpacingViolationError,
    capacity_at,
    outage_report,
    table1_scenario,
)
from hst_antenna_lab.analytic import (
    beta,
    capacity_derivative_numerator,
    critical_points_n2,
    group_distances,
    length_slope_check,
    numeric_crossings_n2,
    otr_closed_form_n2,
    printed_critical_times,
    threshold_crossings_n2,
    validation_report,
)


def test_beta(table1):
    assert beta(table1, 0.15) == pytest.approx((2**0.15 - 1) / table1.snr0, rel=1e-14)
    assert beta(table1, 0.15, "e") == pytest.approx((math.exp(0.15) - 1) / table1.snr0, rel=1e-14)


def test_derivative_numerator_sign_matches_finite_difference(table1):
    ts = np.linspace(-5.9, 5.9, 400)
    h = 1e-6
    fd = (capacity_at(table1, [0, 200], ts + h) - capacity_at(table1, [0, 200], ts - h)) / (2 * h)
    num = capacity_derivative_numerator(table1, 200.0, ts)
    keep = np.abs(fd) > 1e-6
    assert np.all(np.sign(fd[keep]) == np.sign(num[keep]))


def test_critical_points_table1(table1):
    cp = critical_points_n2(table1, 200.0)
    assert len(cp.numeric) == 3
    assert cp.kinds == ["max", "min", "max"]
    assert cp.printed["t2"] == 1.0
    assert abs(cp.numeric[1] - 1.0) <= 1e-9
    assert cp.numeric[0] < 1.0 < cp.numeric[2]


def test_critical_points_merged_peak(table1):
    cp = critical_points_n2(table1, 0.001)
    assert len(cp.numeric) == 1 and cp.kinds == ["max"]
    assert cp.numeric[0] == pytest.approx(0.001 / 200.0, abs=1e-9)


def test_printed_outer_stationary_points_are_flagged(table1):
    # the printed t1/t3 radicands are negative for any realistic train
    printed = printed_critical_times(table1, 200.0)
    assert math.isnan(printed["t1"]) and math.isnan(printed["t3"])
    assert critical_points_n2(table1, 200.0).flags == {"t1": "complex", "t3": "complex"}


def _global_max(sc, s):
    t = np.linspace(-6, 6, 120001)
    return capacity_at(sc, [0.0, s], t).max()


def test_no_crossing_above_peak(table1):
    c_top = _global_max(table1, 200.0)
    for inner in ("printed", "derived"):
        assert threshold_crossings_n2(table1, 200.0, c_top + 0.05, inner=inner).crossings == []


def test_four_crossings_between_dip_and_peak(table1):
    c_dip = capacity_at(table1, [0, 200], 1.0)
    c_top = _global_max(table1, 200.0)
    c_th = 0.5 * (c_dip + c_top)
    derived = threshold_crossings_n2(table1, 200.0, c_th, inner="derived")
    assert len(derived.crossings) == 4
    numeric = numeric_crossings_n2(table1, 200.0, c_th)
    assert derived.times == pytest.approx(list(numeric), abs=1e-8)
    assert all(c.residual <= 1e-8 for c in derived.crossings)
    # printed inner pair: radicand (Q - Theta)/beta is negative, so the pair is missing
    printed = threshold_crossings_n2(table1, 200.0, c_th, inner="printed")
    assert [c.label for c in printed.crossings] == ["T2", "T1"]
    assert printed.radicands["Psi_sq"] < 0 < printed.radicands["Psi_sq_derived"]


def test_two_crossings_table1(table1):
    cs = threshold_crossings_n2(table1, 200.0, 0.15)
    assert [c.label for c in cs.crossings] == ["T2", "T1"]
    t2, t1 = cs.times
    assert 0.5 * (t1 + t2) == pytest.approx(1.0, abs=1e-12)
    f = lambda t: capacity_at(table1, [0, 200], t) - 0.15
    for t in (t1, t2):
        assert abs(t - brentq(f, t - 0.01, t + 0.01, xtol=1e-14)) <= 1e-6
    assert all(c.residual <= 1e-8 and c.in_window for c in cs.crossings)


@settings(max_examples=40, deadline=None)
@given(st.floats(5.0, 400.0), st.floats(0.01, 3.0))
def test_outer_crossings_solve_the_equation(s, c_th):
    sc = table1_scenario()
    for c in threshold_crossings_n2(sc, s, c_th, inner="derived").crossings:
        assert c.residual <= 1e-8


def test_otr_identity(table1):
    cs = threshold_crossings_n2(table1, 200.0, 0.15)
    t2, t1 = cs.times
    closed = otr_closed_form_n2(table1, 200.0, 0.15)
    assert closed == pytest.approx(1 - (t1 - t2) * table1.speed / table1.coverage, abs=1e-14)


def test_otr_closed_form_vs_numeric(table1):
    closed = otr_closed_form_n2(table1, 200.0, 0.15)
    numeric = outage_report(table1, [0, 200], 0.15).otr
    assert abs(closed - numeric) < 2e-5


def test_otr_small_threshold(table1):
    # crossings move outside the window: raw formula goes negative, clipped one agrees with numeric
    raw = otr_closed_form_n2(table1, 200.0, 1e-6)
    clipped = otr_closed_form_n2(table1, 200.0, 1e-6, clip_to_window=True)
    assert raw < 0
    assert clipped == 0.0 == outage_report(table1, [0, 200], 1e-6).otr


def test_otr_out_of_regime(table1):
    far = table1.with_(d0=5000.0)
    assert outage_report(far, [0, 200], 0.15).otr == 1.0
    with pytest.raises(RegimeError):
        otr_closed_form_n2(far, 200.0, 0.15)
    with pytest.raises(RegimeError):
        otr_closed_form_n2(table1, 200.0, 1.5)  # four-crossing regime


def test_length_slope_signs(table1):
    prof = length_slope_check(table1, [0.1, 2 * table1.coverage])
    assert [p.sign for p in prof.points] == [1, -1]
    assert prof.violations == []


def test_length_slope_rejects_unsorted(table1):
    with pytest.raises(ValueError):
        length_slope_check(table1, [5.0, 1.0])


def test_group_distances():
    g = group_distances(4, 200.0, 1.0)
    assert [(x.group, x.d_equ, x.d_fix) for x in g] == [(1, 200.0, 200.0), (2, pytest.approx(200 / 3), 198.0)]
    assert [(x.d_equ, x.d_fix) for x in group_distances(2, 123.0, 7.0)] == [(123.0, 123.0)]
    for x in group_distances(20, 200.0, 200.0 / 19):
        assert x.d_fix == pytest.approx(x.d_equ, abs=1e-12)
    with pytest.raises(SpacingViolationError):
        group_distances(4, 200.0, 70.0)
    with pytest.raises(InvalidCountError):
        group_distances(5, 200.0, 1.0)


@given(st.integers(1, 200).map(lambda k: 2 * k), st.floats(0.01, 1.0))
def test_fixed_groups_never_closer(n, frac):
    delta = frac * 200.0 / (n - 1)
    for g in group_distances(n, 200.0, delta):
        assert g.d_fix >= g.d_equ - 1e-9


def test_validation_report(table1):
    rep = validation_report(table1, 200.0, 0.15, slope_lengths=[100.0, 2400.0])
    json.dumps(rep, allow_nan=False)
    assert rep["otr"]["abs_dev"] < 2e-5
    assert rep["otr"]["closed_form_e_variant"] != rep["otr"]["closed_form"]
    assert rep["critical_points"]["printed_closed_form"]["t1"] is None
    assert all(r["passes"] for r in rep["crossings"]["printed"])
    assert rep["length_slope"]["sign_changes"] == 1
    assert len(rep["group_distances"]["groups"]) == 2
