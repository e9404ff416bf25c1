#!/usr/bin/env python
"""Closed-form two-antenna results against root finding.

The threshold crossings of C(t) = Cth have closed forms. The outer pair
(T1, T2) gives the outage time ratio whenever the threshold sits below the
dip between the two peaks. The printed inner pair (T3, T4) has a sign slip;
the report shows it next to the corrected root.
"""

import json

from hst_antenna_lab import capacity_at, outage_report, table1_scenario
from hst_antenna_lab.analytic import (
    critical_points_n2,
    numeric_crossings_n2,
    otr_closed_form_n2,
    threshold_crossings_n2,
    validation_report,
)

sc = table1_scenario()

cp = critical_points_n2(sc, 200.0)
print("stationary points (numeric):", [f"{t:.6f} ({k})" for t, k in zip(cp.numeric, cp.kinds)])
print("printed t1, t2, t3:", cp.printed, "flags:", cp.flags)

print("\nCth = 0.15 (two-crossing regime)")
print("  closed-form crossings:", threshold_crossings_n2(sc, 200.0, 0.15).times)
print("  bisection crossings:  ", list(numeric_crossings_n2(sc, 200.0, 0.15)))
print("  OTR closed form:", otr_closed_form_n2(sc, 200.0, 0.15))
print("  OTR numeric:    ", outage_report(sc, [0, 200], 0.15).otr)

c_th = 0.5 * (capacity_at(sc, [0, 200], 1.0) + capacity_at(sc, [0, 200], 0.0))
print(f"\nCth = {c_th:.3f} (between dip and peaks)")
print("  printed inner pair: ", threshold_crossings_n2(sc, 200.0, c_th).times)
print("  corrected inner pair:", threshold_crossings_n2(sc, 200.0, c_th, inner="derived").times)
print("  bisection:           ", list(numeric_crossings_n2(sc, 200.0, c_th)))

rep = validation_report(sc, 200.0, 0.15, slope_lengths=[300.0, 2400.0])
print("\nreport otr section:", json.dumps(rep["otr"], indent=1))
