#!/usr/bin/env python
"""Equidistant versus fixed-interval placement for many antennas.

Uses the figure presets: service and OTR versus antenna count at
delta = 1 m, the massive-array sweep at half-wavelength spacing, and the
effect of the group spacing delta for N = 20.
"""

import numpy as np

from hst_antenna_lab.harness import figure_preset, run_sweep

for fig_id in ("fig8", "fig9"):
    preset = figure_preset(fig_id)
    res = run_sweep(preset.scenario, preset.sweep)
    print(f"\n{fig_id}: {preset.description}")
    for row in res.rows:
        print(f"  x={row.x:8g} {row.strategy.value:15s} service={row.service:9.4f} otr={row.otr:.4f}")

preset = figure_preset("fig7")
res = run_sweep(preset.scenario, preset.sweep)
ns = res.xs("equidistant")
gap = res.column("fixed_interval", "service") - res.column("equidistant", "service")
k = int(np.argmax(np.abs(gap)))
print(f"\nfig7: largest service gap {gap[k]:.4f} at N={ns[k]:g}; gap at N=2: {gap[0]:.2e}, at N={ns[-1]:g}: {gap[-1]:.2e}")
