"""Distance, per-antenna SNR and MRC capacity of the BS-to-train link.

Only distance-dependent path gain is modelled, so everything here is
deterministic. Capacity is in bits/s/Hz (base-2 logarithm).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deployment import as_offsets

# cap on the (time x antenna) work array; keeps N ~ 2700 antennas on fine grids in memory
_CHUNK_ELEMENTS = 1 << 21


def distance_at(scenario, offset, t):
    """Euclidean distance between the BS and an antenna at ``offset`` at time ``t``."""
    x = scenario.speed * np.asarray(t, dtype=float) - offset
    return np.sqrt(x * x + scenario.d0 * scenario.d0)


def snr_sum(scenario, offsets, t) -> np.ndarray:
    """Post-MRC SNR, ``sum_n snr0 / d_n(t)**2``, evaluated for every ``t``.

    Works in chunks of time samples so the intermediate array never exceeds
    ``_CHUNK_ELEMENTS`` entries.
    """
    offsets = as_offsets(offsets)
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.shape, dtype=float)
    v, d0sq, snr0 = scenario.speed, scenario.d0 * scenario.d0, scenario.snr0
    rows = max(1, _CHUNK_ELEMENTS // max(1, offsets.size))
    for lo in range(0, flat.size, rows):
        x = v * flat[lo : lo + rows, None] - offsets[None, :]
        out[lo : lo + rows] = snr0 * np.sum(1.0 / (x * x + d0sq), axis=1)
    return out.reshape(t.shape)


def capacity_at(scenario, deployment, t):
    """Instantaneous capacity ``log2(1 + sum_n SNR_n(t))``.

    ``deployment`` may be a :class:`~hst_antenna_lab.deployment.Deployment`
    or a plain sequence of offsets. ``t`` may be a scalar or an array; a
    scalar in gives a float out.
    """
    c = np.log2(1.0 + snr_sum(scenario, deployment, t))
    return float(c) if c.ndim == 0 else c


@dataclass(frozen=True)
class LinkState:
    time: float
    distances: np.ndarray
    snrs: np.ndarray
    capacity: float


def link_state_at(scenario, deployment, t: float) -> LinkState:
    offsets = as_offsets(deployment)
    d = distance_at(scenario, offsets, float(t))
    snrs = scenario.snr0 / (d * d)
    return LinkState(float(t), d, snrs, float(np.log2(1.0 + np.sum(snrs))))
