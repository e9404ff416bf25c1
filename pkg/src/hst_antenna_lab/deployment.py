"""Antenna placement along the train.

Offsets are measured from the train head toward the tail, so antenna ``n``
sits at track coordinate ``v*t - offsets[n]``.

Two readings of the fixed-interval layout are provided:

``"verbatim"``
    head group at ``n*delta`` (n = 1..N/2), tail group at ``L - n*delta``
    (n = N/2+1..N). This is the indexing as printed; the tail group ends up
    displaced ``(N/2)*delta`` away from the train end and the groups overlap
    once ``1.5*N*delta`` approaches ``L``.
``"anchored"``
    head group at ``(n-1)*delta``, tail group at ``L - (N-n)*delta``, i.e. both
    groups start at the train ends. Pair ``m`` (antennas ``m`` and ``N+1-m``)
    is then ``L - 2*delta*(m-1)`` apart, which is the group distance used in
    the strategy comparison, and at ``delta = L/(N-1)`` the layout coincides
    with the equidistant one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCountError, InvalidParameterError, SpacingViolationError

FIXED_INTERVAL_INDEXINGS = ("verbatim", "anchored")

# relative slack when comparing spacings that are equal by construction
_REL_SLACK = 1e-12


class Strategy(str, enum.Enum):
    EQUIDISTANT = "equidistant"
    FIXED_INTERVAL = "fixed_interval"
    EXPLICIT = "explicit"


def _check_count(n, minimum=2):
    if isinstance(n, bool) or int(n) != n:
        raise InvalidCountError(f"antenna count must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise InvalidCountError(f"antenna count must be >= {minimum}, got {n}")
    return n


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")
    return value


def min_separation(offsets) -> float:
    """Smallest gap between any two antennas (``inf`` for fewer than two)."""
    offsets = np.sort(np.asarray(offsets, dtype=float))
    if offsets.size < 2:
        return math.inf
    return float(np.min(np.diff(offsets)))


def check_spacing(offsets, wavelength):
    """Raise :class:`SpacingViolationError` if two antennas are closer than half a wavelength."""
    if wavelength is None:
        return
    gap = min_separation(offsets)
    limit = 0.5 * wavelength
    if gap < limit * (1.0 - _REL_SLACK):
        raise SpacingViolationError(
            f"minimum antenna separation {gap:.6g} m is below half a wavelength ({limit:.6g} m)"
        )


def equidistant_offsets(n: int, length: float, wavelength: float | None = None) -> np.ndarray:
    """Offsets ``(k-1) * L/(N-1)`` for k = 1..N; first is 0, last is ``L``."""
    n = _check_count(n)
    length = _positive("length", length)
    spacing = length / (n - 1)
    if wavelength is not None and spacing < 0.5 * wavelength * (1.0 - _REL_SLACK):
        raise SpacingViolationError(
            f"equidistant spacing {spacing:.6g} m is below half a wavelength ({0.5 * wavelength:.6g} m)"
        )
    offsets = np.arange(n, dtype=float) * spacing
    offsets[-1] = length
    return offsets


def fixed_interval_offsets(
    n: int,
    delta: float,
    length: float,
    wavelength: float | None = None,
    indexing: str = "verbatim",
) -> np.ndarray:
    """Two groups of ``N/2`` antennas spaced ``delta`` apart.

    The order follows antenna index: head group first, then the tail group
    walking back toward the head. See the module docstring for ``indexing``.

    >>> fixed_interval_offsets(4, 1.0, 200.0).tolist()
    [1.0, 2.0, 197.0, 196.0]
    >>> fixed_interval_offsets(4, 1.0, 200.0, indexing="anchored").tolist()
    [0.0, 1.0, 199.0, 200.0]
    """
    n = _check_count(n)
    if n % 2:
        raise InvalidCountError(f"fixed-interval strategy needs an even antenna count, got {n}")
    delta = _positive("delta", delta)
    length = _positive("length", length)
    if indexing not in FIXED_INTERVAL_INDEXINGS:
        raise InvalidParameterError(f"indexing must be one of {FIXED_INTERVAL_INDEXINGS}, got {indexing!r}")
    if wavelength is not None and delta < 0.5 * wavelength * (1.0 - _REL_SLACK):
        raise SpacingViolationError(f"delta {delta:.6g} m is below half a wavelength ({0.5 * wavelength:.6g} m)")
    if delta > length / (n - 1) * (1.0 + _REL_SLACK):
        raise SpacingViolationError(
            f"delta {delta:.6g} m exceeds L/(N-1) = {length / (n - 1):.6g} m for N={n}"
        )

    half = n // 2
    idx = np.arange(1, n + 1, dtype=float)
    if indexing == "verbatim":
        head = idx[:half] * delta
        tail = length - idx[half:] * delta
    else:
        head = (idx[:half] - 1.0) * delta
        tail = length - (n - idx[half:]) * delta
    offsets = np.concatenate([head, tail])

    if offsets.min() < 0.0 or offsets.max() > length:
        raise SpacingViolationError(
            f"fixed-interval layout leaves the train: offsets span [{offsets.min():.6g}, {offsets.max():.6g}] m"
        )
    if head.max() >= tail.min():
        raise SpacingViolationError(
            f"head group (up to {head.max():.6g} m) overlaps tail group (from {tail.min():.6g} m)"
        )
    check_spacing(offsets, wavelength)
    return offsets


def explicit_offsets(offsets, length: float, wavelength: float | None = None) -> np.ndarray:
    offsets = np.asarray(offsets, dtype=float).ravel()
    if offsets.size == 0:
        raise InvalidCountError("at least one antenna offset is required")
    length = _positive("length", length)
    if not np.all(np.isfinite(offsets)):
        raise InvalidParameterError("offsets must be finite")
    if offsets.min() < 0.0 or offsets.max() > length:
        raise SpacingViolationError(f"offsets must lie within [0, {length:g}] m")
    check_spacing(offsets, wavelength)
    return offsets


def n_max(length: float, delta: float) -> int:
    """Largest antenna count the half-wavelength rule admits: ``floor(L/delta) + 1``."""
    length = _positive("length", length)
    delta = _positive("delta", delta)
    return math.floor(length / delta) + 1


@dataclass(frozen=True)
class Deployment:
    strategy: Strategy
    offsets: np.ndarray = field(repr=False)
    delta: float | None = None
    indexing: str | None = None

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=float).copy()
        offsets.setflags(write=False)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "strategy", Strategy(self.strategy))

    @property
    def n(self) -> int:
        return int(self.offsets.size)

    def __repr__(self):
        extra = f", delta={self.delta}" if self.delta is not None else ""
        return f"Deployment({self.strategy.value}, n={self.n}{extra})"

    @classmethod
    def equidistant(cls, n, scenario, check=True):
        wl = scenario.wavelength if check else None
        return cls(Strategy.EQUIDISTANT, equidistant_offsets(n, scenario.train_length, wl))

    @classmethod
    def fixed_interval(cls, n, delta, scenario, indexing="verbatim", check=True):
        wl = scenario.wavelength if check else None
        offsets = fixed_interval_offsets(n, delta, scenario.train_length, wl, indexing)
        return cls(Strategy.FIXED_INTERVAL, offsets, delta=float(delta), indexing=indexing)

    @classmethod
    def explicit(cls, offsets, scenario, check=True):
        wl = scenario.wavelength if check else None
        return cls(Strategy.EXPLICIT, explicit_offsets(offsets, scenario.train_length, wl))


_DEPLOYMENT_KEYS = {"strategy", "n", "delta_m", "offsets_m", "indexing"}


def deployment_from_dict(data: dict, scenario) -> Deployment:
    """Parse the ``deployment`` section of a scenario file."""
    if not isinstance(data, dict):
        raise InvalidParameterError("deployment must be a JSON object")
    unknown = sorted(set(data) - _DEPLOYMENT_KEYS)
    if unknown:
        raise InvalidParameterError(f"unknown key(s) in deployment: {', '.join(unknown)}")
    try:
        strategy = Strategy(data.get("strategy"))
    except ValueError:
        raise InvalidParameterError(
            'deployment.strategy must be "equidistant", "fixed_interval" or "explicit"'
        ) from None

    if strategy is Strategy.EXPLICIT:
        if "offsets_m" not in data:
            raise InvalidParameterError("explicit deployment needs offsets_m")
        dep = Deployment.explicit(data["offsets_m"], scenario)
        if "n" in data and int(data["n"]) != dep.n:
            raise InvalidCountError(f"n={data['n']} does not match {dep.n} offsets")
        return dep
    if "n" not in data:
        raise InvalidParameterError(f"{strategy.value} deployment needs n")
    if strategy is Strategy.EQUIDISTANT:
        return Deployment.equidistant(data["n"], scenario)
    if "delta_m" not in data:
        raise InvalidParameterError("fixed_interval deployment needs delta_m")
    return Deployment.fixed_interval(
        data["n"], data["delta_m"], scenario, indexing=data.get("indexing", "verbatim")
    )


def as_offsets(deployment_or_offsets) -> np.ndarray:
    """Accept a :class:`Deployment` or a plain sequence of offsets."""
    if isinstance(deployment_or_offsets, Deployment):
        return deployment_or_offsets.offsets
    return np.atleast_1d(np.asarray(deployment_or_offsets, dtype=float))
