"""Physical parameters of a train-to-trackside link and SNR calibration.

All link quantities are linear: a single antenna at distance ``d`` from the
base station sees ``SNR = snr0 / d**2``. Decibels only appear at the I/O
boundary (``max_snr_db``, ``noise_density_dbm_hz``).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, replace

from .errors import InvalidParameterError

SPEED_OF_LIGHT = 299_792_458.0


def _require_positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")
    return value


def calibrate_from_max_snr(max_snr_db: float, d0: float) -> float:
    """Return ``snr0`` such that the SNR at closest approach ``d0`` is ``max_snr_db``.

    >>> round(calibrate_from_max_snr(5.0, 50.0), 2)
    7905.69
    """
    d0 = _require_positive("d0", d0)
    try:
        max_snr_db = float(max_snr_db)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"max_snr_db must be a number, got {max_snr_db!r}") from None
    if not math.isfinite(max_snr_db):
        raise InvalidParameterError(f"max_snr_db must be finite, got {max_snr_db!r}")
    return 10.0 ** (max_snr_db / 10.0) * d0 * d0


def calibrate_from_physics(
    tx_power: float,
    antenna_gain: float,
    wavelength: float,
    noise_density: float,
    bandwidth: float,
) -> float:
    """Free-space link constant ``Pt * Gl * lambda**2 / ((4 pi)**2 * N0 * B)``.

    ``noise_density`` is in W/Hz, ``bandwidth`` in Hz.
    """
    tx_power = _require_positive("tx_power", tx_power)
    antenna_gain = _require_positive("antenna_gain", antenna_gain)
    wavelength = _require_positive("wavelength", wavelength)
    noise_density = _require_positive("noise_density", noise_density)
    bandwidth = _require_positive("bandwidth", bandwidth)
    return tx_power * antenna_gain * wavelength**2 / ((4.0 * math.pi) ** 2 * noise_density * bandwidth)


def dbm_per_hz_to_watts_per_hz(value_dbm_hz: float) -> float:
    return 10.0 ** ((float(value_dbm_hz) - 30.0) / 10.0)


@dataclass(frozen=True)
class Scenario:
    """Immutable link scenario.

    Attributes
    ----------
    speed : train speed in m/s.
    train_length : train length in m.
    d0 : perpendicular distance between base station and track in m.
    coverage : inter-BS spacing ``D`` in m; the observation window is
        ``[-D/(2v), +D/(2v)]``.
    wavelength : carrier wavelength in m.
    antenna_gain : linear antenna gain.
    snr0 : linear link constant, SNR at distance ``d`` is ``snr0 / d**2``.
    c_th : rate threshold in bits/s/Hz.
    """

    speed: float
    train_length: float
    d0: float
    coverage: float
    wavelength: float
    snr0: float
    antenna_gain: float = 1.0
    c_th: float = 0.15

    def __post_init__(self):
        for name in ("speed", "train_length", "d0", "coverage", "wavelength", "snr0", "antenna_gain"):
            object.__setattr__(self, name, _require_positive(name, getattr(self, name)))
        c_th = float(self.c_th)
        if not math.isfinite(c_th) or c_th < 0.0:
            raise InvalidParameterError(f"c_th must be finite and >= 0, got {self.c_th!r}")
        object.__setattr__(self, "c_th", c_th)
        if not self.coverage / (2.0 * self.speed) > 0.0:
            raise InvalidParameterError("observation window has zero width")

    @property
    def duration(self) -> float:
        """Total observation time ``T = D / v``."""
        return self.coverage / self.speed

    @property
    def half_wavelength(self) -> float:
        return 0.5 * self.wavelength

    def snr_at_distance(self, distance):
        return self.snr0 / (distance * distance)

    def with_(self, **changes) -> Scenario:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; used as sweep provenance."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def observation_window(scenario: Scenario) -> tuple[float, float]:
    half = scenario.coverage / (2.0 * scenario.speed)
    return -half, half


def table1_scenario(**overrides) -> Scenario:
    """Baseline parameters: 100 m/s, 2 GHz, d0 = 50 m, L = 200 m, window [-6, 6] s, 5 dB peak SNR."""
    params = dict(
        speed=100.0,
        train_length=200.0,
        d0=50.0,
        coverage=1200.0,
        wavelength=SPEED_OF_LIGHT / 2.0e9,
        snr0=calibrate_from_max_snr(5.0, 50.0),
        antenna_gain=1.0,
        c_th=0.15,
    )
    params.update(overrides)
    return Scenario(**params)


# -- JSON scenario files -----------------------------------------------------

_SCENARIO_KEYS = {
    "speed_mps",
    "train_length_m",
    "d0_m",
    "coverage_D_m",
    "carrier_freq_hz",
    "wavelength_m",
    "antenna_gain",
    "calibration",
    "c_th_bits",
    "deployment",
}
_REQUIRED_KEYS = {"speed_mps", "train_length_m", "d0_m", "coverage_D_m", "calibration"}
_CALIBRATION_KEYS = {
    "max_snr": {"mode", "max_snr_db"},
    "physics": {"mode", "tx_power_w", "noise_density_w_hz", "noise_density_dbm_hz", "bandwidth_hz"},
}


def _check_keys(where, given, allowed, required=()):
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise InvalidParameterError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = sorted(set(required) - set(given))
    if missing:
        raise InvalidParameterError(f"missing key(s) in {where}: {', '.join(missing)}")


def scenario_from_dict(data: dict) -> Scenario:
    """Build a :class:`Scenario` from the JSON scenario-file layout.

    Unknown keys are rejected so that typos fail loudly. A ``deployment``
    section is tolerated here and parsed by :func:`deployment_from_dict`.
    """
    if not isinstance(data, dict):
        raise InvalidParameterError("scenario must be a JSON object")
    _check_keys("scenario", data, _SCENARIO_KEYS, _REQUIRED_KEYS)

    has_freq, has_wl = "carrier_freq_hz" in data, "wavelength_m" in data
    if has_freq == has_wl:
        raise InvalidParameterError("give exactly one of carrier_freq_hz or wavelength_m")
    if has_freq:
        wavelength = SPEED_OF_LIGHT / _require_positive("carrier_freq_hz", data["carrier_freq_hz"])
    else:
        wavelength = _require_positive("wavelength_m", data["wavelength_m"])
    gain = data.get("antenna_gain", 1.0)

    cal = data["calibration"]
    if not isinstance(cal, dict) or cal.get("mode") not in _CALIBRATION_KEYS:
        raise InvalidParameterError('calibration.mode must be "max_snr" or "physics"')
    mode = cal["mode"]
    if mode == "max_snr":
        _check_keys("calibration", cal, _CALIBRATION_KEYS[mode], {"mode", "max_snr_db"})
        snr0 = calibrate_from_max_snr(cal["max_snr_db"], data["d0_m"])
    else:
        _check_keys("calibration", cal, _CALIBRATION_KEYS[mode], {"mode", "tx_power_w", "bandwidth_hz"})
        if ("noise_density_w_hz" in cal) == ("noise_density_dbm_hz" in cal):
            raise InvalidParameterError("give exactly one of noise_density_w_hz or noise_density_dbm_hz")
        if "noise_density_w_hz" in cal:
            n0 = cal["noise_density_w_hz"]
        else:
            n0 = dbm_per_hz_to_watts_per_hz(cal["noise_density_dbm_hz"])
        snr0 = calibrate_from_physics(cal["tx_power_w"], gain, wavelength, n0, cal["bandwidth_hz"])

    return Scenario(
        speed=data["speed_mps"],
        train_length=data["train_length_m"],
        d0=data["d0_m"],
        coverage=data["coverage_D_m"],
        wavelength=wavelength,
        snr0=snr0,
        antenna_gain=gain,
        c_th=data.get("c_th_bits", 0.15),
    )


def load_scenario_file(path) -> tuple[Scenario, dict]:
    """Read a scenario JSON file; returns the scenario and the raw mapping."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InvalidParameterError(f"{path}: {exc.strerror}") from None
    return scenario_from_dict(data), data
