"""Cell, radio, shadowing and traffic description of one OFDMA cell.

Units: powers in watts, distances in meters, frequency in hertz, rates in
kb/s and subchannel bandwidth in kHz (so rate/bandwidth is in bit/s/Hz).
The shadowing gain is ``G = 10**(S/10)`` with ``S ~ N(mean_db, variance_db2)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ScenarioError

SPEED_OF_LIGHT = 299_792_458.0
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class RadioParams:
    tx_power_per_subchannel: float
    noise_plus_interference: float
    carrier_frequency: float | None
    reference_distance: float
    pathloss_exponent: float
    subchannel_bandwidth: float
    min_sinr: float
    explicit_attenuation_constant: float | None = None


@dataclass(frozen=True)
class ShadowingParams:
    mean_db: float = 0.0
    variance_db2: float = 0.0

    @property
    def std_db(self) -> float:
        return math.sqrt(self.variance_db2)


@dataclass(frozen=True)
class ServiceClass:
    rate_kbps: float
    probability: float


@dataclass(frozen=True)
class CellScenario:
    radius_m: float
    intensity: float
    max_subchannels_per_user: int
    classes: tuple[ServiceClass, ...]
    radio: RadioParams
    shadowing: ShadowingParams = field(default_factory=ShadowingParams)

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def area(self) -> float:
        return math.pi * self.radius_m ** 2

    @property
    def mean_users(self) -> float:
        return self.intensity * self.area

    def with_gamma(self, gamma: float) -> "CellScenario":
        return replace(self, radio=replace(self.radio, pathloss_exponent=gamma))

    def with_intensity(self, intensity: float) -> "CellScenario":
        return replace(self, intensity=intensity)


def validate(scenario: CellScenario) -> list[str]:
    """Return the list of violated invariants; an empty list means valid."""
    problems = []
    r = scenario.radio
    if not r.tx_power_per_subchannel > 0:
        problems.append("tx_power_per_subchannel must be positive")
    if not r.noise_plus_interference > 0:
        problems.append("noise_plus_interference must be positive")
    if r.explicit_attenuation_constant is None:
        if r.carrier_frequency is None or not r.carrier_frequency > 0:
            problems.append("carrier_frequency must be positive")
    elif not r.explicit_attenuation_constant > 0:
        problems.append("attenuation_constant must be positive")
    if not r.reference_distance > 0:
        problems.append("reference_distance must be positive")
    if not r.pathloss_exponent > 2:
        problems.append("pathloss_exponent must exceed 2")
    if not r.subchannel_bandwidth > 0:
        problems.append("subchannel_bandwidth must be positive")
    if not r.min_sinr > 0:
        problems.append("min_sinr must be positive")

    if not scenario.shadowing.variance_db2 >= 0:
        problems.append("shadowing variance must be non-negative")

    if not scenario.radius_m > r.reference_distance:
        problems.append("radius must exceed reference_distance")
    if not scenario.intensity >= 0:
        problems.append("intensity must be non-negative")
    if int(scenario.max_subchannels_per_user) != scenario.max_subchannels_per_user \
            or scenario.max_subchannels_per_user < 1:
        problems.append("max_subchannels_per_user must be an integer >= 1")

    if not scenario.classes:
        problems.append("class list is empty")
    else:
        for k, c in enumerate(scenario.classes):
            if not c.rate_kbps > 0:
                problems.append(f"class {k}: rate must be positive")
            if not 0 <= c.probability <= 1:
                problems.append(f"class {k}: probability outside [0, 1]")
        total = math.fsum(c.probability for c in scenario.classes)
        if abs(total - 1.0) > 1e-12:
            problems.append(f"class probabilities sum to {total:.12g}")
    return problems


def check(scenario: CellScenario) -> CellScenario:
    """Raise ScenarioError unless the scenario is valid."""
    problems = validate(scenario)
    if problems:
        raise ScenarioError("; ".join(problems))
    return scenario


def attenuation_constant(radio: RadioParams) -> float:
    """Attenuation at the reference distance, ``(c/(4 pi f d_ref))**2 d_ref**gamma``."""
    if radio.explicit_attenuation_constant is not None:
        return radio.explicit_attenuation_constant
    d_ref = radio.reference_distance
    a = SPEED_OF_LIGHT / (4.0 * math.pi * radio.carrier_frequency * d_ref)
    return a * a * d_ref ** radio.pathloss_exponent


def received_power_scale(radio: RadioParams) -> float:
    """Power at unit distance before shadowing, ``P * K_gamma``."""
    return radio.tx_power_per_subchannel * attenuation_constant(radio)


def shadowing_fractional_moment(sh: ShadowingParams, gamma: float) -> float:
    """``E[G**(2/gamma)]`` for the log-normal shadowing gain.

    ``G**(2/gamma) = exp(c S)`` with ``c = ln(10)/(5 gamma)``, so the
    expectation is the normal moment generating function at ``c``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    c = _LN10 / (5.0 * gamma)
    return math.exp(c * sh.mean_db + 0.5 * c * c * sh.variance_db2)


# JSON schema ---------------------------------------------------------------

_TOP_KEYS = {"radius_m", "intensity_per_m2", "max_subchannels_per_user",
             "classes", "radio", "shadowing"}
_RADIO_KEYS = {"tx_power_w", "noise_w", "carrier_frequency_hz",
               "reference_distance_m", "pathloss_exponent",
               "subchannel_bandwidth_khz", "min_sinr_linear",
               "attenuation_constant"}
_RADIO_OPTIONAL = {"attenuation_constant", "carrier_frequency_hz"}
_CLASS_KEYS = {"rate_kbps", "probability"}
_SHADOW_KEYS = {"mean_db", "variance_db2"}


def _check_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(f"{where}: missing keys {sorted(missing)}")


def scenario_from_dict(data: dict) -> CellScenario:
    """Build a scenario from the JSON object layout; unknown keys are rejected."""
    _check_keys(data, _TOP_KEYS, _TOP_KEYS, "scenario")
    radio = data["radio"]
    _check_keys(radio, _RADIO_KEYS, _RADIO_KEYS - _RADIO_OPTIONAL, "radio")
    if "carrier_frequency_hz" not in radio and "attenuation_constant" not in radio:
        raise ScenarioError("radio: need carrier_frequency_hz or attenuation_constant")
    shadow = data["shadowing"]
    _check_keys(shadow, _SHADOW_KEYS, _SHADOW_KEYS, "shadowing")
    if not isinstance(data["classes"], list):
        raise ScenarioError("classes: expected an array")
    classes = []
    for i, c in enumerate(data["classes"]):
        _check_keys(c, _CLASS_KEYS, _CLASS_KEYS, f"classes[{i}]")
        classes.append(ServiceClass(float(c["rate_kbps"]), float(c["probability"])))
    try:
        return CellScenario(
            radius_m=float(data["radius_m"]),
            intensity=float(data["intensity_per_m2"]),
            max_subchannels_per_user=int(data["max_subchannels_per_user"]),
            classes=tuple(classes),
            radio=RadioParams(
                tx_power_per_subchannel=float(radio["tx_power_w"]),
                noise_plus_interference=float(radio["noise_w"]),
                carrier_frequency=_opt_float(radio.get("carrier_frequency_hz")),
                reference_distance=float(radio["reference_distance_m"]),
                pathloss_exponent=float(radio["pathloss_exponent"]),
                subchannel_bandwidth=float(radio["subchannel_bandwidth_khz"]),
                min_sinr=float(radio["min_sinr_linear"]),
                explicit_attenuation_constant=_opt_float(radio.get("attenuation_constant")),
            ),
            shadowing=ShadowingParams(float(shadow["mean_db"]), float(shadow["variance_db2"])),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad value in scenario: {exc}") from exc


def _opt_float(x):
    return None if x is None else float(x)


def scenario_to_dict(scenario: CellScenario) -> dict:
    r = scenario.radio
    radio = {
        "tx_power_w": r.tx_power_per_subchannel,
        "noise_w": r.noise_plus_interference,
        "reference_distance_m": r.reference_distance,
        "pathloss_exponent": r.pathloss_exponent,
        "subchannel_bandwidth_khz": r.subchannel_bandwidth,
        "min_sinr_linear": r.min_sinr,
    }
    if r.carrier_frequency is not None:
        radio["carrier_frequency_hz"] = r.carrier_frequency
    if r.explicit_attenuation_constant is not None:
        radio["attenuation_constant"] = r.explicit_attenuation_constant
    return {
        "radius_m": scenario.radius_m,
        "intensity_per_m2": scenario.intensity,
        "max_subchannels_per_user": scenario.max_subchannels_per_user,
        "classes": [{"rate_kbps": c.rate_kbps, "probability": c.probability}
                    for c in scenario.classes],
        "radio": radio,
        "shadowing": {"mean_db": scenario.shadowing.mean_db,
                      "variance_db2": scenario.shadowing.variance_db2},
    }


def load_scenario(path) -> CellScenario:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario(scenario: CellScenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


def reference_scenario(gamma: float = 3.8, intensity: float = 10.0 / (math.pi * 300.0 ** 2),
                       probabilities=(0.5, 0.5)) -> CellScenario:
    """Urban macro-cell used throughout the tests and notebooks.

    R = 300 m, 1 W per subchannel, d_ref = 10 m, 2.6 GHz carrier, 180 kHz
    subchannels, minimum SINR 0.3 dB, centered shadowing with 10 dB^2
    variance and two classes at 1000 and 400 kb/s. The interference level
    puts the critical path-loss exponent near 3.95. The default intensity
    gives ten active users on average.
    """
    return CellScenario(
        radius_m=300.0,
        intensity=intensity,
        max_subchannels_per_user=8,
        classes=(ServiceClass(1000.0, probabilities[0]),
                 ServiceClass(400.0, probabilities[1])),
        radio=RadioParams(
            tx_power_per_subchannel=1.0,
            noise_plus_interference=1.07e-12,
            carrier_frequency=2.6e9,
            reference_distance=10.0,
            pathloss_exponent=gamma,
            subchannel_bandwidth=180.0,
            min_sinr=10.0 ** 0.03,
        ),
        shadowing=ShadowingParams(0.0, 10.0),
    )
