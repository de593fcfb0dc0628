"""Calibrated runtime and energy model for the embedded targets.

Four execution targets are modeled from measured per-classification cycle
counts and energies of two reference networks (A: 5-50-50-3, 3003 weights;
B: 26 layers, 81032 weights):

* ``cortex_m4``     - single MCU core at 64 MHz
* ``ibex``          - small RISC-V control core at 100 MHz
* ``ri5cy_single``  - one DSP-extended RISC-V core at 100 MHz
* ``ri5cy_multi8``  - eight such cores in parallel at 100 MHz

Cycle cost is interpolated linearly in the weight count (the two reference
points determine the line exactly); energy divides out to a near-constant
active power per platform, which the calibration check enforces to 3%.

Calibration constants can be replaced from a YAML document; see
``load_calibration`` for the schema.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .errors import CalibrationError, ConfigError

NETWORK_NAMES = ("A", "B")

_CLOCK_HZ = {
    "cortex_m4": 64e6,
    "ibex": 100e6,
    "ri5cy_single": 100e6,
    "ri5cy_multi8": 100e6,
}
_CYCLES = {
    "cortex_m4": {"A": 30210, "B": 902763},
    "ibex": {"A": 40661, "B": 955588},
    "ri5cy_single": {"A": 22772, "B": 519354},
    "ri5cy_multi8": {"A": 6126, "B": 108316},
}
_ENERGY_UJ = {
    "cortex_m4": {"A": 5.1, "B": 153.8},
    "ibex": {"A": 1.3, "B": 31.5},
    "ri5cy_single": {"A": 2.9, "B": 65.6},
    "ri5cy_multi8": {"A": 1.2, "B": 21.6},
}
_NETWORK_WEIGHTS = {"A": 3003, "B": 81032}

# Measured float-path cycles for network A on the M4's FPU; the fixed-point
# kernel's 30210 cycles make the integer path ~1.27x faster. Kept for
# reporting only - this codebase cannot re-measure hardware cycle counts.
CORTEX_M4_FLOAT_CYCLES_A = 38478

POWER_CONSISTENCY_LIMIT = 0.03

ACQUISITION_ENERGY_J = 600e-6
ACQUISITION_DURATION_S = 3.0
ECG_FRONTEND_POWER_W = 171e-6
GSR_FRONTEND_POWER_W = 30e-6
FEATURE_TIME_S = 50e-6
FEATURE_ENERGY_J = 1e-6


@dataclass(frozen=True)
class CalibrationTable:
    """Measured constants: clocks, per-classification cycles and energies.

    ``cycles`` and ``energy_uj`` are keyed [platform][network] with the two
    reference networks named "A" and "B"; ``network_weights`` records their
    weight counts, which the cycle fit interpolates between.
    """

    clock_hz: dict[str, float]
    cycles: dict[str, dict[str, int]]
    energy_uj: dict[str, dict[str, float]]
    network_weights: dict[str, int]

    @property
    def platforms(self) -> tuple[str, ...]:
        return tuple(self.cycles)


@dataclass(frozen=True)
class CycleModel:
    """cycles(W) = alpha * W + delta, exact at both calibration points.

    delta can be negative (it is for cortex_m4); predictions clamp at zero,
    so extrapolation below ~3000 weights is a rough guide, not a fit.
    """

    alpha: float
    delta: float

    def cycles(self, weight_count: int) -> int:
        return max(0, int(round(self.alpha * weight_count + self.delta)))


@dataclass(frozen=True)
class PlatformProfile:
    name: str
    clock_hz: float
    active_power_w: float
    cycle_model: CycleModel


@dataclass(frozen=True)
class Prediction:
    cycles: int
    time_s: float
    energy_j: float


@dataclass(frozen=True)
class DetectionEnergyModel:
    """Cost of one full stress detection: acquire, extract, classify.

    The acquisition energy is a measured whole-front-end figure for the
    3 s sampling window; it is close to, but not exactly, the sum of the
    two front-end powers times the window (kept here for reference).
    """

    acquisition_energy_j: float
    acquisition_duration_s: float
    ecg_frontend_power_w: float
    gsr_frontend_power_w: float
    feature_time_s: float
    feature_energy_j: float
    classify_energy_j: dict[str, float]

    def total_j(self, platform: str) -> float:
        if platform not in self.classify_energy_j:
            raise ConfigError(
                f"unknown platform {platform!r}; "
                f"choose from {sorted(self.classify_energy_j)}"
            )
        return (
            self.acquisition_energy_j
            + self.feature_energy_j
            + self.classify_energy_j[platform]
        )


def builtin_calibration() -> CalibrationTable:
    """The stock table for the four modeled targets."""
    return CalibrationTable(
        clock_hz=dict(_CLOCK_HZ),
        cycles={p: dict(v) for p, v in _CYCLES.items()},
        energy_uj={p: dict(v) for p, v in _ENERGY_UJ.items()},
        network_weights=dict(_NETWORK_WEIGHTS),
    )


def _validate_table(table: CalibrationTable) -> None:
    names = set(table.network_weights)
    if names != set(NETWORK_NAMES):
        raise ConfigError(f"network_weights must define exactly A and B, got {sorted(names)}")
    if len(set(table.network_weights.values())) != 2:
        raise CalibrationError("the two reference networks need distinct weight counts")
    for p in table.cycles:
        if p not in table.clock_hz or not table.clock_hz[p] > 0:
            raise ConfigError(f"platform {p!r} needs a positive clock_hz")
        for n in NETWORK_NAMES:
            if n not in table.cycles[p] or table.cycles[p][n] <= 0:
                raise ConfigError(f"platform {p!r} needs positive cycles for network {n}")
            if n not in table.energy_uj.get(p, {}) or table.energy_uj[p][n] <= 0:
                raise ConfigError(f"platform {p!r} needs positive energy_uj for network {n}")


def fit_cycle_model(table: CalibrationTable) -> dict[str, CycleModel]:
    """Per-platform two-point linear fit of cycles against weight count."""
    _validate_table(table)
    w_a = table.network_weights["A"]
    w_b = table.network_weights["B"]
    models = {}
    for p in table.cycles:
        c_a, c_b = table.cycles[p]["A"], table.cycles[p]["B"]
        alpha = (c_b - c_a) / (w_b - w_a)
        models[p] = CycleModel(alpha=alpha, delta=c_a - alpha * w_a)
    return models


def derive_power(table: CalibrationTable) -> dict[str, float]:
    """Active power per platform from energy/time, averaged over A and B.

    The constant-power model only holds if both networks imply nearly the
    same power; a deviation from the mean above 3% fails calibration.
    """
    _validate_table(table)
    powers = {}
    for p in table.cycles:
        per_net = [
            table.energy_uj[p][n] * 1e-6 / (table.cycles[p][n] / table.clock_hz[p])
            for n in NETWORK_NAMES
        ]
        mean = float(np.mean(per_net))
        worst = max(abs(v - mean) / mean for v in per_net)
        if worst > POWER_CONSISTENCY_LIMIT:
            raise CalibrationError(
                f"platform {p!r}: A/B power disagreement {worst:.2%} "
                f"exceeds {POWER_CONSISTENCY_LIMIT:.0%}"
            )
        powers[p] = mean
    return powers


def build_profiles(table: CalibrationTable | None = None) -> dict[str, PlatformProfile]:
    """Fitted, validated profiles for every platform in the table."""
    if table is None:
        table = builtin_calibration()
    models = fit_cycle_model(table)
    powers = derive_power(table)
    profiles = {}
    for p in table.cycles:
        profile = PlatformProfile(p, table.clock_hz[p], powers[p], models[p])
        for n in NETWORK_NAMES:
            got = profile.cycle_model.cycles(table.network_weights[n])
            if got != table.cycles[p][n]:
                raise CalibrationError(
                    f"platform {p!r}: fit predicts {got} cycles for network {n}, "
                    f"table says {table.cycles[p][n]}"
                )
        profiles[p] = profile
    return profiles


def predict(net, profile: PlatformProfile) -> Prediction:
    """Cycles, wall time and energy for one classification of ``net``.

    ``net`` is anything with a ``weight_count`` (float or fixed network).
    Energy is time x active power; at the calibration points the measured
    per-classification energies differ from this product by up to ~1%, so
    tables of the reference networks should quote the measured values.
    """
    cycles = profile.cycle_model.cycles(int(net.weight_count))
    time_s = cycles / profile.clock_hz
    return Prediction(cycles, time_s, time_s * profile.active_power_w)


def speedup(table: CalibrationTable, platform: str, network: str,
            baseline: str = "cortex_m4") -> float:
    """Cycle-count ratio baseline/platform for one reference network."""
    return table.cycles[baseline][network] / table.cycles[platform][network]


def detection_energy_model(table: CalibrationTable | None = None) -> DetectionEnergyModel:
    if table is None:
        table = builtin_calibration()
    _validate_table(table)
    return DetectionEnergyModel(
        acquisition_energy_j=ACQUISITION_ENERGY_J,
        acquisition_duration_s=ACQUISITION_DURATION_S,
        ecg_frontend_power_w=ECG_FRONTEND_POWER_W,
        gsr_frontend_power_w=GSR_FRONTEND_POWER_W,
        feature_time_s=FEATURE_TIME_S,
        feature_energy_j=FEATURE_ENERGY_J,
        classify_energy_j={
            p: table.energy_uj[p]["A"] * 1e-6 for p in table.cycles
        },
    )


def detection_energy(platform: str, table: CalibrationTable | None = None) -> float:
    """Joules for one detection: acquisition + features + classification."""
    return detection_energy_model(table).total_j(platform)


def calibration_report(table: CalibrationTable | None = None) -> list[dict]:
    """One row per (platform, network): the measured constants plus the
    derived time and speedup against the M4 baseline."""
    if table is None:
        table = builtin_calibration()
    _validate_table(table)
    rows = []
    for p in table.cycles:
        for n in NETWORK_NAMES:
            cycles = table.cycles[p][n]
            rows.append({
                "platform": p,
                "network": n,
                "cycles": cycles,
                "time_us": cycles / table.clock_hz[p] * 1e6,
                "energy_uj": table.energy_uj[p][n],
                "speedup_vs_cortex_m4": speedup(table, p, n),
            })
    return rows


def load_calibration(path) -> CalibrationTable:
    """Read a calibration table from a YAML document.

    Schema::

        platforms:
          cortex_m4:
            clock_hz: 64000000
            cycles:    {A: 30210, B: 902763}
            energy_uj: {A: 5.1,   B: 153.8}
          ...
        networks:            # optional, defaults to the stock reference nets
          A: {weights: 3003}
          B: {weights: 81032}
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("platforms"), dict):
        raise ConfigError(f"{path}: expected a mapping with a 'platforms' section")

    clock_hz: dict[str, float] = {}
    cycles: dict[str, dict[str, int]] = {}
    energy: dict[str, dict[str, float]] = {}
    for p, entry in doc["platforms"].items():
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: platform {p!r} must be a mapping")
        try:
            clock_hz[p] = float(entry["clock_hz"])
            cycles[p] = {n: int(entry["cycles"][n]) for n in NETWORK_NAMES}
            energy[p] = {n: float(entry["energy_uj"][n]) for n in NETWORK_NAMES}
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: platform {p!r} is incomplete: {exc}") from None

    weights = dict(_NETWORK_WEIGHTS)
    if "networks" in doc:
        try:
            weights = {n: int(doc["networks"][n]["weights"]) for n in NETWORK_NAMES}
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: invalid 'networks' section: {exc}") from None

    table = CalibrationTable(clock_hz, cycles, energy, weights)
    _validate_table(table)
    return table
