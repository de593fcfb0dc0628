"""Desk-scale model of a self-sustaining stress-sensing smartwatch.

The package covers the full pipeline: ECG/GSR feature extraction, an MLP
classifier in float and 32-bit fixed point, a calibrated cycle/energy model
for four embedded targets, and a dual-source energy-harvesting budget
simulator. ``stresswatch.cli`` wires it all into one command.
"""

from .biosignal_features import (
    FeatureVector,
    GsrTrace,
    RRSeries,
    WindowConfig,
    detect_r_peaks,
    extract_window_features,
    gsr_slope_features,
    nn50,
    rmssd,
    sdsd,
)
from .errors import (
    CalibrationError,
    ConfigError,
    DivergenceError,
    EmptySeriesError,
    FixedPointRangeError,
    InsufficientDataError,
    ParseError,
    ShapeError,
    StressWatchError,
)
from .harvest_sim import (
    BatteryState,
    HarvestScenario,
    Segment,
    SocSimResult,
    SourceModel,
    SustainabilityReport,
    builtin_scenarios,
    builtin_sources,
    daily_intake,
    indoor_day_scenario,
    outdoor_hour_scenario,
    scenario_from_config,
    segment_power_w,
    simulate_soc,
    sustainable_rate,
)
from .nn_core import (
    Activation,
    FootprintReport,
    LayerSpec,
    NetworkModel,
    build_mlp,
    build_network_a,
    build_network_b,
    classify,
    footprint,
    infer_float,
    load_fann,
    mse_gradients,
    mse_loss,
    read_fann,
    save_fann,
    train,
    write_fann,
)
from .perf_model import (
    CalibrationTable,
    CycleModel,
    DetectionEnergyModel,
    PlatformProfile,
    Prediction,
    build_profiles,
    builtin_calibration,
    calibration_report,
    derive_power,
    detection_energy,
    detection_energy_model,
    fit_cycle_model,
    load_calibration,
    predict,
    speedup,
)
from .quantizer import (
    FixedPointNet,
    QFormat,
    TanhTable,
    build_tanh_lut,
    dequantize_network,
    infer_fixed,
    quantize,
    quantize_inputs,
    tanh_lut_eval,
)

__version__ = "1.0.0"

__all__ = [
    "Activation",
    "BatteryState",
    "CalibrationError",
    "CalibrationTable",
    "ConfigError",
    "CycleModel",
    "DetectionEnergyModel",
    "DivergenceError",
    "EmptySeriesError",
    "FeatureVector",
    "FixedPointNet",
    "FixedPointRangeError",
    "FootprintReport",
    "GsrTrace",
    "HarvestScenario",
    "InsufficientDataError",
    "LayerSpec",
    "NetworkModel",
    "ParseError",
    "PlatformProfile",
    "Prediction",
    "QFormat",
    "RRSeries",
    "Segment",
    "ShapeError",
    "SocSimResult",
    "SourceModel",
    "StressWatchError",
    "SustainabilityReport",
    "TanhTable",
    "WindowConfig",
    "build_mlp",
    "build_network_a",
    "build_network_b",
    "build_profiles",
    "build_tanh_lut",
    "builtin_calibration",
    "builtin_scenarios",
    "builtin_sources",
    "calibration_report",
    "classify",
    "daily_intake",
    "dequantize_network",
    "derive_power",
    "detect_r_peaks",
    "detection_energy",
    "detection_energy_model",
    "extract_window_features",
    "fit_cycle_model",
    "footprint",
    "gsr_slope_features",
    "indoor_day_scenario",
    "infer_fixed",
    "infer_float",
    "load_calibration",
    "load_fann",
    "mse_gradients",
    "mse_loss",
    "nn50",
    "outdoor_hour_scenario",
    "predict",
    "quantize",
    "quantize_inputs",
    "read_fann",
    "rmssd",
    "save_fann",
    "scenario_from_config",
    "sdsd",
    "segment_power_w",
    "simulate_soc",
    "speedup",
    "sustainable_rate",
    "tanh_lut_eval",
    "train",
    "write_fann",
]
