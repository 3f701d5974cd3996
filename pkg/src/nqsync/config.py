"""Run configuration: presets, config files, and flag overrides.

Resolution order, lowest to highest precedence: global defaults (the
fig2 reference parameter set), preset defaults, config file, command-line flags.
Config files are YAML (JSON is accepted too, being a subset).
"""

from __future__ import annotations

import copy
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from nqsync.errors import ConfigError, ParameterError
from nqsync.model import CavityMode, SystemParams, spin_flop_field
from nqsync.sweep import Axis, material

EXPERIMENTS = ("sync", "sweep", "dispersion", "stability", "materials")
PRESETS = ("fig2", "fig3", "fig4", "fig5")
H_UNITS = ("Hsp", "Hex")

PARAM_KEYS = (
    "h_ex", "h_an_ratio", "h", "h_unit", "g_ab", "g_ac", "g_bc",
    "kappa", "kappa_c", "omega_c_over_hsp", "delta_f_over_hsp", "cavity_mode",
)
OPTION_KEYS = ("axis1", "axis2", "materials", "workers", "metric", "window")
FILE_KEYS = PARAM_KEYS + OPTION_KEYS + ("preset", "experiment", "out", "plot")

GLOBAL_DEFAULTS: dict[str, Any] = {
    "h_ex": 1.0,
    "h_an_ratio": 0.0163,
    "h": 0.0,
    "h_unit": "Hsp",
    "g_ab": 1.0,
    "g_ac": 0.01,
    "g_bc": 0.01,
    "kappa": 0.001,
    "kappa_c": 0.003,
    "omega_c_over_hsp": 0.85,
    "delta_f_over_hsp": 0.05,
    "cavity_mode": "bright",
}

_FIG4_AXES = {
    "axis1": {"name": "g_ab", "start": 0.8, "stop": 1.0, "num": 101, "unit": "Hex"},
    "axis2": {"name": "h", "start": 0.0, "stop": 2.0, "num": 101, "unit": "Hsp"},
}

PRESET_DEFAULTS: dict[str, dict[str, Any]] = {
    "fig2": {"axis1": {"name": "h", "start": 0.0, "stop": 0.4, "num": 81, "unit": "Hsp"}},
    "fig3": {"axis1": {"name": "h", "start": 0.0, "stop": 0.4, "num": 401, "unit": "Hsp"},
             "window": [0.0, 1.0]},
    "fig4": {"g_ab": 0.9, "h": 1.8, **_FIG4_AXES},
    "fig5": {"g_ab": 0.9, "h": 1.8, **_FIG4_AXES, "materials": ["DPPH", "MnF2", "NaNiO2"]},
}


@dataclass
class RunConfig:
    experiment: str
    params: dict[str, Any]
    preset: str | None = None
    out: str | None = None
    plot: bool = False
    axis1: dict[str, Any] | None = None
    axis2: dict[str, Any] | None = None
    materials: list[str] | None = None
    workers: int = 1
    metric: str = "plain"
    window: list[float] = field(default_factory=lambda: [0.0, 1.0])

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        return cls(**copy.deepcopy(dict(data)))

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        return cls.from_dict(yaml.safe_load(text))

    def system_params(self) -> SystemParams:
        return to_system_params(self.params)

    def axes(self) -> tuple[Axis | None, Axis | None]:
        return (_axis(self.axis1, "axis1") if self.axis1 else None,
                _axis(self.axis2, "axis2") if self.axis2 else None)


def _number(key: str, value: Any) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}", key=key)
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}", key=key) from None
    if not math.isfinite(x):
        raise ConfigError(f"{key}: must be finite, got {value!r}", key=key)
    return x


def validate_params(raw: Mapping[str, Any]) -> dict[str, Any]:
    """Type-check and range-check parameter keys; returns a normalised copy."""
    out: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in PARAM_KEYS:
            raise ConfigError(f"unknown parameter key {key!r}", key=key)
        if key == "h_unit":
            if value not in H_UNITS:
                raise ConfigError(f"h_unit must be one of {H_UNITS}, got {value!r}", key=key)
            out[key] = value
        elif key == "cavity_mode":
            try:
                out[key] = CavityMode.parse(value).value
            except ParameterError:
                raise ConfigError(f"cavity_mode must be 'bright' or 'dark', got {value!r}", key=key) from None
        else:
            out[key] = _number(key, value)
    for key in ("kappa", "kappa_c", "h_ex"):
        if key in out and out[key] <= 0.0:
            raise ConfigError(f"{key} must be > 0, got {out[key]!r}", key=key)
    for key in ("g_ab", "g_ac", "g_bc", "h_an_ratio"):
        if key in out and out[key] < 0.0:
            raise ConfigError(f"{key} must be >= 0, got {out[key]!r}", key=key)
    return out


def to_system_params(params: Mapping[str, Any]) -> SystemParams:
    """Convert config keys (ratios and unit tags) to :class:`SystemParams`.

    Couplings and rates in the config are in units of H_ex; ``h`` follows
    ``h_unit``; cavity frequencies are fractions of the spin-flop field.
    """
    p = validate_params({**GLOBAL_DEFAULTS, **params})
    h_ex = p["h_ex"]
    h_an = p["h_an_ratio"] * h_ex
    h_sp = spin_flop_field(h_an, h_ex)
    h = p["h"] * (h_sp if p["h_unit"] == "Hsp" else h_ex)
    try:
        return SystemParams(
            h_ex_a=h_ex, h_ex_b=h_ex, h_an_a=h_an, h_an_b=h_an, h=h,
            g_ab=p["g_ab"] * h_ex, g_ac=p["g_ac"] * h_ex, g_bc=p["g_bc"] * h_ex,
            kappa_a=p["kappa"] * h_ex, kappa_b=p["kappa"] * h_ex, kappa_c=p["kappa_c"] * h_ex,
            omega_c=p["omega_c_over_hsp"] * h_sp, delta_f=p["delta_f_over_hsp"] * h_sp,
            cavity_mode=p["cavity_mode"],
        )
    except ParameterError as exc:
        key = {"kappa_a": "kappa", "kappa_b": "kappa"}.get(exc.key, exc.key)
        raise ConfigError(str(exc), key=key) from None


def parse_axis(text: str) -> dict[str, Any]:
    """``name:start:stop:num[:unit]`` as used on the command line."""
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"axis must be name:start:stop:num[:unit], got {text!r}", key="axis")
    spec: dict[str, Any] = {"name": parts[0], "start": _number("axis", parts[1]),
                            "stop": _number("axis", parts[2]), "num": int(_number("axis", parts[3]))}
    spec["unit"] = parts[4] if len(parts) == 5 else ("Hsp" if parts[0] == "h" else "Hex")
    return spec


def _axis(spec: Mapping[str, Any], key: str) -> Axis:
    try:
        name = spec["name"]
        unit = spec.get("unit", "Hsp" if name == "h" else "Hex")
        if "values" in spec:
            return Axis(name, tuple(spec["values"]), unit)
        num = int(spec["num"])
        if num < 1:
            raise ConfigError(f"{key}: num must be >= 1", key=key)
        return Axis.linspace(name, float(spec["start"]), float(spec["stop"]), num, unit)
    except KeyError as exc:
        raise ConfigError(f"{key}: missing field {exc.args[0]!r}", key=key) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}", key=key) from None
    except ParameterError as exc:
        raise ConfigError(f"{key}: {exc}", key=key) from None


def load_config_file(path: str | Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}", key="config") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}", key="config") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping", key="config")
    for key in data:
        if key not in FILE_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}", key=str(key))
    return data


def resolve_config(
    experiment: str,
    *,
    preset: str | None = None,
    file_values: Mapping[str, Any] | None = None,
    flag_values: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Merge defaults, preset, file and flags into a validated :class:`RunConfig`."""
    file_values = dict(file_values or {})
    flag_values = {k: v for k, v in (flag_values or {}).items() if v is not None}
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}", key="experiment")
    file_experiment = file_values.pop("experiment", None)
    if file_experiment is not None and file_experiment != experiment:
        raise ConfigError(
            f"config file is for experiment {file_experiment!r}, not {experiment!r}", key="experiment"
        )
    preset = flag_values.pop("preset", None) or preset or file_values.pop("preset", None)
    file_values.pop("preset", None)
    if preset is not None and preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; choose from {PRESETS}", key="preset")

    merged: dict[str, Any] = dict(GLOBAL_DEFAULTS)
    for layer in (PRESET_DEFAULTS.get(preset, {}), file_values, flag_values):
        merged.update(copy.deepcopy(layer))

    params = validate_params({k: merged.pop(k) for k in PARAM_KEYS})
    materials = merged.pop("materials", None)
    if isinstance(materials, str):
        materials = [m.strip() for m in materials.split(",") if m.strip()]
    if materials is not None:
        materials = [material(m).name for m in materials]
    workers = int(_number("workers", merged.pop("workers", 1)))
    if workers < 1:
        raise ConfigError("workers must be >= 1", key="workers")
    metric = merged.pop("metric", "plain")
    if metric not in ("plain", "bosonic"):
        raise ConfigError(f"metric must be 'plain' or 'bosonic', got {metric!r}", key="metric")
    window = [_number("window", w) for w in merged.pop("window", [0.0, 1.0])]
    if len(window) != 2 or not window[1] > window[0]:
        raise ConfigError(f"window must be [lo, hi] with hi > lo, got {window!r}", key="window")
    axes = {}
    for key in ("axis1", "axis2"):
        spec = merged.pop(key, None)
        if isinstance(spec, str):
            spec = parse_axis(spec)
        if spec is not None:
            _axis(spec, key)
            spec = dict(spec)
        axes[key] = spec
    cfg = RunConfig(
        experiment=experiment,
        params=params,
        preset=preset,
        out=None if merged.get("out") is None else str(merged["out"]),
        plot=bool(merged.get("plot", False)),
        axis1=axes["axis1"],
        axis2=axes["axis2"],
        materials=materials,
        workers=workers,
        metric=metric,
        window=window,
    )
    to_system_params(cfg.params)
    return cfg
