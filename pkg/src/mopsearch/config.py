"""Run configuration files (TOML) for the damage-location experiment.

Validation is strict: unknown keys are rejected and every violation is
reported, not just the first.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

_TOP_KEYS = {"model", "sensors", "damage", "search", "twin", "measurements", "output"}
_MODEL_KEYS = {"file", "builtin", "theory", "n_modes"}
_SENSOR_KEYS = {"nodes"}
_DAMAGE_KEYS = {"max_severity", "theta_min", "severity", "center", "extent"}
_SEARCH_KEYS = {"hof_threshold", "resolution_exponent", "budget", "weights"}
_TWIN_KEYS = {"severity", "center", "extent", "noise_freq", "noise_shape", "seed"}
_MEAS_KEYS = {"healthy", "damaged"}
_OUTPUT_KEYS = {"directory"}


class ConfigError(ValueError):
    """Configuration rejected; ``errors`` lists every violation."""

    def __init__(self, source: str, errors: list[str]):
        self.errors = list(errors)
        super().__init__(f"{source}: " + "; ".join(self.errors))


@dataclass(frozen=True)
class TwinSpec:
    """Synthetic-twin scenario: injected damage plus noise levels and seed."""

    severity: float
    center: float
    extent: float
    noise_freq: float = 0.0
    noise_shape: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    model_file: str | None
    builtin_model: str | None
    theory: str | None
    n_modes: int
    sensor_nodes: tuple[int, ...] | None
    max_severity: float
    theta_min: float
    bounds_override: tuple[tuple[float, float], ...] | None
    hof_threshold: int
    resolution_exponent: int
    budget: int | None
    weights: tuple[float, float] | None
    twin: TwinSpec | None
    measured_healthy: str | None
    measured_damaged: str | None
    output_dir: str


def _check_keys(table: dict, allowed: set[str], where: str, errors: list[str]) -> None:
    for key in table:
        if key not in allowed:
            errors.append(f"unknown key '{key}' in [{where}]")


def _positive_int(table: dict, key: str, where: str, errors: list[str],
                  default=None, minimum=1):
    if key not in table:
        if default is None:
            errors.append(f"[{where}]: missing {key}")
            return minimum
        return default
    v = table[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        errors.append(f"[{where}]: {key} must be an integer >= {minimum}")
        return minimum
    return v


def _interval(table: dict, key: str, where: str, errors: list[str]):
    if key not in table:
        return None
    v = table[key]
    if not (isinstance(v, list) and len(v) == 2 and
            all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
            and float(v[0]) < float(v[1])):
        errors.append(f"[{where}]: {key} must be [lower, upper] with lower < upper")
        return None
    return (float(v[0]), float(v[1]))


def parse_config(data: dict, source: str = "<config>") -> RunConfig:
    errors: list[str] = []
    _check_keys(data, _TOP_KEYS, "top level", errors)
    model = data.get("model", {})
    sensors = data.get("sensors", {})
    damage = data.get("damage", {})
    search = data.get("search", {})
    twin = data.get("twin")
    meas = data.get("measurements")
    output = data.get("output", {})
    _check_keys(model, _MODEL_KEYS, "model", errors)
    _check_keys(sensors, _SENSOR_KEYS, "sensors", errors)
    _check_keys(damage, _DAMAGE_KEYS, "damage", errors)
    _check_keys(search, _SEARCH_KEYS, "search", errors)
    _check_keys(output, _OUTPUT_KEYS, "output", errors)

    model_file = model.get("file")
    builtin = model.get("builtin")
    if (model_file is None) == (builtin is None):
        errors.append("[model]: give exactly one of file / builtin")
    theory = model.get("theory")
    if theory is not None and theory not in ("euler-bernoulli", "timoshenko"):
        errors.append(f"[model]: unknown theory '{theory}'")
    n_modes = _positive_int(model, "n_modes", "model", errors, default=5)

    sensor_nodes = None
    if "nodes" in sensors:
        nodes = sensors["nodes"]
        if not (isinstance(nodes, list) and nodes
                and all(isinstance(v, int) and v >= 0 for v in nodes)):
            errors.append("[sensors]: nodes must be a nonempty list of node indices")
        else:
            sensor_nodes = tuple(nodes)

    max_severity = damage.get("max_severity", 0.3)
    if not (isinstance(max_severity, (int, float)) and 0.0 < float(max_severity) <= 1.0):
        errors.append("[damage]: max_severity must be in (0, 1]")
        max_severity = 0.3
    theta_min = damage.get("theta_min", 0.15)
    if not (isinstance(theta_min, (int, float)) and 0.0 < float(theta_min) < 1.0):
        errors.append("[damage]: theta_min must be in (0, 1)")
        theta_min = 0.15
    intervals = [_interval(damage, key, "damage", errors)
                 for key in ("severity", "center", "extent")]
    bounds_override = None
    if any(iv is not None for iv in intervals):
        if not all(iv is not None for iv in intervals):
            errors.append("[damage]: bounds need all of severity, center, extent")
        else:
            bounds_override = tuple(intervals)

    hof_threshold = _positive_int(search, "hof_threshold", "search", errors, default=50)
    resolution = _positive_int(search, "resolution_exponent", "search", errors, default=20)
    budget = None
    if "budget" in search:
        budget = _positive_int(search, "budget", "search", errors)
    weights = None
    if "weights" in search:
        w = search["weights"]
        if not (isinstance(w, list) and len(w) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                        and float(v) > 0 for v in w)):
            errors.append("[search]: weights must be two positive numbers")
        else:
            weights = (float(w[0]), float(w[1]))

    twin_spec = None
    if (twin is None) == (meas is None):
        errors.append("give exactly one of [twin] / [measurements]")
    if twin is not None:
        _check_keys(twin, _TWIN_KEYS, "twin", errors)
        missing = [k for k in ("severity", "center", "extent") if k not in twin]
        if missing:
            errors.append(f"[twin]: missing {', '.join(missing)}")
        else:
            seed = twin.get("seed", 0)
            if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
                errors.append("[twin]: seed must be a nonnegative integer")
                seed = 0
            try:
                twin_spec = TwinSpec(
                    severity=float(twin["severity"]),
                    center=float(twin["center"]),
                    extent=float(twin["extent"]),
                    noise_freq=float(twin.get("noise_freq", 0.0)),
                    noise_shape=float(twin.get("noise_shape", 0.0)),
                    seed=seed,
                )
            except (TypeError, ValueError):
                errors.append("[twin]: severity/center/extent/noise must be numbers")
    measured_healthy = measured_damaged = None
    if meas is not None:
        _check_keys(meas, _MEAS_KEYS, "measurements", errors)
        if "healthy" not in meas or "damaged" not in meas:
            errors.append("[measurements]: need healthy and damaged CSV paths")
        else:
            measured_healthy = str(meas["healthy"])
            measured_damaged = str(meas["damaged"])

    if "directory" not in output:
        errors.append("[output]: missing directory")
    out_dir = str(output.get("directory", "out"))

    if errors:
        raise ConfigError(source, errors)
    return RunConfig(
        model_file=model_file,
        builtin_model=builtin,
        theory=theory,
        n_modes=n_modes,
        sensor_nodes=sensor_nodes,
        max_severity=float(max_severity),
        theta_min=float(theta_min),
        bounds_override=bounds_override,
        hof_threshold=hof_threshold,
        resolution_exponent=resolution,
        budget=budget,
        weights=weights,
        twin=twin_spec,
        measured_healthy=measured_healthy,
        measured_damaged=measured_damaged,
        output_dir=out_dir,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), [f"cannot read file: {exc}"]) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), [f"invalid TOML: {exc}"]) from exc
    return parse_config(data, source=str(path))
