"""Run configuration: YAML schema, validation, and unit conversion.

Config files carry three blocks (``model``, ``disorder``, ``run``) with all
frequencies as plain f in GHz and lengths in micrometers; conversion to
angular units happens here, once.  Unknown keys are rejected with the YAML
line they appear on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import yaml

from .model import (
    DEFAULT_D,
    DEFAULT_G,
    DEFAULT_J,
    DEFAULT_MU_GHZ,
    DEFAULT_N_INT,
    ModelParams,
    RAD_PER_GHZ,
    derive_params,
)


class ConfigError(ValueError):
    """Config validation failure with file/line context when available."""


_MODEL_KEYS = {"J_GHz", "g_GHz", "mu_GHz", "d_um", "N_int"}
_DISORDER_KEYS = {"W", "truncation_sigma", "master_seed", "n_realizations"}
_RUN_COMMON = {"out", "format"}
_RUN_KEYS = {
    "dos": _RUN_COMMON | {"n_qubits", "window_GHz", "n_bins"},
    "xi": _RUN_COMMON | {"f_GHz", "W_values", "n_qubits", "antithetic"},
    "transmission": _RUN_COMMON | {"f_GHz", "n_qubits", "realization_indices"},
    "sweep": _RUN_COMMON | {"f_GHz", "W_values", "n_qubits", "engine", "Gamma_nr_kHz"},
    "scaling": _RUN_COMMON | {"W_values", "f_GHz", "n_qubits", "antithetic"},
    "dissipative": _RUN_COMMON | {"W_values", "Gamma_nr_kHz_values", "n_qubits",
                                  "peak_f_GHz"},
}
COMMANDS = tuple(sorted(_RUN_KEYS))

_RUN_DEFAULTS = {
    "dos": {"n_qubits": 2000, "window_GHz": [7.80, 7.92], "n_bins": 120},
    "xi": {"f_GHz": {"min": 7.80, "max": 7.86, "count": 31}, "W_values": None,
           "n_qubits": 100_000, "antithetic": True},
    "transmission": {"f_GHz": {"min": 7.80, "max": 7.86, "count": 601},
                     "n_qubits": 8, "realization_indices": [0]},
    "sweep": {"f_GHz": {"min": 7.80, "max": 7.86, "count": 31}, "W_values": None,
              "n_qubits": 8, "engine": "lattice", "Gamma_nr_kHz": 0.0},
    "scaling": {"W_values": [0.01, 0.018, 0.032, 0.056, 0.1], "f_GHz": 7.82,
                "n_qubits": 1_000_000, "antithetic": True},
    "dissipative": {"W_values": None,
                    "Gamma_nr_kHz_values": [0.0, 100.0, 400.0, 1000.0],
                    "n_qubits": 8, "peak_f_GHz": None},
}


def _node_lines(node, prefix=""):
    """Map of dotted key path -> 1-based YAML line, for error messages."""
    lines = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}{key_node.value}"
            lines[path] = key_node.start_mark.line + 1
            lines.update(_node_lines(value_node, prefix=f"{path}."))
    return lines


def _load_yaml_with_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    data = yaml.safe_load(text) or {}
    try:
        node = yaml.compose(text)
        lines = _node_lines(node) if node is not None else {}
    except yaml.YAMLError:
        lines = {}
    return data, lines


def _err(path, lines, source, message):
    line = lines.get(path)
    where = f"{source}:{line}: " if line else f"{source}: "
    raise ConfigError(f"{where}{message}")


def _check_keys(block, allowed, block_name, lines, source):
    if not isinstance(block, dict):
        _err(block_name, lines, source, f"'{block_name}' must be a mapping")
    for key in block:
        if key not in allowed:
            _err(f"{block_name}.{key}", lines, source,
                 f"unknown key '{key}' in '{block_name}' "
                 f"(allowed: {', '.join(sorted(allowed))})")


def parse_grid(value, name="grid") -> np.ndarray:
    """A grid is a scalar, an explicit list, or {min, max, count}."""
    if isinstance(value, dict):
        extra = set(value) - {"min", "max", "count"}
        missing = {"min", "max", "count"} - set(value)
        if extra or missing:
            raise ConfigError(
                f"{name}: grid mapping takes exactly min/max/count "
                f"(missing {sorted(missing)}, unknown {sorted(extra)})")
        return np.linspace(float(value["min"]), float(value["max"]),
                           int(value["count"]))
    if isinstance(value, (list, tuple)):
        return np.asarray([float(v) for v in value])
    return np.asarray([float(value)])


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully resolved configuration for one CLI command."""

    command: str
    resolved: dict          # nested plain dict, defaults filled, GHz/um units

    @property
    def params(self) -> ModelParams:
        m = self.resolved["model"]
        return derive_params(
            J=m["J_GHz"] * RAD_PER_GHZ,
            g=m["g_GHz"] * RAD_PER_GHZ,
            d=m["d_um"] * 1e-6,
            n_int=m["N_int"],
            mu=m["mu_GHz"] * RAD_PER_GHZ,
        )

    @property
    def disorder(self) -> dict:
        return self.resolved["disorder"]

    @property
    def run(self) -> dict:
        return self.resolved["run"]

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.resolved, sort_keys=True,
                              default_flow_style=False)

    @classmethod
    def from_dict(cls, command: str, data: dict, source: str = "<dict>",
                  lines=None) -> "RunConfig":
        return _validate(command, data, source, lines or {})


def _validate(command, data, source, lines) -> RunConfig:
    if command not in _RUN_KEYS:
        raise ConfigError(f"unknown command {command!r}; choose from {COMMANDS}")
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    unknown = set(data) - {"model", "disorder", "run"}
    for key in sorted(unknown):
        _err(key, lines, source,
             f"unknown top-level key '{key}' (allowed: model, disorder, run)")

    model = dict(data.get("model") or {})
    disorder = dict(data.get("disorder") or {})
    run = dict(data.get("run") or {})
    _check_keys(model, _MODEL_KEYS, "model", lines, source)
    _check_keys(disorder, _DISORDER_KEYS, "disorder", lines, source)
    _check_keys(run, _RUN_KEYS[command], "run", lines, source)

    resolved_model = {
        "J_GHz": float(model.get("J_GHz", DEFAULT_J / RAD_PER_GHZ)),
        "g_GHz": float(model.get("g_GHz", DEFAULT_G / RAD_PER_GHZ)),
        "mu_GHz": float(model.get("mu_GHz", DEFAULT_MU_GHZ)),
        "d_um": float(model.get("d_um", DEFAULT_D * 1e6)),
        "N_int": int(model.get("N_int", DEFAULT_N_INT)),
    }

    if "W" not in disorder:
        _err("disorder", lines, source, "missing required key 'disorder.W'")
    if "master_seed" not in disorder:
        _err("disorder", lines, source,
             "missing required key 'disorder.master_seed'")
    trunc = disorder.get("truncation_sigma", 2.5)
    resolved_disorder = {
        "W": float(disorder["W"]),
        "truncation_sigma": None if trunc is None else float(trunc),
        "master_seed": int(disorder["master_seed"]),
        "n_realizations": int(disorder.get("n_realizations", 100)),
    }
    if resolved_disorder["W"] < 0:
        _err("disorder.W", lines, source, "W must be >= 0")
    if resolved_disorder["n_realizations"] < 1:
        _err("disorder.n_realizations", lines, source,
             "n_realizations must be >= 1")

    resolved_run = {"out": run.get("out"), "format": run.get("format", "csv")}
    if resolved_run["format"] not in ("csv", "json"):
        _err("run.format", lines, source, "format must be 'csv' or 'json'")
    for key, default in _RUN_DEFAULTS[command].items():
        resolved_run[key] = run.get(key, default)
    if resolved_run.get("W_values") is None and "W_values" in resolved_run:
        resolved_run["W_values"] = [resolved_disorder["W"]]

    # normalize grids to plain lists so the resolved dict serializes cleanly
    for key in ("f_GHz", "W_values", "window_GHz", "Gamma_nr_kHz_values",
                "peak_f_GHz"):
        if key in resolved_run and resolved_run[key] is not None:
            try:
                resolved_run[key] = [float(v) for v in
                                     parse_grid(resolved_run[key], key)]
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                _err(f"run.{key}", lines, source, f"bad grid: {exc}")
    if "realization_indices" in resolved_run:
        resolved_run["realization_indices"] = [
            int(i) for i in resolved_run["realization_indices"]]
    for key in ("n_qubits", "n_bins"):
        if key in resolved_run:
            resolved_run[key] = int(resolved_run[key])
    if "engine" in resolved_run and resolved_run["engine"] not in ("lattice",
                                                                   "dissipative"):
        _err("run.engine", lines, source,
             "engine must be 'lattice' or 'dissipative'")

    resolved = {"model": resolved_model, "disorder": resolved_disorder,
                "run": resolved_run}
    return RunConfig(command=command, resolved=resolved)


def load_config(path, command: str) -> RunConfig:
    """Load and validate a YAML config file for the given command."""
    data, lines = _load_yaml_with_lines(path)
    return _validate(command, data, str(path), lines)


def format_float(x: float) -> str:
    """17-significant-digit decimal (round-trip exact for 64-bit floats)."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"
