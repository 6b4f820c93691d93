"""Schema-validated readers for the darkloc CSV outputs.

Files carry a '#'-prefixed comment block (embedded config plus summary
key-value lines), then a comma-separated header row, then data.  Readers
validate the documented column sets and name any missing column.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import yaml

SCHEMAS = {
    "dos": {"f_GHz", "rho"},
    "sweep": {"f_GHz", "W", "mean_log_T", "xi_N", "n_realizations",
              "bootstrap_std"},
    "traces": {"realization", "f_GHz", "T"},
    "scaling": {"W", "xi", "xi_bootstrap_std"},
}


class SchemaError(ValueError):
    pass


def read_table(path):
    """(metadata dict, structured array) from one darkloc CSV."""
    text = Path(path).read_text()
    meta = {}
    body_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            stripped = line[1:].strip()
            if ":" in stripped and not stripped.endswith(":"):
                key, _, value = stripped.partition(":")
                meta[key.strip()] = value.strip()
        else:
            body_lines.append(line)
    if not body_lines:
        raise SchemaError(f"{path}: no data rows")
    data = np.genfromtxt(io.StringIO("\n".join(body_lines)), delimiter=",",
                         names=True)
    return meta, np.atleast_1d(data)


def _validate(path, data, schema_name):
    required = SCHEMAS[schema_name]
    have = set(data.dtype.names or ())
    missing = sorted(required - have)
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {', '.join(missing)} required by the "
            f"{schema_name} schema (found: {', '.join(sorted(have))})")
    return data


def read_dos(path):
    meta, data = read_table(path)
    return meta, _validate(path, data, "dos")


def read_sweep(path):
    meta, data = read_table(path)
    return meta, _validate(path, data, "sweep")


def read_scaling(path):
    meta, data = read_table(path)
    return meta, _validate(path, data, "scaling")


def read_traces(path):
    """Traces plus the per-realization qubit-frequency markers."""
    meta, data = read_table(path)
    data = _validate(path, data, "traces")
    markers = {}
    prefix = "qubit_frequencies_GHz_realization_"
    for key, value in meta.items():
        if key.startswith(prefix):
            markers[int(key[len(prefix):])] = [float(v) for v in
                                               yaml.safe_load(value)]
    return meta, data, markers
