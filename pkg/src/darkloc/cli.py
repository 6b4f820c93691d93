"""Command-line front end: reproducible runs serialized to CSV/JSON.

Every output embeds the fully resolved configuration (and so the master
seed); re-running any command from the embedded config regenerates the file
byte for byte.  The worker-pool size is deliberately excluded from the
embedded config because it must not influence results.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import COMMANDS, ConfigError, RunConfig, load_config, format_float
from .dissipative import dissipative_peak_study
from .ensemble import fit_power_law, run_sweep
from .model import RAD_PER_GHZ, make_disorder_spec, sample_realization
from .spectrum import dos_histogram, find_gap
from .transfer import transmission_log_t_batch


def _config_header(cfg: RunConfig):
    lines = [f"# darkloc {__version__}", f"# command: {cfg.command}", "# config:"]
    lines += ["# " + ln if ln else "#" for ln in cfg.to_yaml().splitlines()]
    return lines


def _sanitize(value):
    if isinstance(value, float) and not math.isfinite(value):
        return format_float(value)
    return value


def write_output(cfg: RunConfig, columns, rows, out_path, fmt, summary=None):
    parent = os.path.dirname(str(out_path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    if fmt == "csv":
        lines = _config_header(cfg)
        if summary:
            for key, val in summary.items():
                lines.append(f"# {key}: {val}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(
                format_float(v) if isinstance(v, float) else str(v) for v in row))
        payload = "\n".join(lines) + "\n"
    else:
        doc = {
            "version": __version__,
            "command": cfg.command,
            "config": cfg.resolved,
            "columns": list(columns),
            "rows": [[_sanitize(v) for v in row] for row in rows],
            "summary": {k: _sanitize(v) for k, v in (summary or {}).items()},
        }
        payload = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def _spec_from_cfg(cfg: RunConfig, params, n_realizations=None):
    dis = cfg.disorder
    return make_disorder_spec(
        dis["W"], params, dis["master_seed"],
        n_realizations or dis["n_realizations"],
        truncation=dis["truncation_sigma"],
    )


def cmd_dos(cfg: RunConfig, out, fmt, workers):
    params = cfg.params
    run = cfg.run
    spec = _spec_from_cfg(cfg, params)
    dos = dos_histogram(params, spec, run["n_qubits"],
                        (run["window_GHz"][0], run["window_GHz"][-1]),
                        run["n_bins"])
    try:
        f_lo, f_hi, width = find_gap(dos)
        summary = {"gap_f_lo_GHz": format_float(f_lo),
                   "gap_f_hi_GHz": format_float(f_hi),
                   "gap_width_MHz": format_float(width)}
        print(f"gap: [{f_lo:.4f}, {f_hi:.4f}] GHz, width {width:.1f} MHz")
    except ValueError as exc:
        summary = {"gap": f"none ({exc})"}
        print(f"gap: none ({exc})")
    rows = [(float(f), float(r)) for f, r in zip(dos.bin_centers, dos.rho)]
    write_output(cfg, ("f_GHz", "rho"), rows, out, fmt, summary)
    return 0


def _sweep_like(cfg, out, fmt, workers, engine):
    params = cfg.params
    run = cfg.run
    dis = cfg.disorder
    gamma_nr = 2e3 * math.pi * run.get("Gamma_nr_kHz", 0.0)
    lyapunov_opts = {}
    if engine == "lyapunov":
        lyapunov_opts["antithetic"] = bool(run.get("antithetic", True))
    table = run_sweep(
        params, run["f_GHz"], run["W_values"], run["n_qubits"],
        dis["n_realizations"], engine,
        master_seed=dis["master_seed"], truncation=dis["truncation_sigma"],
        gamma_nr=gamma_nr, workers=workers, lyapunov_opts=lyapunov_opts,
    )
    rows = [(r.f_GHz, r.W, r.mean_log_T, r.xi_N, r.n_realizations,
             r.bootstrap_std) for r in table.rows]
    write_output(cfg, table.columns, rows, out, fmt)
    failed = table.failed_cells
    for f, w, err in failed:
        print(f"FAILED cell f={f} GHz, W={w}: {err}", file=sys.stderr)
    return 3 if failed else 0


def cmd_xi(cfg, out, fmt, workers):
    return _sweep_like(cfg, out, fmt, workers, "lyapunov")


def cmd_sweep(cfg, out, fmt, workers):
    return _sweep_like(cfg, out, fmt, workers, cfg.run["engine"])


def cmd_transmission(cfg, out, fmt, workers):
    params = cfg.params
    run = cfg.run
    spec = _spec_from_cfg(cfg, params)
    f_grid = np.asarray(run["f_GHz"])
    columns = ("realization", "f_GHz", "T")
    rows = []
    marker_lines = {}
    for index in run["realization_indices"]:
        realization = sample_realization(spec, params, run["n_qubits"], index)
        marker_lines[index] = [float(v) for v in
                               np.sort(realization.omegas) / RAD_PER_GHZ]
        log_t = np.stack([
            transmission_log_t_batch(params, realization.omegas[None, :],
                                     float(f) * RAD_PER_GHZ)[0]
            for f in f_grid
        ])
        t = np.exp(log_t)
        rows += [(index, float(f), float(ti)) for f, ti in zip(f_grid, t)]
    summary = {f"qubit_frequencies_GHz_realization_{k}":
               "[" + ", ".join(format_float(v) for v in vals) + "]"
               for k, vals in marker_lines.items()}
    write_output(cfg, columns, rows, out, fmt, summary)
    return 0


def cmd_scaling(cfg, out, fmt, workers):
    params = cfg.params
    run = cfg.run
    dis = cfg.disorder
    table = run_sweep(
        params, [run["f_GHz"][0]], run["W_values"], run["n_qubits"],
        dis["n_realizations"], "lyapunov",
        master_seed=dis["master_seed"], truncation=dis["truncation_sigma"],
        workers=workers,
        lyapunov_opts={"antithetic": bool(run.get("antithetic", True))},
    )
    rows = []
    for r in table.rows:
        xi_std = (r.bootstrap_std * r.xi_N**2 / run["n_qubits"]
                  if math.isfinite(r.xi_N) else math.nan)
        rows.append((r.W, r.xi_N, xi_std))
    summary = {}
    ws = [r[0] for r in rows]
    xis = [r[1] for r in rows]
    if all(math.isfinite(x) and x > 0 for x in xis):
        fit = fit_power_law(ws, xis, seed=dis["master_seed"])
        summary = {"beta": format_float(fit.beta),
                   "beta_bootstrap_std": format_float(fit.bootstrap_std_beta),
                   "prefactor": format_float(fit.prefactor)}
        print(f"power-law exponent beta = {fit.beta:.4f} "
              f"+/- {fit.bootstrap_std_beta:.4f}")
    else:
        summary = {"beta": "nan"}
        print("power-law fit skipped: non-positive or non-finite xi values",
              file=sys.stderr)
    write_output(cfg, ("W", "xi", "xi_bootstrap_std"), rows, out, fmt, summary)
    return 0 if summary.get("beta") != "nan" else 3


def cmd_dissipative(cfg, out, fmt, workers):
    params = cfg.params
    run = cfg.run
    dis = cfg.disorder
    gamma_nrs = [2e3 * math.pi * k for k in run["Gamma_nr_kHz_values"]]
    rows = dissipative_peak_study(
        params, gamma_nrs, run["W_values"], dis["n_realizations"],
        dis["master_seed"], peak_f_ghz=run["peak_f_GHz"],
    )
    write_output(cfg, ("W", "Gamma_nr_kHz", "xi8_mean", "xi8_bootstrap_std"),
                 rows, out, fmt)
    return 0


_HANDLERS = {
    "dos": cmd_dos,
    "xi": cmd_xi,
    "transmission": cmd_transmission,
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
    "dissipative": cmd_dissipative,
}


def _resolve_workers(arg_value):
    if arg_value is not None:
        return max(1, int(arg_value))
    env = os.environ.get("DARKLOC_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="darkloc",
        description="disordered qubit-waveguide transport simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML config path")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--format", default=None, choices=("csv", "json"))
        p.add_argument("--seed", default=None, type=int,
                       help="override disorder.master_seed")
        p.add_argument("--workers", default=None, type=int,
                       help="worker processes (env DARKLOC_WORKERS)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, args.command)
        resolved = cfg.resolved
        if args.seed is not None:
            resolved["disorder"]["master_seed"] = int(args.seed)
        if args.format is not None:
            resolved["run"]["format"] = args.format
        if args.out is not None:
            resolved["run"]["out"] = args.out
        if resolved["run"]["out"] is None:
            resolved["run"]["out"] = f"darkloc_{args.command}.{resolved['run']['format']}"
        cfg = RunConfig.from_dict(args.command, resolved)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = cfg.run["out"]
    fmt = cfg.run["format"]
    workers = _resolve_workers(args.workers)
    code = _HANDLERS[args.command](cfg, out, fmt, workers)
    if code == 0:
        print(f"wrote {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
