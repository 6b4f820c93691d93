"""Figure builders and the command-line entry point.

Rendering is deterministic: fixed style, fixed dpi, Agg backend, no
timestamps in the output, so the same CSV yields byte-identical images.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .readers import read_dos, read_scaling, read_sweep, read_traces  # noqa: E402
from .spec import KINDS, FigureSpec, load_style  # noqa: E402


def _new_figure(style):
    return plt.subplots(figsize=tuple(style["figsize"]), dpi=style["dpi"])


def build_dos(spec: FigureSpec):
    meta, data = read_dos(spec.inputs[0])
    style = spec.style["dos"]
    fig, ax = _new_figure(spec.style)
    ax.fill_between(data["f_GHz"], data["rho"], color=style["line_color"],
                    alpha=style["fill_alpha"])
    ax.plot(data["f_GHz"], data["rho"], color=style["line_color"], lw=1.2)
    if "gap_f_lo_GHz" in meta and "gap_f_hi_GHz" in meta:
        lo, hi = float(meta["gap_f_lo_GHz"]), float(meta["gap_f_hi_GHz"])
        ax.axvspan(lo, hi, color="0.85", zorder=0,
                   label=f"gap {float(meta['gap_width_MHz']):.0f} MHz")
        ax.legend(loc="upper right")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("density of states (1 / site / GHz)")
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    return fig


def build_traces(spec: FigureSpec):
    _, data, markers = read_traces(spec.inputs[0])
    style = spec.style["traces"]
    cmap = plt.get_cmap(style["colormap"])
    fig, ax = _new_figure(spec.style)
    indices = sorted(set(int(r) for r in data["realization"]))
    floor = float(style["floor"])
    for j, idx in enumerate(indices):
        sel = data["realization"] == idx
        t = np.maximum(data["T"][sel], floor if style["log_y"] else 0.0)
        ax.plot(data["f_GHz"][sel], t, lw=1.0, color=cmap(j % cmap.N),
                label=f"realization {idx}")
        for f_q in markers.get(idx, ()):
            ax.axvline(f_q, color=style["marker_color"], ls=":", lw=0.7,
                       zorder=0)
    if style["log_y"]:
        ax.set_yscale("log")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("power transmission T")
    ax.legend(loc="lower left", fontsize=8)
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    return fig


def build_heatmap(spec: FigureSpec):
    _, data = read_sweep(spec.inputs[0])
    style = spec.style["heatmap"]
    f_vals = np.unique(data["f_GHz"])
    w_vals = np.unique(data["W"])
    grid = np.full((w_vals.size, f_vals.size), np.nan)
    fi = {v: i for i, v in enumerate(f_vals)}
    wi = {v: i for i, v in enumerate(w_vals)}
    for row in data:
        grid[wi[row["W"]], fi[row["f_GHz"]]] = row["xi_N"]
    ceiling = float(style["xi_ceiling"])
    # divergent cells clip to the ceiling; failed (nan) cells stay blank
    grid = np.where(np.isnan(grid), np.nan,
                    np.where(np.isfinite(grid), np.minimum(grid, ceiling),
                             ceiling))

    fig, ax = _new_figure(spec.style)
    norm = LogNorm(vmin=max(np.nanmin(grid), 1e-2), vmax=np.nanmax(grid)) \
        if style["log_color"] else None
    mesh = ax.pcolormesh(f_vals, w_vals, grid, cmap=style["colormap"],
                         norm=norm, shading="nearest")
    levels = [lv for lv in style["contour_levels"]
              if np.nanmin(grid) < lv < np.nanmax(grid)]
    if levels and f_vals.size > 1 and w_vals.size > 1:
        cs = ax.contour(f_vals, w_vals, grid, levels=levels,
                        colors=style["contour_color"], linewidths=0.8)
        ax.clabel(cs, fontsize=7, fmt="%g")
    fig.colorbar(mesh, ax=ax, label="localization length (qubit spacings)")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("disorder strength W")
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    return fig


def build_scaling(spec: FigureSpec):
    meta, data = read_scaling(spec.inputs[0])
    style = spec.style["scaling"]
    fig, ax = _new_figure(spec.style)
    w = data["W"]
    xi = data["xi"]
    ax.errorbar(w, xi, yerr=data["xi_bootstrap_std"], fmt="o",
                color=style["point_color"], capsize=3, label="measured")
    # guide to the eye through the first point
    expo = float(style["guide_exponent"])
    w_line = np.geomspace(w.min(), w.max(), 64)
    guide = xi[0] * (w_line / w[0]) ** expo
    ax.plot(w_line, guide, "--", color=style["guide_color"],
            label=f"$W^{{{expo:g}}}$ guide")
    if "beta" in meta:
        ax.set_title(f"fitted exponent beta = {float(meta['beta']):.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("disorder strength W")
    ax.set_ylabel("localization length (qubit spacings)")
    ax.legend()
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    return fig


_BUILDERS = {
    "dos": build_dos,
    "traces": build_traces,
    "heatmap": build_heatmap,
    "scaling": build_scaling,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    fig = _BUILDERS[spec.kind](spec)
    fig.savefig(spec.output, dpi=spec.style["dpi"], metadata={"Software": ""})
    plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="darkloc-figures",
        description="render figures from darkloc CSV outputs",
    )
    parser.add_argument("--spec", help="figure spec YAML (kind/inputs/output)")
    parser.add_argument("--kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append",
                        help="input CSV (repeatable)")
    parser.add_argument("--out", dest="output")
    parser.add_argument("--style", help="style YAML overriding the defaults")
    parser.add_argument("--x-range", nargs=2, type=float, default=None)
    parser.add_argument("--y-range", nargs=2, type=float, default=None)
    args = parser.parse_args(argv)

    try:
        if args.spec:
            spec = FigureSpec.from_yaml(args.spec)
        else:
            if not (args.kind and args.inputs and args.output):
                parser.error("--kind, --in and --out are required without --spec")
            spec = FigureSpec(
                kind=args.kind,
                inputs=tuple(args.inputs),
                output=args.output,
                x_range=tuple(args.x_range) if args.x_range else None,
                y_range=tuple(args.y_range) if args.y_range else None,
                style=load_style(args.style),
            )
        out = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
