"""How disorder reshapes the localization length across the band.

Sweeps the eight-qubit localization length xi_8 = -8/<log T> over frequency
and disorder strength and prints the three qualitatively different regimes:
ordinary Anderson suppression below the dark modes, disorder-assisted
transmission where the resonant cloud dilutes, and the crossover between
them.  Also tracks the suppression of the brightest dark-mode peak.
"""

import numpy as np

from darkloc import derive_params, peak_xi8, run_sweep

params = derive_params()
w_grid = [0.16, 0.47, 0.79, 1.1, 1.6, 2.04]

print("peak suppression (1000 realizations per point):")
for w_val in w_grid:
    f_peak, xi8, _ = peak_xi8(params, w_val, 1000, master_seed=3)
    print(f"  W = {w_val:<5}: xi_8(peak) = {xi8:7.2f} at f = {f_peak:.4f} GHz")

print("\nthree regimes (500 realizations per cell):")
f_grid = [7.810, 7.8315, 7.838, 7.850]
table = run_sweep(params, f_grid, [0.16, 0.79, 2.04], n_qubits=8,
                  n_realizations=500, master_seed=3)
xi = {(r.f_GHz, r.W): r.xi_N for r in table.rows}
labels = {
    7.810: "Anderson regime: xi_8 falls with disorder",
    7.8315: "crossover: falls, then recovers",
    7.838: "diluted-gap regime: xi_8 grows with disorder",
    7.850: "deeper in the gap: resonant trapping wins until W >~ 1.6",
}
for f in f_grid:
    row = "  ".join(f"{xi[(f, w)]:6.2f}" for w in (0.16, 0.79, 2.04))
    print(f"  f = {f:.4f} GHz:  xi_8(W=0.16, 0.79, 2.04) = {row}   "
          f"<- {labels[f]}")
