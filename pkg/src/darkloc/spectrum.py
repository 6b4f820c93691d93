"""Exact-diagonalization spectra: density of states and the gap above mu.

The interleaved site ordering keeps the full qubit+photon matrix at
bandwidth 2, so the whole spectrum of an N = 2000 system (dimension 5999)
comes out of a banded LAPACK solve in about a second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvals_banded

from .model import (
    DisorderRealization,
    DisorderSpec,
    ModelParams,
    RAD_PER_GHZ,
    SparseHamiltonian,
    build_full_hamiltonian,
    sample_realization,
)

#: Largest matrix dimension the dense/banded eigensolver will accept.
EIGENSOLVE_DIM_BUDGET = 20_000


def eigenfrequencies(hamiltonian: SparseHamiltonian) -> np.ndarray:
    """All eigenvalues (rad/s) of the banded Hamiltonian, ascending."""
    if hamiltonian.dimension > EIGENSOLVE_DIM_BUDGET:
        raise ValueError(
            f"dimension {hamiltonian.dimension} exceeds the eigensolve budget "
            f"{EIGENSOLVE_DIM_BUDGET}"
        )
    return eigvals_banded(hamiltonian.to_banded_lower(), lower=True)


@dataclass(frozen=True)
class DosResult:
    """Disorder-averaged density of states, per site per GHz."""

    bin_edges: np.ndarray       # GHz, length n_bins + 1
    rho: np.ndarray             # per site per GHz, length n_bins
    n_realizations: int
    window: tuple               # (f_min_GHz, f_max_GHz)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def dos_histogram(params: ModelParams, spec: DisorderSpec, n_qubits: int,
                  window_ghz, n_bins: int) -> DosResult:
    """Histogram of eigenfrequencies in the window, averaged over realizations.

    Normalization: rho integrated over the whole spectrum equals one per
    site, i.e. sum(rho * bin_width_GHz) * (N + N_gamma) recovers the total
    eigenvalue count when the window spans the full band.
    """
    f_lo, f_hi = float(window_ghz[0]), float(window_ghz[1])
    if not f_hi > f_lo:
        raise ValueError(f"empty frequency window [{f_lo}, {f_hi}]")
    if n_bins < 10:
        raise ValueError("need at least 10 bins")
    dim = n_qubits + params.n_photon_sites(n_qubits)
    counts = np.zeros(n_bins)
    edges = np.linspace(f_lo, f_hi, n_bins + 1)
    for index in range(spec.n_realizations):
        realization = sample_realization(spec, params, n_qubits, index)
        evals_ghz = eigenfrequencies(build_full_hamiltonian(params, realization)) / RAD_PER_GHZ
        hist, _ = np.histogram(evals_ghz, bins=edges)
        counts += hist
    bin_width = (f_hi - f_lo) / n_bins
    rho = counts / (spec.n_realizations * dim * bin_width)
    return DosResult(bin_edges=edges, rho=rho,
                     n_realizations=spec.n_realizations, window=(f_lo, f_hi))


def find_gap(dos: DosResult, threshold_fraction: float = 0.05):
    """Longest contiguous run of near-empty bins: (f_lo_GHz, f_hi_GHz, width_MHz).

    A bin counts as empty when rho < threshold_fraction * median(rho).
    """
    threshold = threshold_fraction * float(np.median(dos.rho))
    below = dos.rho < threshold
    if not below.any():
        raise ValueError("no bin falls below the gap threshold")
    best_len, best_end, run = 0, -1, 0
    for i, b in enumerate(below):
        run = run + 1 if b else 0
        if run > best_len:
            best_len, best_end = run, i
    f_lo = float(dos.bin_edges[best_end - best_len + 1])
    f_hi = float(dos.bin_edges[best_end + 1])
    return f_lo, f_hi, (f_hi - f_lo) * 1e3


def gap_width(dos: DosResult, threshold_fraction: float = 0.05) -> float:
    """Width (MHz) of the widest spectral gap in the histogram window."""
    return find_gap(dos, threshold_fraction)[2]


def effective_qubit_hamiltonian(params: ModelParams,
                                realization: DisorderRealization,
                                omega: float) -> np.ndarray:
    """Qubit-space Hamiltonian with the photons integrated out (cross-check).

    Dense complex N x N matrix: diagonal omega_i plus the photon-mediated
    coupling g^2 * [(omega - H_photon)^-1] between the coupled sites,
    evaluated as a discrete momentum sum over the finite periodic photon
    lattice of N_gamma sites.  Hermitian by the +k/-k pairing of the sum.
    """
    n = realization.n_qubits
    if n > 64:
        raise ValueError("dense cross-check limited to 64 qubits")
    n_gamma = params.n_photon_sites(n)
    k_index = np.arange(n_gamma)
    band = -2.0 * params.J * np.cos(2.0 * math.pi * k_index / n_gamma)
    if np.min(np.abs(omega - band)) < 1e-9 * params.J:
        raise ValueError(
            "probe frequency coincides with a photon lattice eigenfrequency"
        )
    positions = np.arange(n) * (params.n_int + 1)
    # resolvent of the periodic chain between qubit-coupled sites
    phase = np.exp(
        2j * math.pi * np.subtract.outer(positions, positions)[..., None]
        * k_index / n_gamma
    )
    resolvent = np.sum(phase / (omega - band), axis=-1) / n_gamma
    h_eff = params.g**2 * resolvent
    h_eff[np.diag_indices(n)] += realization.omegas
    return h_eff
