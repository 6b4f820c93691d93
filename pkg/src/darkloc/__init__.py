"""darkloc: photon transport through disordered qubit-waveguide arrays.

Transfer-matrix and exact-diagonalization tools for the one-dimensional
lattice model of qubits side-coupled to a photonic chain: transmission
spectra, Lyapunov localization lengths, densities of states, and
disorder-ensemble statistics, all reproducible from explicit seeds.
"""

__version__ = "0.1.0"

from .dissipative import (
    DissipationParams,
    chain_log_t_batch,
    chain_scattering_dissipative,
    chain_transmission_dissipative,
    dissipative_peak_study,
    qubit_reflection,
    qubit_transfer_matrix,
)
from .ensemble import (
    PowerLawFit,
    SweepTable,
    bootstrap_ci,
    bootstrap_diff_ci,
    draw_ensemble,
    effective_disorder,
    fit_power_law,
    peak_xi8,
    run_sweep,
)
from .model import (
    DisorderRealization,
    DisorderSpec,
    ModelParams,
    OnsiteProfile,
    PoleConditionError,
    SparseHamiltonian,
    build_full_hamiltonian,
    derive_params,
    effective_onsite,
    ghz_to_rad,
    make_disorder_spec,
    rad_to_ghz,
    sample_realization,
    stream_qubit_frequencies,
)
from .spectrum import (
    DosResult,
    dos_histogram,
    effective_qubit_hamiltonian,
    eigenfrequencies,
    find_gap,
    gap_width,
)
from .transfer import (
    LeadSpec,
    LyapunovEstimate,
    ScatteringResult,
    lead_transmission,
    lyapunov_xi,
    scattering_oracle,
    transmission_log_t_batch,
    xi_from_log_transmission,
    xi_from_transmission,
)

__all__ = [name for name in dir() if not name.startswith("_")]
