"""Physical parameters, disorder sampling, and Hamiltonian construction.

Internal unit for every energy/frequency-like quantity is angular frequency
in rad/s.  All user-facing I/O (config files, CSV output) uses ordinary
frequency in GHz with f = omega / 2*pi; lengths cross the boundary in
micrometers.  The conversion happens exactly once, at the boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

#: rad/s per GHz of ordinary frequency.
RAD_PER_GHZ = TWO_PI * 1e9


def ghz_to_rad(f_ghz):
    """Ordinary frequency in GHz -> angular frequency in rad/s."""
    return np.asarray(f_ghz, dtype=float) * RAD_PER_GHZ


def rad_to_ghz(omega):
    """Angular frequency in rad/s -> ordinary frequency in GHz."""
    return np.asarray(omega, dtype=float) / RAD_PER_GHZ


class PoleConditionError(ValueError):
    """Probe frequency coincides with a qubit frequency (onsite energy pole)."""

    def __init__(self, indices, omega):
        self.indices = list(indices)
        self.omega = omega
        super().__init__(
            f"probe frequency {omega:.6e} rad/s resonant with qubit(s) {self.indices}"
        )


@dataclass(frozen=True)
class ModelParams:
    """Lattice-model constants and derived quantities (all angular, rad/s)."""

    J: float            # photon hopping
    g: float            # qubit-photon coupling
    d: float            # qubit spacing, meters
    n_int: int          # intermediate photon sites per qubit gap
    mu: float           # disorder-distribution center
    d_gamma: float = field(init=False)   # photon lattice spacing, meters
    gamma10: float = field(init=False)   # single-qubit radiative width, g^2/J
    c: float = field(init=False)         # band-center photon speed, 2*J*d_gamma

    def __post_init__(self):
        object.__setattr__(self, "d_gamma", self.d / (self.n_int + 1))
        object.__setattr__(self, "gamma10", self.g**2 / self.J)
        object.__setattr__(self, "c", 2.0 * self.J * self.d_gamma)

    def n_photon_sites(self, n_qubits: int) -> int:
        return (self.n_int + 1) * n_qubits - self.n_int


# Device values the model is calibrated to: J and g follow from the measured
# photon speed c = 1.8e8 m/s, qubit spacing d = 400 um, and radiative width
# gamma10/2pi = 6.4 MHz.
DEFAULT_J = 4.5e11
DEFAULT_G = 4.25e9
DEFAULT_D = 400e-6
DEFAULT_N_INT = 1
DEFAULT_MU_GHZ = 7.835


def derive_params(J=DEFAULT_J, g=DEFAULT_G, d=DEFAULT_D, n_int=DEFAULT_N_INT,
                  mu=None) -> ModelParams:
    """Validate raw inputs and fill the derived fields.

    ``mu`` defaults to the device center frequency (7.835 GHz).  Raises on
    non-finite or non-positive inputs; an even ``n_int`` is legal but warned
    against (it adds a spurious half-period phase between qubit-coupled
    sites, producing artificial inter-qubit resonances).
    """
    if mu is None:
        mu = float(ghz_to_rad(DEFAULT_MU_GHZ))
    for name, val in (("J", J), ("g", g), ("d", d), ("mu", mu)):
        if not math.isfinite(val):
            raise ValueError(f"{name} must be finite, got {val!r}")
        if val <= 0 and name != "g":
            raise ValueError(f"{name} must be positive, got {val!r}")
    if g < 0 or not math.isfinite(g):
        raise ValueError(f"g must be non-negative, got {g!r}")
    if int(n_int) != n_int or n_int < 0:
        raise ValueError(f"n_int must be a non-negative integer, got {n_int!r}")
    n_int = int(n_int)
    if n_int % 2 == 0:
        warnings.warn(
            "even n_int misrepresents the waveguide dispersion between qubits; "
            "prefer odd values",
            UserWarning,
            stacklevel=2,
        )
    params = ModelParams(J=float(J), g=float(g), d=float(d), n_int=n_int, mu=float(mu))
    if params.gamma10 / params.J > 1e-2:
        warnings.warn(
            f"gamma10/J = {params.gamma10 / params.J:.2e} is not small; the "
            "narrow-band reduction of the model is unreliable here",
            UserWarning,
            stacklevel=2,
        )
    return params


@dataclass(frozen=True)
class DisorderSpec:
    """Ensemble definition for Gaussian qubit-frequency disorder."""

    sigma_omega: float          # standard deviation, rad/s
    W: float                    # dimensionless, sigma_omega / gamma10
    truncation: float | None    # half-width of the allowed window in units of sigma
    master_seed: int
    n_realizations: int

    def __post_init__(self):
        if self.W < 0:
            raise ValueError(f"W must be >= 0, got {self.W}")
        if self.truncation is not None and self.truncation <= 0:
            raise ValueError("truncation must be positive when enabled")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")


def make_disorder_spec(W, params: ModelParams, master_seed, n_realizations,
                       truncation=2.5) -> DisorderSpec:
    """Build a DisorderSpec from the dimensionless strength W = sigma/gamma10.

    ``truncation`` defaults to 2.5 sigma (the window used when driving the
    physical device); pass None to sample the untruncated Gaussian.
    """
    return DisorderSpec(
        sigma_omega=float(W) * params.gamma10,
        W=float(W),
        truncation=truncation if truncation is None else float(truncation),
        master_seed=int(master_seed),
        n_realizations=int(n_realizations),
    )


@dataclass(frozen=True)
class DisorderRealization:
    """One draw of qubit frequencies, reproducible from (seed_used, index)."""

    omegas: np.ndarray
    realization_index: int
    seed_used: int

    def __post_init__(self):
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=float))

    @property
    def n_qubits(self) -> int:
        return self.omegas.size


def _truncated_standard_normal(rng, n, truncation):
    """n standard-normal draws, rejection-resampled into |z| <= truncation."""
    z = rng.standard_normal(n)
    if truncation is not None:
        bad = np.abs(z) > truncation
        while bad.any():
            z[bad] = rng.standard_normal(int(bad.sum()))
            bad = np.abs(z) > truncation
    return z


def realization_rng(spec: DisorderSpec, index: int) -> np.random.Generator:
    """Private generator for one realization; independent of any other index."""
    return np.random.default_rng(np.random.SeedSequence((spec.master_seed, index)))


#: Fixed RNG-consumption chunk: the draw sequence of a realization is defined
#: as the concatenation of rejection-sampled chunks of this size, so array
#: and streamed access (or any prefix length) see bit-identical values.
_DRAW_CHUNK = 1 << 16


def _standard_normal_chunks(spec: DisorderSpec, index: int, n_total: int):
    rng = realization_rng(spec, index)
    remaining = int(n_total)
    while remaining > 0:
        n = min(_DRAW_CHUNK, remaining)
        yield _truncated_standard_normal(rng, n, spec.truncation)
        remaining -= n


def sample_realization(spec: DisorderSpec, params: ModelParams, n_qubits: int,
                       index: int) -> DisorderRealization:
    """Draw one disorder realization of ``n_qubits`` qubit frequencies.

    Gaussian with mean mu and std sigma_omega; draws outside the truncation
    window are rejected and redrawn, so the in-window distribution keeps the
    Gaussian shape.  Bit-identical for fixed (master_seed, index) regardless
    of evaluation order.  The underlying standard-normal stream depends only
    on (master_seed, index), so ensembles at different W share their
    normalized draws.
    """
    if index >= spec.n_realizations:
        raise IndexError(
            f"realization index {index} >= n_realizations {spec.n_realizations}"
        )
    if index < 0:
        raise IndexError("realization index must be non-negative")
    z = np.concatenate(list(_standard_normal_chunks(spec, index, int(n_qubits))))
    omegas = params.mu + spec.sigma_omega * z
    return DisorderRealization(omegas=omegas, realization_index=index,
                               seed_used=spec.master_seed)


def stream_qubit_frequencies(spec: DisorderSpec, params: ModelParams,
                             n_qubits: int, index: int, sign=1.0):
    """Yield the realization's frequencies chunk by chunk (O(chunk) memory).

    The chunked stream and :func:`sample_realization` consume the
    per-(master_seed, index) generator identically, so a streamed
    realization of length N is bit-identical to the array version.
    ``sign`` flips the draws around mu (the Gaussian is symmetric, so
    sign=-1 yields an equally probable mirrored realization).
    """
    for z in _standard_normal_chunks(spec, index, n_qubits):
        yield params.mu + sign * spec.sigma_omega * z


#: Detunings below POLE_EPS * gamma10 count as exact resonance.
POLE_EPS = 1e-6


def onsite_energies(omegas, omega, params: ModelParams):
    """Raw effective onsite energies g^2/(omega - omega_i) at the qubit sites.

    Returns (eps, pole_mask); eps entries under the pole cutoff are computed
    from the detuning clamped to +/- POLE_EPS*gamma10 so the array stays
    finite (a clamped entry acts as a near-perfect mirror).
    """
    omegas = np.asarray(omegas, dtype=float)
    det = omega - omegas
    cut = POLE_EPS * params.gamma10
    pole = np.abs(det) < cut
    if pole.any():
        det = np.where(pole, np.where(det >= 0, cut, -cut), det)
    return params.g**2 / det, pole


@dataclass(frozen=True)
class OnsiteProfile:
    """Effective photon-chain onsite energies at one probe frequency.

    ``epsilons[x]`` is nonzero only on qubit-coupled sites x = i*(n_int+1),
    where it equals g^2/(omega - omega_i); all intermediate sites carry 0.
    """

    epsilons: np.ndarray
    probe_omega: float

    @property
    def n_sites(self) -> int:
        return self.epsilons.size


def effective_onsite(params: ModelParams, realization: DisorderRealization,
                     omega: float) -> OnsiteProfile:
    """Onsite profile of the qubit-eliminated photon chain at ``omega``.

    Raises :class:`PoleConditionError` when the probe is resonant with any
    qubit (callers treat that frequency as fully reflecting, T = 0).
    """
    eps_q, pole = onsite_energies(realization.omegas, omega, params)
    if pole.any():
        raise PoleConditionError(np.nonzero(pole)[0], omega)
    n = realization.n_qubits
    epsilons = np.zeros(params.n_photon_sites(n))
    epsilons[:: params.n_int + 1] = eps_q
    return OnsiteProfile(epsilons=epsilons, probe_omega=float(omega))


@dataclass(frozen=True)
class SparseHamiltonian:
    """Symmetric sparse matrix in the interleaved site ordering.

    Entries are stored with both (row, col) and (col, row) present.  The
    interleaved ordering places each qubit immediately after its coupled
    photon site, which keeps the bandwidth at 2.
    """

    dimension: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @property
    def entries(self):
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def to_dense(self) -> np.ndarray:
        h = np.zeros((self.dimension, self.dimension))
        h[self.rows, self.cols] = self.values
        return h

    def to_banded_lower(self) -> np.ndarray:
        """LAPACK lower-banded storage, bandwidth 2 (for scipy eig_banded)."""
        ab = np.zeros((3, self.dimension))
        for r, c, v in zip(self.rows, self.cols, self.values):
            if c > r:
                continue
            band = r - c
            if band > 2:
                raise ValueError("bandwidth exceeds 2; not in interleaved order")
            ab[band, c] = v
        return ab


def _interleaved_photon_index(x: int, n_int: int) -> int:
    # photon site x, counting the qubits inserted before it
    return x + (x + n_int) // (n_int + 1)


def _interleaved_qubit_index(i: int, n_int: int) -> int:
    return i * (n_int + 2) + 1


def build_full_hamiltonian(params: ModelParams,
                           realization: DisorderRealization) -> SparseHamiltonian:
    """Full qubit+photon Hamiltonian on the interleaved site ordering.

    Photon chain of (n_int+1)*N - n_int sites with nearest-neighbor hopping
    -J and zero diagonal; qubit i carries diagonal omega_i and couples with g
    to photon site i*(n_int+1).
    """
    n = realization.n_qubits
    if n < 1:
        raise ValueError("need at least one qubit")
    n_int = params.n_int
    n_gamma = params.n_photon_sites(n)
    dim = n + n_gamma

    rows, cols, vals = [], [], []

    def add_sym(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(v)
        if r != c:
            rows.append(c)
            cols.append(r)
            vals.append(v)

    for i, w_i in enumerate(realization.omegas):
        q = _interleaved_qubit_index(i, n_int)
        add_sym(q, q, float(w_i))
        add_sym(q, _interleaved_photon_index(i * (n_int + 1), n_int), params.g)
    for x in range(n_gamma - 1):
        add_sym(_interleaved_photon_index(x, n_int),
                _interleaved_photon_index(x + 1, n_int), -params.J)

    return SparseHamiltonian(
        dimension=dim,
        rows=np.asarray(rows, dtype=np.intp),
        cols=np.asarray(cols, dtype=np.intp),
        values=np.asarray(vals, dtype=float),
    )
