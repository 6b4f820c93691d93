"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``.  Criteria are asserted
exactly at their stated tolerances; seeds are fixed so every number below is
reproducible.
"""

import math
import time

import numpy as np
import pytest

from darkloc import (
    bootstrap_diff_ci,
    derive_params,
    dissipative_peak_study,
    dos_histogram,
    draw_ensemble,
    find_gap,
    fit_power_law,
    ghz_to_rad,
    lead_transmission,
    lyapunov_xi,
    make_disorder_spec,
    peak_xi8,
    scattering_oracle,
    transmission_log_t_batch,
)
from darkloc.model import DisorderRealization

SEED = 20240815
PARAMS = derive_params()


def _report(number, ok, detail, elapsed):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number}: {status} ({elapsed:.1f}s) - {detail}")
    return ok


def test_criterion_1_weak_disorder_scaling():
    """Lyapunov xi at f=7.82 GHz, W in {0.01..0.1}, N=1e6, 10 realizations:
    power-law exponent beta in [1.85, 2.15]."""
    t0 = time.perf_counter()
    omega = float(ghz_to_rad(7.82))
    w_values = [0.01, 0.018, 0.032, 0.056, 0.1]
    xi = []
    for w_val in w_values:
        spec = make_disorder_spec(w_val, PARAMS, SEED, 10)
        inv = np.array([
            lyapunov_xi(PARAMS, spec, omega, 1_000_000, index=i).inv_xi
            for i in range(10)
        ])
        xi.append(1.0 / inv.mean())
    elapsed = time.perf_counter() - t0
    pairs = ", ".join(f"xi({w})={x:.3g}" for w, x in zip(w_values, xi))
    if all(x > 0 and math.isfinite(x) for x in xi):
        fit = fit_power_law(w_values, xi, seed=SEED)
        ok = 1.85 <= fit.beta <= 2.15 and elapsed < 600.0
        detail = f"beta={fit.beta:.3f} (target [1.85, 2.15]); {pairs}"
    else:
        ok = False
        detail = ("estimator noise exceeds the signal at this N "
                  f"(non-positive mean 1/xi); {pairs}")
    assert _report(1, ok, detail, elapsed), detail


def test_criterion_2_clean_system_peak():
    """Clean N=8: max T over [7.82, 7.84] GHz >= 0.999, located within
    1 MHz of 7.829 GHz."""
    t0 = time.perf_counter()
    clean = DisorderRealization(omegas=np.full(8, PARAMS.mu),
                                realization_index=0, seed_used=SEED)

    def t_of(f_ghz):
        return lead_transmission(PARAMS, clean, float(ghz_to_rad(f_ghz))).t

    grid = np.arange(7.82, 7.840001, 2e-5)
    ts = np.array([t_of(f) for f in grid])
    i = int(np.argmax(ts))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    golden = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - golden * (b - a)
    d = a + golden * (b - a)
    fc, fd = t_of(c), t_of(d)
    while b - a > 1e-9:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - golden * (b - a)
            fc = t_of(c)
        else:
            a, c, fc = c, d, fd
            d = a + golden * (b - a)
            fd = t_of(d)
    f_peak = 0.5 * (a + b)
    t_peak = max(fc, fd, ts[i])
    elapsed = time.perf_counter() - t0
    offset_mhz = abs(f_peak - 7.829) * 1e3
    ok = t_peak >= 0.999 and offset_mhz <= 1.0 and elapsed < 1.0
    detail = (f"T_max={t_peak:.6f} at {f_peak:.7f} GHz, "
              f"|f-7.829| = {offset_mhz:.3f} MHz (target <= 1.000)")
    assert _report(2, ok, detail, elapsed), detail


def test_criterion_3_peak_suppression():
    """xi_8 at the per-W peak, 1e3 realizations: xi_8(2.04) = 3 +/- 1 and
    strictly decreasing over W in {0.16, 0.47, 0.79, 1.1, 2.04} with
    bootstrap-significant steps."""
    t0 = time.perf_counter()
    w_values = [0.16, 0.47, 0.79, 1.1, 2.04]
    xi, samples = [], []
    for w_val in w_values:
        _, xi8, log_t = peak_xi8(PARAMS, w_val, 1000, SEED)
        xi.append(xi8)
        samples.append(log_t)
    steps_ok = []
    for k in range(len(w_values) - 1):
        diff, std = bootstrap_diff_ci(samples[k], samples[k + 1],
                                      seed=(SEED, k))
        # xi decreasing <=> <log T> decreasing; diff = m_k - m_{k+1} > 0
        steps_ok.append(diff > 2.0 * std)
    elapsed = time.perf_counter() - t0
    value_ok = abs(xi[-1] - 3.0) <= 1.0
    mono_ok = all(a > b for a, b in zip(xi, xi[1:])) and all(steps_ok)
    ok = value_ok and mono_ok and elapsed < 120.0
    seq = ", ".join(f"{w}:{x:.2f}" for w, x in zip(w_values, xi))
    detail = (f"xi8 at peak = [{seq}]; xi8(2.04)={xi[-1]:.2f} (target 3+/-1); "
              f"significant decreasing steps: {steps_ok}")
    assert _report(3, ok, detail, elapsed), detail


def test_criterion_4_dos_gap():
    """DOS of the full Hamiltonian, N=2000, W=0.16, 10 realizations, 1 MHz
    bins: gap width 60 +/- 15 MHz, located above mu."""
    t0 = time.perf_counter()
    spec = make_disorder_spec(0.16, PARAMS, SEED, 10)
    dos = dos_histogram(PARAMS, spec, 2000, (7.80, 7.92), 120)
    f_lo, f_hi, width = find_gap(dos)
    elapsed = time.perf_counter() - t0
    ok = (45.0 <= width <= 75.0) and f_lo >= 7.835 and elapsed < 300.0
    detail = (f"gap [{f_lo:.4f}, {f_hi:.4f}] GHz, width {width:.1f} MHz "
              f"(target 60 +/- 15, above 7.835)")
    assert _report(4, ok, detail, elapsed), detail


def test_criterion_5_three_regimes():
    """xi_8 vs W at f = 7.81 / 7.835 / 7.85 GHz (500 realizations):
    decreasing / non-monotone / increasing, steps > 2 bootstrap std."""
    t0 = time.perf_counter()
    w_values = [0.16, 0.79, 2.04]
    f_values = [7.81, 7.835, 7.85]
    mean_log = {}
    samples = {}
    for w_val in w_values:
        spec = make_disorder_spec(w_val, PARAMS, SEED, 500)
        omegas = draw_ensemble(spec, PARAMS, 8)
        for f in f_values:
            log_t = transmission_log_t_batch(PARAMS, omegas,
                                             float(ghz_to_rad(f)))
            samples[(f, w_val)] = log_t
            mean_log[(f, w_val)] = float(np.mean(log_t))

    def signif_step(f, w_a, w_b):
        """+1 if xi(w_a) > xi(w_b) significantly, -1 if reverse, 0 if flat."""
        diff, std = bootstrap_diff_ci(samples[(f, w_a)], samples[(f, w_b)],
                                      seed=(SEED, int(f * 1e3)))
        if abs(diff) <= 2.0 * std:
            return 0
        return 1 if diff > 0 else -1

    regimes = {}
    for f in f_values:
        s1 = signif_step(f, w_values[0], w_values[1])
        s2 = signif_step(f, w_values[1], w_values[2])
        regimes[f] = (s1, s2)
    elapsed = time.perf_counter() - t0
    dec_ok = regimes[7.81] == (1, 1)
    nonmono_ok = regimes[7.835] == (1, -1)
    inc_ok = regimes[7.85] == (-1, -1)
    ok = dec_ok and nonmono_ok and inc_ok and elapsed < 120.0
    xi_of = {f: [(-8.0 / mean_log[(f, w)]) for w in w_values] for f in f_values}
    detail = "; ".join(
        f"f={f}: xi8(W)={[f'{x:.2f}' for x in xi_of[f]]} steps={regimes[f]}"
        for f in f_values
    ) + "  [expected 7.81 (1,1) decreasing, 7.835 (1,-1) non-monotone, 7.85 (-1,-1) increasing]"
    assert _report(5, ok, detail, elapsed), detail


def test_criterion_6_oracle_equivalence():
    """100 random instances, N <= 16, W in [0, 2]: transfer-matrix t equals
    the dense oracle within 1e-8 relative; flux conserved to 1e-10."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst_rel, worst_flux = 0.0, 0.0
    for _ in range(100):
        n = int(rng.integers(1, 17))
        w_val = float(rng.uniform(0.0, 2.0))
        f = float(rng.uniform(7.80, 7.86))
        omegas = PARAMS.mu + w_val * PARAMS.gamma10 * rng.standard_normal(n)
        realization = DisorderRealization(omegas=omegas, realization_index=0,
                                          seed_used=SEED)
        omega = float(ghz_to_rad(f))
        a = lead_transmission(PARAMS, realization, omega)
        b = scattering_oracle(PARAMS, realization, omega)
        worst_rel = max(worst_rel, abs(a.t - b.t) / max(b.t, 1e-300))
        worst_flux = max(worst_flux, abs(a.t + a.r - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst_rel < 1e-8 and worst_flux < 1e-10 and elapsed < 10.0
    detail = (f"max relative t deviation {worst_rel:.2e} (target < 1e-8), "
              f"max |t+r-1| = {worst_flux:.2e} (target < 1e-10)")
    assert _report(6, ok, detail, elapsed), detail


def test_criterion_7_finite_size_vs_thermodynamic():
    """xi_8 (peak, 1e3 realizations) vs Lyapunov xi at N=1e5 for
    W in {1.1, 2.04}: agreement within 40%."""
    t0 = time.perf_counter()
    details = []
    ok = True
    for w_val in (1.1, 2.04):
        f_peak, xi8, _ = peak_xi8(PARAMS, w_val, 1000, SEED)
        spec = make_disorder_spec(w_val, PARAMS, SEED, 40)
        omega = float(ghz_to_rad(f_peak))
        inv = np.array([
            lyapunov_xi(PARAMS, spec, omega, 100_000, index=i).inv_xi
            for i in range(40)
        ])
        xi_inf = 1.0 / inv.mean()
        rel = abs(xi8 - xi_inf) / xi_inf
        ok = ok and rel <= 0.40
        details.append(f"W={w_val}: xi8={xi8:.2f} vs xi={xi_inf:.2f} "
                       f"at {f_peak:.4f} GHz (diff {rel:.0%})")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300.0
    detail = "; ".join(details) + " (target <= 40%)"
    assert _report(7, ok, detail, elapsed), detail


def test_criterion_8_dissipation_convergence():
    """Gamma_nr/2pi = 400 kHz: peak xi_8 within 15% of lossless at W >= 1.6,
    while at W = 0.16 the lossless peak exceeds the dissipative by >= 3x."""
    t0 = time.perf_counter()
    gnr = 2 * math.pi * 400e3
    rows = dissipative_peak_study(PARAMS, [0.0, gnr], [0.16, 1.6, 2.04],
                                  1000, SEED)
    xi = {(w, round(g)): x for (w, g, x, _) in rows}
    ratio_weak = xi[(0.16, 0)] / xi[(0.16, 400)]
    rels = {w: abs(xi[(w, 400)] - xi[(w, 0)]) / xi[(w, 0)] for w in (1.6, 2.04)}
    elapsed = time.perf_counter() - t0
    ok = ratio_weak >= 3.0 and all(r < 0.15 for r in rels.values()) and elapsed < 120.0
    detail = (f"W=0.16 lossless/dissipative = {ratio_weak:.1f}x (target >= 3); "
              + "; ".join(f"W={w}: diff {r:.1%} (target < 15%)"
                          for w, r in rels.items()))
    assert _report(8, ok, detail, elapsed), detail
