"""Numba-compiled inner loops for the long-chain recursions."""

import math

from numba import njit


@njit(cache=True)
def lyapunov_block(a_coeffs, free_coeff, n_int, psi, psi_old, log_acc,
                   renorm_count, thr_exp):
    """Advance the two-term recursion through one block of qubit cells.

    ``a_coeffs[q]`` is (omega - eps_q)/J for the q-th disordered site of the
    block; each disordered site is followed by ``n_int`` free sites with
    coefficient ``free_coeff`` = omega/J.  The pair (psi, psi_old) is rescaled
    by an exact power of two whenever its max-norm leaves
    [2**-thr_exp, 2**thr_exp]; the shed exponents accumulate into ``log_acc``.
    Power-of-two rescaling keeps every mantissa bit-identical under threshold
    changes, so the accumulated growth rate is threshold-independent.
    """
    thr_hi = 2.0 ** thr_exp
    thr_lo = 2.0 ** (-thr_exp)
    ln2 = math.log(2.0)
    for q in range(a_coeffs.shape[0]):
        nxt = a_coeffs[q] * psi - psi_old
        psi_old = psi
        psi = nxt
        for _ in range(n_int):
            nxt = free_coeff * psi - psi_old
            psi_old = psi
            psi = nxt
        m = abs(psi)
        mo = abs(psi_old)
        if mo > m:
            m = mo
        if m > thr_hi or m < thr_lo:
            _, k = math.frexp(m)
            s = 2.0 ** (-k)
            psi *= s
            psi_old *= s
            log_acc += k * ln2
            renorm_count += 1
    return psi, psi_old, log_acc, renorm_count
