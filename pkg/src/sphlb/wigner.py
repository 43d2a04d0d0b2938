"""Wigner 3-j symbols, triple-product coefficients, and a direct-convolution
oracle for the polynomial energy at small band limit.

The oracle exists to cross-check the pseudo-spectral evaluation: it sums the
coefficient convolutions explicitly with Gaunt coefficients, which is far too
slow for production band limits but exact and entirely independent of the
grid transforms.
"""

from functools import lru_cache
from math import lgamma, sqrt, pi, exp

import numpy as np

from . import model


def _ln_fact(n):
    return lgamma(n + 1.0)


def _triangle_ok(l1, l2, l3):
    return abs(l1 - l2) <= l3 <= l1 + l2


@lru_cache(maxsize=1 << 20)
def _wigner3j_cached(l1, l2, l3, m1, m2, m3):
    # Racah single-sum form, evaluated in log-factorial space with the
    # alternating sum scaled by its largest term.
    if m1 + m2 + m3 != 0 or not _triangle_ok(l1, l2, l3):
        return 0.0
    ln_delta = 0.5 * (_ln_fact(l1 + l2 - l3) + _ln_fact(l1 - l2 + l3)
                      + _ln_fact(-l1 + l2 + l3) - _ln_fact(l1 + l2 + l3 + 1))
    ln_pref = 0.5 * (_ln_fact(l1 + m1) + _ln_fact(l1 - m1)
                     + _ln_fact(l2 + m2) + _ln_fact(l2 - m2)
                     + _ln_fact(l3 + m3) + _ln_fact(l3 - m3))
    t_min = max(0, l2 - l3 - m1, l1 - l3 + m2)
    t_max = min(l1 + l2 - l3, l1 - m1, l2 + m2)
    if t_min > t_max:
        return 0.0
    ln_terms = []
    for t in range(t_min, t_max + 1):
        ln_terms.append(-(_ln_fact(t) + _ln_fact(l1 + l2 - l3 - t)
                          + _ln_fact(l1 - m1 - t) + _ln_fact(l2 + m2 - t)
                          + _ln_fact(l3 - l2 + m1 + t) + _ln_fact(l3 - l1 - m2 + t)))
    ln_max = max(ln_terms)
    s = 0.0
    for t, ln_t in zip(range(t_min, t_max + 1), ln_terms):
        s += (-1.0) ** t * exp(ln_t - ln_max)
    sign = (-1.0) ** (l1 - l2 - m3)
    return sign * s * exp(ln_delta + ln_pref + ln_max)


def wigner3j(l1, l2, l3, m1, m2, m3):
    """3-j symbol; zero under violated triangle/parity/m-sum selection rules."""
    for l, m in ((l1, m1), (l2, m2), (l3, m3)):
        if l < 0:
            raise ValueError(f"negative degree {l}")
        if abs(m) > l:
            raise ValueError(f"order {m} out of range for degree {l}")
    return _wigner3j_cached(l1, l2, l3, m1, m2, m3)


def triple_coeff(l1, l2, l3, m1, m2, m3):
    """Gaunt coefficient: the integral of Y_l1^m1 Y_l2^m2 Y_l3^m3 over the sphere."""
    w0 = wigner3j(l1, l2, l3, 0, 0, 0)
    if w0 == 0.0:
        return 0.0
    wm = _wigner3j_cached(l1, l2, l3, m1, m2, m3)
    if wm == 0.0:
        return 0.0
    norm = sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) / (4.0 * pi))
    return norm * w0 * wm


MAX_ORACLE_BANDLIMIT = 8


def _full_coeffs(c):
    """Full-range coefficient table full[l, m+L] from the stored m >= 0 half."""
    n = c.bandlimit
    full = np.zeros((n + 1, 2 * n + 1), dtype=np.complex128)
    for ell in range(n + 1):
        for m in range(ell + 1):
            v = c.coeffs[ell, m]
            full[ell, n + m] = v
            if m > 0:
                full[ell, n - m] = (-1) ** m * np.conj(v)
    return full


def _square_expansion(full, n):
    """Coefficients of phi^2 (degree <= 2N) by direct Gaunt convolution."""
    h = np.zeros((2 * n + 1, 4 * n + 1), dtype=np.complex128)
    for l1 in range(n + 1):
        for m1 in range(-l1, l1 + 1):
            c1 = full[l1, n + m1]
            if c1 == 0.0:
                continue
            for l2 in range(n + 1):
                for m2 in range(-l2, l2 + 1):
                    c2 = full[l2, n + m2]
                    if c2 == 0.0:
                        continue
                    mm = m1 + m2
                    for L in range(abs(l1 - l2), l1 + l2 + 1):
                        if (l1 + l2 + L) % 2 or abs(mm) > L:
                            continue
                        # <Y1 Y2, Y_L^M> = (-1)^M * gaunt(l1,l2,L; m1,m2,-M)
                        g = triple_coeff(l1, l2, L, m1, m2, -mm)
                        if g != 0.0:
                            h[L, 2 * n + mm] += (-1) ** mm * c1 * c2 * g
    return h


def direct_nonlinear_energy(c, params):
    """Polynomial part F of the energy by explicit coefficient convolutions.

    Guarded to band limits <= 8; cost grows like N^6 and this path exists
    only as an oracle for the pseudo-spectral evaluation.
    """
    n = c.bandlimit
    if n > MAX_ORACLE_BANDLIMIT:
        raise ValueError(
            f"direct evaluation limited to N <= {MAX_ORACLE_BANDLIMIT}, got {n}")
    full = _full_coeffs(c)

    quad = 0.5 * params.epsilon * float(np.sum(np.abs(full) ** 2))

    cubic = 0.0
    if params.lambda_coeff != 0.0:
        for l1 in range(n + 1):
            for m1 in range(-l1, l1 + 1):
                c1 = full[l1, n + m1]
                if c1 == 0.0:
                    continue
                for l2 in range(n + 1):
                    for m2 in range(-l2, l2 + 1):
                        c2 = full[l2, n + m2]
                        if c2 == 0.0:
                            continue
                        m3 = -(m1 + m2)
                        for l3 in range(max(abs(l1 - l2), abs(m3)), min(l1 + l2, n) + 1):
                            if (l1 + l2 + l3) % 2:
                                continue
                            g = triple_coeff(l1, l2, l3, m1, m2, m3)
                            if g != 0.0:
                                cubic += (c1 * c2 * full[l3, n + m3] * g).real
        cubic *= -params.lambda_coeff / 6.0

    h = _square_expansion(full, n)
    quartic = float(np.sum(np.abs(h) ** 2)) / 24.0

    return model.SCALE_F * (quad + cubic + quartic)
