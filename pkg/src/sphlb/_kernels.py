"""Hot numeric kernels (Legendre projection stage, fused grid polynomials).

Results are bit-identical run to run even in the parallel (prange) versions:
threads own disjoint outputs and never share a reduction, and fastmath
reassociation is fixed at compile time. Real and imaginary parts are carried
in separate float64 arrays so the inner loops vectorize. Set SPHLB_NO_NUMBA=1
to force the pure-numpy fallbacks.
"""

import ctypes
import os
import sys

import numpy as np

_ALLOC_TUNED = False


def tune_allocator():
    """Keep large numpy buffers on the heap instead of mmap round trips.

    Transform-sized temporaries (~8 MB) otherwise alternate mmap/munmap on
    every FFT call, costing more than the arithmetic. No-op off glibc.
    """
    global _ALLOC_TUNED
    if _ALLOC_TUNED or not sys.platform.startswith("linux"):
        return
    try:
        libc = ctypes.CDLL("libc.so.6")
        libc.mallopt(-3, 1 << 30)  # M_MMAP_THRESHOLD
        libc.mallopt(-1, 1 << 30)  # M_TRIM_THRESHOLD
        _ALLOC_TUNED = True
    except OSError:
        pass

_USE_NUMBA = os.environ.get("SPHLB_NO_NUMBA", "0") != "1"

if _USE_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:
        _USE_NUMBA = False

if _USE_NUMBA:

    @njit(parallel=True, fastmath=True, cache=True)
    def _leg_analyze_nb(flat, offsets, nell, ntheta, gw_re, gw_im, out_re, out_im):
        # flat: packed per-m blocks, each (ntheta, Lm) row-major
        # gw:   (ntheta, M+1) fft columns * quadrature weights
        nm = nell.shape[0]
        for m in prange(nm):
            base = offsets[m]
            lm = nell[m]
            acc_re = np.zeros(lm)
            acc_im = np.zeros(lm)
            for j in range(ntheta):
                gr = gw_re[j, m]
                gi = gw_im[j, m]
                row = base + j * lm
                for i in range(lm):
                    v = flat[row + i]
                    acc_re[i] += v * gr
                    acc_im[i] += v * gi
            for i in range(lm):
                out_re[m + i, m] = acc_re[i]
                out_im[m + i, m] = acc_im[i]

    @njit(parallel=True, fastmath=True, cache=True)
    def _leg_synth_nb(flat, offsets, nell, ntheta, c_re, c_im, S_re, S_im):
        nm = nell.shape[0]
        for m in prange(nm):
            base = offsets[m]
            lm = nell[m]
            cr = np.empty(lm)
            ci = np.empty(lm)
            for i in range(lm):
                cr[i] = c_re[m + i, m]
                ci[i] = c_im[m + i, m]
            for j in range(ntheta):
                row = base + j * lm
                sr = 0.0
                si = 0.0
                for i in range(lm):
                    v = flat[row + i]
                    sr += v * cr[i]
                    si += v * ci[i]
                S_re[j, m] = sr
                S_im[j, m] = si

    @njit(parallel=True, fastmath=True, cache=True)
    def _pow23_nb(f, f2, f3):
        for j in prange(f.shape[0]):
            for k in range(f.shape[1]):
                v = f[j, k]
                v2 = v * v
                f2[j, k] = v2
                f3[j, k] = v2 * v

    @njit(parallel=True, fastmath=True, cache=True)
    def _poly_rowsums_nb(f, c2, c3, c4, row):
        for j in prange(f.shape[0]):
            s = 0.0
            for k in range(f.shape[1]):
                v = f[j, k]
                v2 = v * v
                s += (c2 + c3 * v) * v2 + c4 * v2 * v2
            row[j] = s


def leg_analyze(flat, offsets, nell, ntheta, gw_re, gw_im, out_re, out_im):
    if _USE_NUMBA:
        _leg_analyze_nb(flat, offsets, nell, ntheta, gw_re, gw_im, out_re, out_im)
        return
    nm = nell.shape[0]
    for m in range(nm):
        lm = nell[m]
        block = flat[offsets[m]:offsets[m] + ntheta * lm].reshape(ntheta, lm)
        out_re[m:m + lm, m] = block.T @ gw_re[:, m]
        out_im[m:m + lm, m] = block.T @ gw_im[:, m]


def leg_synth(flat, offsets, nell, ntheta, c_re, c_im, S_re, S_im):
    if _USE_NUMBA:
        _leg_synth_nb(flat, offsets, nell, ntheta, c_re, c_im, S_re, S_im)
        return
    nm = nell.shape[0]
    for m in range(nm):
        lm = nell[m]
        block = flat[offsets[m]:offsets[m] + ntheta * lm].reshape(ntheta, lm)
        S_re[:, m] = block @ c_re[m:m + lm, m]
        S_im[:, m] = block @ c_im[m:m + lm, m]


def pow23(f, f2=None, f3=None):
    """f**2 and f**3 in one pass, optionally into preallocated outputs."""
    if f2 is None:
        f2 = np.empty_like(f)
    if f3 is None:
        f3 = np.empty_like(f)
    if _USE_NUMBA:
        _pow23_nb(f, f2, f3)
    else:
        np.multiply(f, f, out=f2)
        np.multiply(f2, f, out=f3)
    return f2, f3


def poly_rowsums(f, c2, c3, c4):
    """Per-latitude-row sums of c2*f^2 + c3*f^3 + c4*f^4."""
    row = np.empty(f.shape[0])
    if _USE_NUMBA:
        _poly_rowsums_nb(f, c2, c3, c4, row)
    else:
        f2 = f * f
        np.sum((c2 + c3 * f) * f2 + c4 * f2 * f2, axis=1, out=row)
    return row
