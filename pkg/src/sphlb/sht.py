"""Band-limited spherical-harmonic transforms for real fields.

Convention: orthonormal harmonics with Condon-Shortley phase,
Y_l^m(theta, phi) = Lambda_l^m(cos theta) * exp(i m phi), so that
<Y_l^m, Y_l'^m'> = delta delta under the unit-sphere inner product
integral(f conj(g) sin(theta) dtheta dphi). Real fields are stored as the
m >= 0 half of the coefficient table; negative orders are implied by
c_{l,-m} = (-1)^m conj(c_{l,m}).

The quadrature grid is Gauss-Legendre in latitude and uniform in longitude.
A plan for band limit N requires 2*n_theta - 1 >= 4N and n_phi >= 4N + 1 so
that products of up to four degree-N fields are integrated exactly (this is
what dealiases the quartic term downstream).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft
from scipy.special import roots_legendre

from . import _kernels

_FFT_WORKERS = 2


def _legendre_poly(n, x):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    if n == 0:
        return p0, np.zeros_like(x)
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n):
    """Gauss-Legendre nodes (descending, so theta ascends) and weights on [-1, 1].

    Library roots are polished with a few Newton steps and the weights
    recomputed from 2 / ((1-x^2) P_n'(x)^2); the raw weights carry ~1e-13
    relative error, which would dominate high-degree projections.
    """
    if n < 1:
        raise ValueError(f"need at least one latitude node, got {n}")
    x, _ = roots_legendre(n)
    if n > 1:
        for _ in range(3):
            p, dp = _legendre_poly(n, x)
            x -= p / dp
        _, dp = _legendre_poly(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
    else:
        x = np.zeros(1)
        w = np.full(1, 2.0)
    return x[::-1].copy(), w[::-1].copy()


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Legendre x uniform-longitude product grid on the unit sphere."""

    n_theta: int
    n_phi: int
    nodes: np.ndarray    # cos(theta_j), strictly decreasing in (-1, 1)
    weights: np.ndarray  # GL weights, sum to 2
    phis: np.ndarray     # 2*pi*k / n_phi

    @property
    def thetas(self):
        return np.arccos(self.nodes)

    @property
    def cell_weights(self):
        """Full 2-D quadrature weights; sum to 4*pi."""
        return np.outer(self.weights, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))


def quadrature_grid(n_theta, n_phi):
    if n_phi < 2 or n_phi % 2 != 0:
        raise ValueError(f"n_phi must be even and >= 2, got {n_phi}")
    nodes, weights = gauss_legendre(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return QuadratureGrid(n_theta, n_phi, nodes, weights, phis)


def default_grid_shape(bandlimit):
    """Grid sizes used by default for a given band limit.

    N=127 gets the production 512 x 2048 grid; otherwise the smallest
    FFT-friendly sizes satisfying the quartic-exactness capacity rule.
    """
    if bandlimit == 127:
        return 512, 2048
    n_theta = 2 * (bandlimit + 1)
    n_phi = _fft.next_fast_len(4 * bandlimit + 2)
    if n_phi % 2:
        n_phi = _fft.next_fast_len(n_phi + 1)
    return n_theta, n_phi


@dataclass
class GridField:
    """Real samples on a QuadratureGrid, shape (n_theta, n_phi)."""

    values: np.ndarray


@dataclass
class SpectralField:
    """Coefficients c[l, m] for 0 <= m <= l <= bandlimit (complex, m >= 0 half)."""

    bandlimit: int
    coeffs: np.ndarray  # (N+1, N+1) complex128, entries with m > l are zero

    def copy(self):
        return SpectralField(self.bandlimit, self.coeffs.copy())


def zero_field(bandlimit):
    n = bandlimit + 1
    return SpectralField(bandlimit, np.zeros((n, n), dtype=np.complex128))


def _half_weights(bandlimit):
    # weight 1 for m=0 column, 2 for m>0: full-range sums from the stored half
    w = np.full(bandlimit + 1, 2.0)
    w[0] = 1.0
    return w


def inner(u, v):
    """Real L2 inner product over the full (l, m) range."""
    if u.bandlimit != v.bandlimit:
        raise ValueError("band limits differ")
    w = _half_weights(u.bandlimit)
    prod = u.coeffs.real * v.coeffs.real + u.coeffs.imag * v.coeffs.imag
    return float((prod * w[np.newaxis, :]).sum())


def norms(c):
    """(l2, sup) norms over the full coefficient range."""
    w = _half_weights(c.bandlimit)
    mags2 = (c.coeffs.real ** 2 + c.coeffs.imag ** 2)
    l2 = float(np.sqrt((mags2 * w[np.newaxis, :]).sum()))
    sup = float(np.sqrt(mags2.max())) if mags2.size else 0.0
    return l2, sup


def laplacian_eigenvalue(ell, radius):
    """Eigenvalue of the sphere Laplacian on degree-ell harmonics."""
    if ell < 0 or radius <= 0:
        raise ValueError("need ell >= 0 and radius > 0")
    return -ell * (ell + 1) / radius ** 2


class SHTPlan:
    """Precomputed tables for forward/inverse transforms at one band limit.

    Immutable after construction; safe to share across threads. Transforms
    reduce in fixed index order, so repeated calls are bit-identical.
    """

    def __init__(self, bandlimit, grid):
        n = bandlimit
        if 2 * grid.n_theta - 1 < 4 * n or grid.n_phi < 4 * n + 1:
            raise ValueError(
                f"grid {grid.n_theta}x{grid.n_phi} below quartic-exactness capacity "
                f"for N={n} (need 2*n_theta-1 >= {4 * n} and n_phi >= {4 * n + 1})")
        self.bandlimit = n
        self.grid = grid
        self._build_tables()

    def _build_tables(self):
        n = self.bandlimit
        x = self.grid.nodes
        nt = self.grid.n_theta
        sint = np.sqrt((1.0 - x) * (1.0 + x))

        # Fully normalized P-bar_l^m(x) with Condon-Shortley phase, built by
        # the stable ascending-l three-term recurrence; the sectoral seed is
        # accumulated in normalized form (no raw factorials).
        nell = np.array([n + 1 - m for m in range(n + 1)], dtype=np.int64)
        offsets = np.zeros(n + 2, dtype=np.int64)
        np.cumsum(nell * nt, out=offsets[1:])
        flat = np.empty(int(offsets[-1]))

        pmm = np.full(nt, 1.0 / np.sqrt(4.0 * np.pi))
        for m in range(n + 1):
            lm = n + 1 - m
            block = flat[offsets[m]:offsets[m] + nt * lm].reshape(nt, lm)
            block[:, 0] = pmm
            if lm > 1:
                block[:, 1] = np.sqrt(2.0 * m + 3.0) * x * pmm
            for ell in range(m + 2, n + 1):
                i = ell - m
                a = np.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
                b = np.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
                block[:, i] = a * (x * block[:, i - 1] - b * block[:, i - 2])
            if m < n:
                pmm = -np.sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sint * pmm
        if not np.all(np.isfinite(flat)):
            raise FloatingPointError("associated Legendre table overflowed")

        self._flat = flat
        self._offsets = offsets[:-1].copy()
        self._nell = nell
        self._wq = self.grid.weights.copy()

    def legendre(self, ell, m):
        """Normalized P-bar_l^m at every latitude node (for tests/inspection)."""
        lm = self._nell[m]
        nt = self.grid.n_theta
        block = self._flat[self._offsets[m]:self._offsets[m] + nt * lm]
        return block.reshape(nt, lm)[:, ell - m].copy()


def legendre_table(bandlimit, grid):
    return SHTPlan(bandlimit, grid)


def build_plan(bandlimit, n_theta=None, n_phi=None):
    if n_theta is None or n_phi is None:
        dt, dp = default_grid_shape(bandlimit)
        n_theta = n_theta if n_theta is not None else dt
        n_phi = n_phi if n_phi is not None else dp
    return SHTPlan(bandlimit, quadrature_grid(n_theta, n_phi))


class Workspace:
    """Reusable scratch buffers for one caller (not shareable across threads)."""

    def __init__(self, plan):
        n = plan.bandlimit
        grid = plan.grid
        self.plan = plan
        half = grid.n_phi // 2 + 1
        # zero-initialized once; only columns m <= N are ever rewritten
        self.spec_pad = np.zeros((grid.n_theta, half), dtype=np.complex128)
        self.S_re = np.empty((grid.n_theta, n + 1))
        self.S_im = np.empty((grid.n_theta, n + 1))
        self.out_re = np.zeros((n + 1, n + 1))
        self.out_im = np.zeros((n + 1, n + 1))
        self.f2 = np.empty((grid.n_theta, grid.n_phi))
        self.f3 = np.empty((grid.n_theta, grid.n_phi))


def analyze_values(values, plan, work=None):
    """Forward transform of raw grid samples, returning the coefficient array."""
    grid = plan.grid
    if values.shape != (grid.n_theta, grid.n_phi):
        raise ValueError(
            f"field shape {values.shape} does not match grid "
            f"{(grid.n_theta, grid.n_phi)}")
    n = plan.bandlimit
    spec = _fft.rfft(values, axis=1, workers=_FFT_WORKERS)[:, :n + 1]
    gw = spec * ((2.0 * np.pi / grid.n_phi) * plan._wq)[:, np.newaxis]
    gw_re = np.ascontiguousarray(gw.real)
    gw_im = np.ascontiguousarray(gw.imag)
    if work is None:
        out_re = np.zeros((n + 1, n + 1))
        out_im = np.zeros((n + 1, n + 1))
    else:
        out_re, out_im = work.out_re, work.out_im
    _kernels.leg_analyze(plan._flat, plan._offsets, plan._nell,
                         grid.n_theta, gw_re, gw_im, out_re, out_im)
    return out_re + 1j * out_im


def synthesize_values(coeffs, plan, work=None):
    """Inverse transform to raw grid samples (real (n_theta, n_phi) array)."""
    n = plan.bandlimit
    grid = plan.grid
    if work is None:
        S_re = np.empty((grid.n_theta, n + 1))
        S_im = np.empty((grid.n_theta, n + 1))
        buf = np.zeros((grid.n_theta, grid.n_phi // 2 + 1), dtype=np.complex128)
    else:
        S_re, S_im, buf = work.S_re, work.S_im, work.spec_pad
    c_re = np.ascontiguousarray(coeffs.real)
    c_im = np.ascontiguousarray(coeffs.imag)
    _kernels.leg_synth(plan._flat, plan._offsets, plan._nell,
                       grid.n_theta, c_re, c_im, S_re, S_im)
    # irfft's Hermitian pairing supplies the conjugate m<0 half
    buf[:, :n + 1].real = S_re
    buf[:, :n + 1].imag = S_im
    buf[:, :n + 1] *= grid.n_phi
    return _fft.irfft(buf, n=grid.n_phi, axis=1, workers=_FFT_WORKERS)


def analyze(f, plan):
    """GridField -> SpectralField; exact for band-limited fields."""
    return SpectralField(plan.bandlimit, analyze_values(f.values, plan))


def synthesize(c, plan):
    """SpectralField -> GridField (evaluates the truncated expansion)."""
    if c.bandlimit > plan.bandlimit:
        raise ValueError(
            f"field band limit {c.bandlimit} exceeds plan band limit {plan.bandlimit}")
    coeffs = c.coeffs
    if c.bandlimit < plan.bandlimit:
        coeffs = np.zeros((plan.bandlimit + 1,) * 2, dtype=np.complex128)
        coeffs[:c.bandlimit + 1, :c.bandlimit + 1] = c.coeffs
    return GridField(synthesize_values(coeffs, plan))


def quadrature_integral(values, grid):
    """Integral of grid samples over the unit sphere (weights sum to 4*pi)."""
    return float(grid.weights @ values.sum(axis=1)) * (2.0 * np.pi / grid.n_phi)


def write_coeffs(path, c):
    """Shared coefficient text format: one `l m re im` line per stored entry."""
    with open(path, "w") as fh:
        for ell in range(c.bandlimit + 1):
            for m in range(ell + 1):
                v = c.coeffs[ell, m]
                fh.write(f"{ell} {m} {v.real:.17e} {v.imag:.17e}\n")


def read_coeffs(path):
    ls, ms, res, ims = [], [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"malformed coefficient line: {line!r}")
            ls.append(int(parts[0]))
            ms.append(int(parts[1]))
            res.append(float(parts[2]))
            ims.append(float(parts[3]))
    if not ls:
        raise ValueError("empty coefficient file")
    n = max(ls)
    c = zero_field(n)
    for ell, m, re, im in zip(ls, ms, res, ims):
        if m > ell:
            raise ValueError(f"order {m} exceeds degree {ell}")
        c.coeffs[ell, m] = complex(re, im)
    return c
