"""Discretized spherical LB energy, its gradient, and mass projection.

The energy of a coefficient vector c is

    E(c) = G(c) + F(c)
    G(c) = SCALE_G * (xi^2 / 2) * sum_{l,m} (1 - l(l+1)/R^2)^2 |c_lm|^2
    F(c) = SCALE_F * integral( eps/2 phi^2 - lambda/6 phi^3 + 1/24 phi^4 )

with the sum over the full (l, m) range and the integral over the unit
parameter sphere (quadrature weights summing to 4*pi). The nonlinear terms
are evaluated pseudo-spectrally: synthesize to the grid, apply pointwise
powers, integrate (or re-analyze for the gradient). The plan's quadrature
capacity makes every integral here exact up to roundoff.

SCALE_G / SCALE_F fix the energy normalization; they are calibrated so that
reported equilibrium energies match the reference values for this model
family (grid integrals carry 1/sqrt(4*pi), the spectral quadratic sum is
unweighted).
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels, sht

SCALE_G = 1.0 / np.sqrt(4.0 * np.pi)
SCALE_F = 1.0 / np.sqrt(4.0 * np.pi)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: correlation length, temperature-like and cubic
    coefficients, sphere radius."""

    xi: float
    epsilon: float
    lambda_coeff: float
    radius: float

    def __post_init__(self):
        if self.xi <= 0:
            raise ValueError(f"xi must be positive, got {self.xi}")
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class EnergyBreakdown:
    g: float
    f: float

    @property
    def total(self):
        return self.g + self.f


class GradientVariant(enum.Enum):
    """Power of the operator factor (1 - l(l+1)/R^2) in the quadratic-term
    gradient and the proximal diagonal.

    SQUARED is the exact derivative of G and the default; LINEAR applies the
    unsquared factor and is retained only for cross-checking alternative
    solver conventions (the semi-implicit diagonal goes negative with it).
    """

    SQUARED = "squared"
    LINEAR = "linear"


def operator_factors(params, bandlimit):
    """(1 - l(l+1)/R^2) for l = 0..N."""
    ell = np.arange(bandlimit + 1, dtype=float)
    return 1.0 - ell * (ell + 1.0) / params.radius ** 2


def quadratic_diagonal(params, bandlimit, variant=GradientVariant.SQUARED):
    """Diagonal D_l of the quadratic-term gradient, including SCALE_G."""
    fac = operator_factors(params, bandlimit)
    if variant is GradientVariant.SQUARED:
        fac = fac * fac
    return SCALE_G * params.xi ** 2 * fac


def project_mass(c):
    """Zero the (0,0) coefficient (mean of the field)."""
    out = c.copy()
    out.coeffs[0, 0] = 0.0
    return out


def _poly_coeffs(params):
    return 0.5 * params.epsilon, -params.lambda_coeff / 6.0, 1.0 / 24.0


def energy_from_values(c, values, params, plan):
    """Energy when the synthesized grid samples are already available."""
    n = c.bandlimit
    fac2 = operator_factors(params, n) ** 2
    w = np.full(n + 1, 2.0)
    w[0] = 1.0
    mags2 = (c.coeffs.real ** 2 + c.coeffs.imag ** 2) * w[np.newaxis, :]
    g = SCALE_G * 0.5 * params.xi ** 2 * float(mags2.sum(axis=1) @ fac2)
    c2, c3, c4 = _poly_coeffs(params)
    rows = _kernels.poly_rowsums(values, c2, c3, c4)
    f = SCALE_F * float(plan.grid.weights @ rows) * (2.0 * np.pi / plan.grid.n_phi)
    return EnergyBreakdown(g, f)


def energy(c, params, plan, work=None):
    """Quadratic-operator part, polynomial part, and total of E(c)."""
    values = sht.synthesize_values(_padded(c, plan), plan, work)
    return energy_from_values(c, values, params, plan)


def _padded(c, plan):
    if c.bandlimit == plan.bandlimit:
        return c.coeffs
    if c.bandlimit > plan.bandlimit:
        raise ValueError("field band limit exceeds plan band limit")
    out = np.zeros((plan.bandlimit + 1,) * 2, dtype=np.complex128)
    out[:c.bandlimit + 1, :c.bandlimit + 1] = c.coeffs
    return out


def poly_gradient_from_values(c, values, params, plan, work=None):
    """Gradient of F at c given its grid samples: eps*c - (lambda/2)(phi^2)-hat
    + (1/6)(phi^3)-hat, scaled by SCALE_F."""
    n = plan.bandlimit
    if work is None:
        f2, f3 = _kernels.pow23(values)
    else:
        f2, f3 = _kernels.pow23(values, work.f2, work.f3)
    out = (1.0 / 6.0) * sht.analyze_values(f3, plan, work)
    if params.lambda_coeff != 0.0:
        out -= (0.5 * params.lambda_coeff) * sht.analyze_values(f2, plan, work)
    out += params.epsilon * _padded(c, plan)
    out *= SCALE_F
    return sht.SpectralField(n, out)


def poly_gradient(c, params, plan, work=None):
    values = sht.synthesize_values(_padded(c, plan), plan, work)
    return poly_gradient_from_values(c, values, params, plan, work)


def gradient(c, params, plan, variant=GradientVariant.SQUARED, work=None):
    """Full energy gradient as a SpectralField (same band limit as the plan)."""
    values = sht.synthesize_values(_padded(c, plan), plan, work)
    gf = poly_gradient_from_values(c, values, params, plan, work)
    diag = quadratic_diagonal(params, plan.bandlimit, variant)
    gf.coeffs += diag[:, np.newaxis] * _padded(c, plan)
    return gf


def energy_and_gradient(c, params, plan, variant=GradientVariant.SQUARED, work=None):
    """(EnergyBreakdown, grad E, grad F) sharing one synthesis of c."""
    values = sht.synthesize_values(_padded(c, plan), plan, work)
    bd = energy_from_values(c, values, params, plan)
    gf = poly_gradient_from_values(c, values, params, plan, work)
    diag = quadratic_diagonal(params, plan.bandlimit, variant)
    ge = sht.SpectralField(plan.bandlimit, gf.coeffs + diag[:, np.newaxis] * _padded(c, plan))
    return bd, ge, gf
