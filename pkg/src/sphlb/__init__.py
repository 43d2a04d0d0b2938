"""Spherical Landau-Brazovskii solver suite.

Discretizes the spherical LB free energy with a spherical-harmonic
pseudo-spectral method and minimizes it directly with first-order and
accelerated Bregman-proximal optimizers, seeded by principal-mode initial
states.
"""

__version__ = "0.1.0"

from .sht import (GridField, QuadratureGrid, SHTPlan, SpectralField,
                  analyze, build_plan, synthesize)
from .model import (EnergyBreakdown, GradientVariant, ModelParams, energy,
                    gradient, project_mass)
from .optim import EnergyTrace, OptimizerConfig, RunResult, minimize
