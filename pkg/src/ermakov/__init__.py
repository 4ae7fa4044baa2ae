"""Invariant (Ermakov-Lewis) operators and Heisenberg operators for
time-dependent generalized oscillators, with a truncated-Fock reference."""

from .bogoliubov import BogoliubovPair, SqueezeTriple, bogoliubov_coeffs, reconstruct, squeeze_params, unitarity_residual
from .mode_solver import ModeState, ModeTrajectory, analytic_mode, evolve, integrate, vacuum_init, wronskian
from .operator_algebra import (
    CorrelatorSet,
    QuadratureExpansion,
    commutator_residual,
    correlators,
    heisenberg_quadratures,
    invariant_ladder,
    lvn_quadratures,
    uncertainty_product,
)
from .profiles import CoefficientProfile, ReferenceParams, constant, modulated, quench, tabulated

__version__ = "0.1.0"
