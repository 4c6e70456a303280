"""Small-amplitude solitary waves of Fourier-multiplier Boussinesq systems.

The solver works with the rescaled profile ``V`` defined by
``v(x) = eps^2 V(eps x)``, which tends to the KdV soliton
``sigma(x) = 3/(2 gamma) sech^2(x/2)`` as ``eps -> 0``.
"""
from .assumptions import AssumptionReport, check_assumptions, verify_inverse_approx
from .dsl import compile_symbol, parse_symbol, to_text
from .errors import *  # noqa: F401,F403
from .estimator import SolitaryWaveEstimator
from .models import SystemSpec, make_abcd, make_builtin, make_custom, reduce_system
from .postprocess import RateStudy, rate_fit, reconstruct_eta, system_residual, unscale
from .solver import (
    SolveConfig,
    SolveResult,
    calK_apply,
    calK_min_singular,
    continuation_sweep,
    kdv_profile,
    newton_solve,
    omega_of,
    phi_eval,
    phi_jacobian_apply,
)
from .spectral import Field, Grid, hs_norm, make_grid, project_even, tail_fraction
from .symbols import MultiplierSymbol, combine, origin_data, scale_symbol

__version__ = "0.1.0"
