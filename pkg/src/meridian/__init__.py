"""Rotationally symmetric critical surfaces of curvature functionals.

Finite-difference calculus on uniform grids, Sturm-Liouville two-point
solvers with explicit Schauder constants, the catenoid between coaxial
rings, its perturbation theory, and Willmore-type surfaces of revolution.
"""

from .errors import *  # noqa: F401,F403
from .grid import Grid, SampledFunction, fd_derivative, holder_norm, holder_seminorm, norm_report
from .bvp import SturmLiouvilleProblem, solve, residual, coefficient_bounds, max_principle_applies
from .schauder import ConstantLedger, compute_ledger, choose_mu, ledger_for, verify_all
from .catenary import Catenary, RingBoundary, area, critical_ratio, fit, minimal_residual
from .stability import perturb, stability_function, operator_L, PerturbationConfig
from .willmore import (
    KVariant,
    MeridianSurface,
    ModelParams,
    WillmoreConfig,
    iterate_coupled,
    solve_willmore_bvp,
)

__version__ = "0.1.0"
