"""Stability functions and fixed-point perturbation of minimal profiles.

A profile ``f`` with ``f f'' = 1 + f'^2`` is perturbed to ``f + psi`` with
``psi = phi * chi``, where ``chi > 0`` solves the linearized (Jacobi)
equation. ``phi`` is found by iterating linear solves ``L[phi_k] = Phi(phi_{k-1})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import bvp
from .bvp import SturmLiouvilleProblem
from .catenary import minimal_residual
from .errors import (
    BoundaryDataTooLarge,
    CertificateInvalid,
    NoConvergence,
    NotContracting,
    Unstable,
)
from .grid import SampledFunction, holder_norm
from .schauder import ConstantLedger, c0_bound_factor, ledger_for

__all__ = [
    "StabilityCertificate",
    "LinearizedOperator",
    "IterationConstants",
    "IterationTrace",
    "PerturbationConfig",
    "PerturbationResult",
    "jacobi_coefficients",
    "stability_function",
    "certify",
    "operator_L",
    "phi_rhs",
    "lipschitz_constant",
    "iteration_constants",
    "admissible_boundary",
    "perturb",
]

N_ANGLES = 181
STALL_WINDOW = 6


@dataclass(frozen=True)
class StabilityCertificate:
    chi: SampledFunction
    margin: float
    inequality_slack: float


def jacobi_coefficients(f: SampledFunction) -> Tuple[np.ndarray, np.ndarray]:
    """``(b, c)`` of ``chi'' + b chi' + c chi = 0``: ``b = -2f'/f``, ``c = f''/f``."""
    if np.any(f.values <= 0.0):
        raise ValueError("profile must be positive")
    return -2.0 * f.d1 / f.values, f.d2 / f.values


def _jacobi_residual(f: SampledFunction, chi: SampledFunction) -> np.ndarray:
    b, c = jacobi_coefficients(f)
    return chi.d2 + b * chi.d1 + c * chi.values


def _shoot(b: np.ndarray, c: np.ndarray, h: float, slope: float) -> np.ndarray:
    """March the central-difference Jacobi equation from ``chi = 1``."""
    n = b.shape[0]
    chi = np.empty(n)
    chi[0] = 1.0
    chi[1] = 1.0 + h * slope + 0.5 * h * h * (-b[0] * slope - c[0])
    lo = 1.0 / (h * h) - b / (2 * h)
    mid = -2.0 / (h * h) + c
    hi = 1.0 / (h * h) + b / (2 * h)
    for i in range(1, n - 1):
        chi[i + 1] = -(lo[i] * chi[i - 1] + mid[i] * chi[i]) / hi[i]
    return chi


def _slopes(n_angles: int = N_ANGLES) -> np.ndarray:
    theta = np.linspace(-0.5 * np.pi, 0.5 * np.pi, n_angles + 2)[1:-1]
    theta = theta[np.argsort(np.abs(theta), kind="stable")]
    return np.tan(theta)


def certify(f: SampledFunction, chi: SampledFunction, tol: float = 1e-8) -> StabilityCertificate:
    if chi.grid != f.grid:
        raise ValueError("chi and f live on different grids")
    margin = chi.min()
    if margin <= 0.0:
        raise CertificateInvalid(f"stability function is not positive (min {margin:.3e})")
    slack = float(np.max(_jacobi_residual(f, chi)))
    if slack > tol * max(1.0, float(np.max(np.abs(chi.values)))):
        raise CertificateInvalid(f"Jacobi inequality violated by {slack:.3e}")
    return StabilityCertificate(chi, float(margin), slack)


def _drift(f: SampledFunction, chi: np.ndarray) -> float:
    d1 = SampledFunction(f.grid, chi).d1
    return float(np.max(np.abs(d1 / chi - f.d1 / f.values)))


def stability_function(f: SampledFunction, select: str = "first") -> StabilityCertificate:
    """Positive solution of the Jacobi equation, or :class:`Unstable`.

    Initial slopes ``tan(theta)`` are tried in order of increasing ``|theta|``.
    With ``select="first"`` the first one whose discrete solution stays
    positive on the whole grid is kept. ``select="balanced"`` keeps, among all
    positive candidates, the one minimizing ``max |chi'/chi - f'/f|``, which
    keeps the normalized operator close to constant coefficients and its
    Schauder constants small.

    ``chi'`` is a finite difference and ``chi''`` is read off the equation, so
    the certificate holds with equality up to round-off.
    """
    if select not in ("first", "balanced"):
        raise ValueError("select must be 'first' or 'balanced'")
    b, c = jacobi_coefficients(f)
    h = f.grid.spacing
    best, best_score = None, math.inf
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for s in _slopes():
            chi = _shoot(b, c, h, s)
            if not (np.all(np.isfinite(chi)) and np.all(chi > 0.0)):
                continue
            if select == "first":
                best = chi
                break
            score = _drift(f, chi)
            if score < best_score:
                best, best_score = chi, score
    if best is None:
        raise Unstable("no positive solution of the Jacobi equation: conjugate point in I")
    d1 = SampledFunction(f.grid, best).d1
    d2 = -b * d1 - c * best
    return certify(f, SampledFunction(f.grid, best, d1, d2))


@dataclass(frozen=True)
class LinearizedOperator:
    """``L[phi] = phi'' + pt phi' + qt phi`` for a profile and stability function."""

    p_tilde: SampledFunction
    q_tilde: SampledFunction

    @property
    def grid(self):
        return self.p_tilde.grid

    def problem(self, rhs: SampledFunction, eta1: float = 0.0,
                eta2: float = 0.0) -> SturmLiouvilleProblem:
        return SturmLiouvilleProblem.from_general(self.p_tilde, self.q_tilde, rhs, eta1, eta2)

    def apply(self, phi: SampledFunction) -> np.ndarray:
        return phi.d2 + self.p_tilde.values * phi.d1 + self.q_tilde.values * phi.values


def operator_L(f: SampledFunction, chi: SampledFunction, tol: float = 1e-8) -> LinearizedOperator:
    """Coefficients of the product-trick operator.

    Round-off positive values of ``qt`` up to ``tol`` are set to zero so the
    maximum principle is recognised; anything larger is a broken certificate.
    """
    if chi.grid != f.grid:
        raise ValueError("chi and f live on different grids")
    if chi.min() <= 0.0:
        raise CertificateInvalid("stability function has a zero or negative node")
    fv, cv = f.values, chi.values
    pt = 2.0 * (chi.d1 / cv - f.d1 / fv)
    qt = chi.d2 / cv - 2.0 * f.d1 * chi.d1 / (fv * cv) + f.d2 / fv
    if np.max(qt) > tol:
        raise CertificateInvalid(f"zero-order coefficient is positive (max {np.max(qt):.3e})")
    qt = np.minimum(qt, 0.0)
    return LinearizedOperator(SampledFunction(f.grid, pt), SampledFunction(f.grid, qt))


def phi_rhs(phi: SampledFunction, chi: SampledFunction, f: SampledFunction) -> SampledFunction:
    """Nonlinear right-hand side ``Phi(phi; chi)``."""
    fv, cv = f.values, chi.values
    w = cv / fv
    vals = (w * phi.d1 ** 2 - w * phi.values * phi.d2
            + (chi.d1 ** 2 / (fv * cv) - chi.d2 / fv) * phi.values ** 2)
    return SampledFunction(phi.grid, vals)


def lipschitz_constant(chi: SampledFunction, f: SampledFunction, alpha: float) -> float:
    L = f.grid.length
    w = (1.0 + L ** (1.0 - alpha)) ** 2
    A = SampledFunction(f.grid, chi.values / f.values)
    B = SampledFunction(f.grid, chi.d1 ** 2 / (chi.values * f.values) - chi.d2 / f.values)
    return (2.0 * holder_norm(A, 0, alpha) + holder_norm(B, 0, alpha) * w) * w


@dataclass(frozen=True)
class IterationConstants:
    lipschitz: float   # C_1: Lipschitz constant of Phi
    schauder_rhs: float  # C_2: weight of ||Phi||_alpha
    schauder_bdry: float  # C_3: weight of the boundary magnitude a
    ledger: ConstantLedger

    @property
    def product(self) -> float:
        return self.lipschitz * self.schauder_rhs * self.schauder_bdry


def schauder_weights(op: LinearizedOperator, ledger: ConstantLedger) -> Tuple[float, float]:
    """Constants of ``||phi||_{2+a} <= C2 ||L phi||_a + C3 max|phi(boundary)|``.

    From the global estimate with ``f = p L[phi]``, the C^0 estimate and
    ``||p g||_a <= ||p||_a ||g||_a``.
    """
    b = ledger.inputs
    g = op.grid
    k0 = c0_bound_factor(ledger.nu, g.a, g.b)
    C2 = ledger.C1_global * b.p1hat + ledger.C2_global * b.p1 * k0
    C3 = 3.0 * ledger.C2_global
    return C2, C3


def iteration_constants(f: SampledFunction, chi: SampledFunction, alpha: float = 0.5,
                        mu: Optional[float] = None) -> IterationConstants:
    op = operator_L(f, chi)
    zero = SampledFunction(f.grid, np.zeros(f.grid.n))
    ledger = ledger_for(op.problem(zero), alpha, mu)
    C2, C3 = schauder_weights(op, ledger)
    return IterationConstants(lipschitz_constant(chi, f, alpha), C2, C3, ledger)


def admissible_boundary(constants: IterationConstants, epsilon: float) -> float:
    """Largest ``a`` with ``2aK(1 + aK/(1-eps)) <= eps``, ``K = C1 C2 C3``."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    k = 1.0 - epsilon
    # 2y + 2y^2/k = eps with y = aK; positive root
    y = 0.25 * k * (-2.0 + math.sqrt(4.0 + 8.0 * epsilon / k))
    return y / constants.product


@dataclass
class IterationTrace:
    step_norms: List[float] = field(default_factory=list)
    diff_norms: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)
    epsilon: float = 0.0
    converged: bool = False
    steps: int = 0
    iterates: List[SampledFunction] = field(default_factory=list)


@dataclass(frozen=True)
class PerturbationConfig:
    alpha: float = 0.5
    tol: float = 1e-10
    max_iter: int = 200
    residual_tol: float = 1e-4
    mu: Optional[float] = None
    check_admissible: bool = True
    keep_iterates: bool = False


@dataclass(frozen=True)
class PerturbationResult:
    psi: SampledFunction
    phi: SampledFunction
    trace: IterationTrace
    a: float
    certificate: StabilityCertificate
    constants: IterationConstants
    a_max: float
    residual: float


def _fixed_point(op, chi, f, phi_left, phi_right, epsilon, cfg) -> Tuple[SampledFunction, IterationTrace]:
    alpha = cfg.alpha
    trace = IterationTrace(epsilon=epsilon)
    phi = SampledFunction(f.grid, np.zeros(f.grid.n))
    for k in range(1, cfg.max_iter + 1):
        rhs = phi_rhs(phi, chi, f)
        new = bvp.solve(op.problem(rhs, phi_left, phi_right))
        diff = holder_norm(new - phi, 2, alpha)
        trace.step_norms.append(holder_norm(new, 2, alpha))
        trace.diff_norms.append(diff)
        if cfg.keep_iterates:
            trace.iterates.append(new)
        if len(trace.diff_norms) > 1:
            prev = trace.diff_norms[-2]
            ratio = diff / prev if prev > 0 else 0.0
            trace.ratios.append(ratio)
            if ratio > 1.0 and prev > 100.0 * cfg.tol:
                trace.steps = k
                raise NotContracting(f"step {k}: difference grew by a factor {ratio:.3g}")
        phi = new
        trace.steps = k
        if diff < cfg.tol:
            trace.converged = True
            return phi, trace
        recent = trace.diff_norms[-STALL_WINDOW:]
        if len(recent) == STALL_WINDOW and min(recent) > 0.99 * recent[0]:
            raise NoConvergence(
                f"differences stalled at {diff:.3e}, above the tolerance {cfg.tol:g}; "
                "the grid is too fine for this tolerance in double precision",
                residuals=list(trace.diff_norms), stage="stalled",
            )
    raise NoConvergence(
        f"fixed-point iteration did not reach {cfg.tol:g} in {cfg.max_iter} steps",
        residuals=list(trace.diff_norms), stage="fixed_point",
    )


def perturb(f: SampledFunction, phi_left: float, phi_right: float, epsilon: float = 0.5,
            config: PerturbationConfig = PerturbationConfig()) -> PerturbationResult:
    """Minimal profile ``f + phi chi`` with ``phi`` prescribed at both ends."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    cert = stability_function(f, select="balanced")
    chi = cert.chi
    op = operator_L(f, chi)
    consts = iteration_constants(f, chi, config.alpha, config.mu)
    a = max(abs(phi_left), abs(phi_right))
    a_max = admissible_boundary(consts, epsilon)
    if config.check_admissible and a > a_max:
        raise BoundaryDataTooLarge(
            f"boundary magnitude {a:.3e} exceeds the admissible {a_max:.3e}"
        )
    phi, trace = _fixed_point(op, chi, f, float(phi_left), float(phi_right), epsilon, config)
    psi = phi * chi
    res = minimal_residual(f + psi)
    if res > config.residual_tol:
        raise NoConvergence(
            f"perturbed profile misses the minimal surface equation by {res:.3e}",
            residuals=[res], stage="residual",
        )
    return PerturbationResult(psi, phi, trace, a, cert, consts, a_max, res)
