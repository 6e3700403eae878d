"""Explicit a priori constants for Sturm-Liouville problems and their checks.

:func:`compute_ledger` evaluates every constant of the global
``C^{2+alpha}`` estimate from coefficient bounds. The ``verify_*`` helpers
evaluate both sides of each intermediate estimate with discrete norms and
return an :class:`EstimateReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bvp import (
    CoefficientBounds,
    SturmLiouvilleProblem,
    coefficient_bounds,
    max_principle_applies,
)
from .errors import (
    LedgerMismatch,
    MaxPrincipleInapplicable,
    MuTooLarge,
    NoValidMu,
    NotAPoissonSolution,
)
from .grid import Grid, SampledFunction, ck_norm, holder_norm, holder_seminorm

MU_CANDIDATES = (0.49, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05, 0.01)


@dataclass(frozen=True)
class ConstantLedger:
    mu: float
    nu: float
    c: Tuple[float, ...]  # c[0] is c_1, ..., c[14] is c_15
    C1_global: float
    C2_global: float
    inputs: CoefficientBounds
    interval_length: float
    alpha: float

    def ci(self, i: int) -> float:
        """1-based access: ``ledger.ci(13)`` is c_13."""
        return self.c[i - 1]


@dataclass(frozen=True)
class EstimateReport:
    which: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def _constants(b: CoefficientBounds, L: float, alpha: float, mu: float):
    p0, p1, dp1, q1 = b.p0, b.p1, b.p1prime, b.q1
    ph1, qh1, dph1 = b.p1hat, b.q1hat, b.p1prime_hat
    La = L ** (1.0 - alpha)

    c1 = La * (dp1 / p0 + 2 * p1 * dp1 / (mu * p0 ** 2 * L)
               + dp1 * q1 * L / (2 * p0 ** 2) + q1 / p0)
    c2 = La * (dp1 * L / (2 * p0 ** 2) + 1.0 / p0)
    c3 = p1 * dp1 * L ** (2.0 - alpha) / (2 * p0 ** 2)

    c4 = c2 + L / (2 * p0)
    c5 = 1.0 + c1 + 2 * p1 / (mu * p0 * L) + q1 * L / (2 * p0)
    c6 = c3 + p1 * L / (2 * p0)

    c7 = (1.0 + dp1 * c4) / p0
    c8 = (dp1 * c5 + q1) / p0
    c9 = dp1 / p0 * c6

    c10 = (1.0 + dph1 * c4 + qh1 * La * c4) / p0
    c11 = (dph1 * c5 + qh1 + qh1 * La * c5) / p0
    c12 = (dph1 * c6 + qh1 * La * c6) / p0

    w = (2.0 + (1.0 + mu) * L) / 2.0
    c13 = w * c7 + c10
    c14 = w * c8 + (2.0 + mu * L) / (mu * L) + c11
    c15 = w * c9 + c12
    return (c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14, c15)


def compute_ledger(bounds: CoefficientBounds, interval_length: float,
                   alpha: float, mu: float) -> ConstantLedger:
    if not (0.0 < mu < 0.5):
        raise ValueError(f"mu must lie in (0, 1/2), got {mu}")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if interval_length <= 0.0:
        raise ValueError("interval length must be positive")
    c = _constants(bounds, float(interval_length), float(alpha), float(mu))
    absorb = 1.0 - mu * c[14]
    if absorb <= 0.0:
        raise MuTooLarge(f"mu * c15 = {mu * c[14]:.6g} >= 1; choose a smaller mu")
    return ConstantLedger(
        mu=float(mu),
        nu=(1.0 + bounds.p1prime) / bounds.p0,
        c=tuple(float(x) for x in c),
        C1_global=c[12] / absorb,
        C2_global=c[13] / absorb,
        inputs=bounds,
        interval_length=float(interval_length),
        alpha=float(alpha),
    )


def choose_mu(bounds: CoefficientBounds, interval_length: float, alpha: float) -> float:
    """Largest mu from :data:`MU_CANDIDATES` with ``mu * c15(mu) < 1/2``."""
    for mu in MU_CANDIDATES:
        c15 = _constants(bounds, interval_length, alpha, mu)[14]
        if mu * c15 < 0.5:
            return mu
    raise NoValidMu("no candidate mu keeps mu * c15 below 1/2")


def ledger_for(problem: SturmLiouvilleProblem, alpha: float = 0.5,
               mu: Optional[float] = None) -> ConstantLedger:
    """Coefficient bounds, mu and ledger for one problem in a single call."""
    bounds = coefficient_bounds(problem, alpha)
    L = problem.grid.length
    if mu is None:
        mu = choose_mu(bounds, L, alpha)
    return compute_ledger(bounds, L, alpha, mu)


def c0_bound_factor(nu: float, a: float, b: float) -> float:
    """Factor multiplying ``||f||_0`` in the C^0 estimate, as printed."""
    return math.exp(nu * (b - a)) / (nu * math.exp(nu * a))


def _boundary_max(u: SampledFunction) -> float:
    return max(abs(u.values[0]), abs(u.values[-1]))


def verify_c0_estimate(problem: SturmLiouvilleProblem, u: SampledFunction) -> EstimateReport:
    if not max_principle_applies(problem):
        raise MaxPrincipleInapplicable("C^0 estimate needs q <= 0")
    p = problem.p
    nu = (1.0 + float(np.max(np.abs(p.d1)))) / p.min()
    g = problem.grid
    rhs = 3 * _boundary_max(u) + ck_norm(problem.rhs, 0) * c0_bound_factor(nu, g.a, g.b)
    return EstimateReport("c0", ck_norm(u, 0), rhs)


def _check_ledger(problem: SturmLiouvilleProblem, ledger: ConstantLedger):
    fresh = coefficient_bounds(problem, ledger.alpha)
    if not np.allclose(fresh.as_tuple(), ledger.inputs.as_tuple(), rtol=1e-9, atol=1e-12):
        raise LedgerMismatch("ledger was computed from different coefficient bounds")
    if not math.isclose(problem.grid.length, ledger.interval_length, rel_tol=1e-12):
        raise LedgerMismatch("ledger was computed for a different interval length")


def verify_c1_estimate(problem, u, ledger: ConstantLedger) -> EstimateReport:
    _check_ledger(problem, ledger)
    b, L, mu, a = ledger.inputs, ledger.interval_length, ledger.mu, ledger.alpha
    rhs = (L / (2 * b.p0) * ck_norm(problem.rhs, 0)
           + (1 + 2 * b.p1 / (mu * b.p0 * L) + b.q1 * L / (2 * b.p0)) * ck_norm(u, 0)
           + mu * b.p1 * L / (2 * b.p0) * holder_norm(u, 2, a))
    return EstimateReport("c1", ck_norm(u, 1), rhs)


def verify_calpha_estimate(problem, u, ledger: ConstantLedger) -> EstimateReport:
    L, a = ledger.interval_length, ledger.alpha
    rhs = ck_norm(u, 0) + L ** (1 - a) * ck_norm(u, 1)
    return EstimateReport("holder0", holder_norm(u, 0, a), rhs)


def verify_c1alpha_estimates(problem, u, ledger: ConstantLedger) -> List[EstimateReport]:
    _check_ledger(problem, ledger)
    c, mu, a = ledger.c, ledger.mu, ledger.alpha
    u0, u1, u2a = ck_norm(u, 0), ck_norm(u, 1), holder_norm(u, 2, a)
    f0 = ck_norm(problem.rhs, 0)
    lhs = holder_norm(u, 1, a)
    return [
        EstimateReport("c1_alpha_raw", lhs, u1 + c[0] * u0 + c[1] * f0 + mu * c[2] * u2a),
        EstimateReport("c1_alpha", lhs, c[3] * f0 + c[4] * u0 + mu * c[5] * u2a),
    ]


def verify_absorption_chain(problem, u, ledger: ConstantLedger) -> EstimateReport:
    """The estimate just before the ``||u||_{2+alpha}`` term is absorbed."""
    _check_ledger(problem, ledger)
    c, mu, a = ledger.c, ledger.mu, ledger.alpha
    u2a = holder_norm(u, 2, a)
    rhs = (c[12] * holder_norm(problem.rhs, 0, a) + c[13] * ck_norm(u, 0)
           + mu * c[14] * u2a)
    return EstimateReport("absorption", u2a, rhs)


def verify_global_estimate(problem, u, ledger: ConstantLedger) -> EstimateReport:
    _check_ledger(problem, ledger)
    a = ledger.alpha
    rhs = ledger.C1_global * holder_norm(problem.rhs, 0, a) + ledger.C2_global * ck_norm(u, 0)
    return EstimateReport("global", holder_norm(u, 2, a), rhs)


def verify_poisson_estimates(u: SampledFunction, F: SampledFunction, mu: float = 0.25,
                             alpha: float = 0.5, tol: float = 1e-6) -> List[EstimateReport]:
    """Check the six Poisson-equation estimates for ``u'' = F``.

    ``u`` must satisfy the equation at interior nodes up to
    ``tol * max(1, ||F||_0)``.
    """
    if F.grid != u.grid:
        raise ValueError("u and F live on different grids")
    F0 = ck_norm(F, 0)
    defect = float(np.max(np.abs(u.d2[1:-1] - F.values[1:-1])))
    if defect > tol * max(1.0, F0):
        raise NotAPoissonSolution(f"u'' - F has max interior defect {defect:.3e}")
    g = u.grid
    L, a_, b_ = g.length, g.a, g.b
    u0, u1, u2 = ck_norm(u, 0), ck_norm(u, 1), ck_norm(u, 2)
    semi1 = float(np.max(np.abs(u.d1)))
    semi2 = float(np.max(np.abs(u.d2)))
    k = (2 + mu * L) / (mu * L)
    La = L ** (1 - alpha)
    return [
        EstimateReport("poisson_c0", u0, 3 * _boundary_max(u) + F0 * c0_bound_factor(1.0, a_, b_)),
        EstimateReport("poisson_c1", u1, (1 + mu) * L / 2 * F0 + k * u0),
        EstimateReport("poisson_c2", u2, (2 + (1 + mu) * L) / 2 * F0 + k * u0),
        EstimateReport("poisson_holder0", holder_norm(u, 0, alpha), u0 + La * semi1),
        EstimateReport("poisson_holder1", holder_norm(u, 1, alpha), u1 + La * semi2),
        EstimateReport("poisson_holder2", holder_norm(u, 2, alpha), u2 + holder_norm(F, 0, alpha)),
    ]


def verify_all(problem: SturmLiouvilleProblem, u: SampledFunction,
               ledger: ConstantLedger) -> List[EstimateReport]:
    """Every estimate of the chain for one solved problem with ``q <= 0``."""
    reports = [verify_c0_estimate(problem, u),
               verify_c1_estimate(problem, u, ledger),
               verify_calpha_estimate(problem, u, ledger)]
    reports += verify_c1alpha_estimates(problem, u, ledger)
    F = SampledFunction(u.grid, u.d2)
    reports += verify_poisson_estimates(u, F, mu=ledger.mu, alpha=ledger.alpha)
    reports.append(verify_absorption_chain(problem, u, ledger))
    reports.append(verify_global_estimate(problem, u, ledger))
    return reports


def random_problem(rng: np.random.Generator, n: int = 201,
                   q_sign: float = -1.0) -> SturmLiouvilleProblem:
    """A smooth random problem on an interval ``[a, a + L]`` with ``a <= 0``.

    ``q_sign = -1`` gives ``q <= 0``; ``+1`` gives ``q >= 0``.
    """
    a = rng.uniform(-1.0, 0.0)
    L = rng.uniform(0.5, 1.5)
    grid = Grid(a, a + L, n)
    x = grid.nodes

    c0, c1 = rng.uniform(-0.3, 0.3, size=2)
    w1, s1 = rng.uniform(0.5, 3.0), rng.uniform(0, 2 * np.pi)
    pt = SampledFunction(grid, c0 + c1 * np.sin(w1 * x + s1),
                         c1 * w1 * np.cos(w1 * x + s1),
                         -c1 * w1 ** 2 * np.sin(w1 * x + s1))

    d0 = rng.uniform(0.0, 1.0) * (rng.random() > 0.2)
    d1 = rng.uniform(0.0, 0.5)
    w2, s2 = rng.uniform(0.5, 3.0), rng.uniform(0, 2 * np.pi)
    qt = SampledFunction(grid, q_sign * (d0 + d1 * (1 + np.sin(w2 * x + s2))))

    e0, e1, e2 = rng.uniform(-2.0, 2.0, size=3)
    w3, s3 = rng.uniform(0.5, 4.0), rng.uniform(0, 2 * np.pi)
    ft = SampledFunction(grid, e0 + e1 * np.cos(w3 * x + s3) + e2 * x ** 2)

    eta1, eta2 = rng.uniform(-1.0, 1.0, size=2)
    return SturmLiouvilleProblem.from_general(pt, qt, ft, eta1, eta2)


def min_slack(reports: Sequence[EstimateReport]) -> float:
    return min(r.slack for r in reports)
