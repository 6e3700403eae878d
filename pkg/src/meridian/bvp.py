"""Sturm-Liouville two-point boundary value problems.

Problems are stored in self-adjoint form ``(p u')' + q u = f`` on a uniform
grid with Dirichlet data ``u(a) = eta1``, ``u(b) = eta2``. The general form
``u'' + pt u' + qt u = ft`` is brought into this shape by
:func:`normalize_to_sl`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import lapack

from .errors import NonFiniteCoefficient, SingularSystem
from .grid import Grid, SampledFunction, holder_norm

__all__ = [
    "SturmLiouvilleProblem",
    "SLCoefficients",
    "CoefficientBounds",
    "normalize_to_sl",
    "solve",
    "max_principle_applies",
    "coefficient_bounds",
    "residual",
    "discrete_operator",
]

PIVOT_RTOL = 1e-10
# Kernel detection for q > 0: a pivot ratio below RESOLUTION_FACTOR * (h/L)^2
# cannot be told apart from an exact kernel at second-order accuracy.
RESOLUTION_FACTOR = 100.0
RESOLUTION_CAP = 1e-2


class SLCoefficients(NamedTuple):
    p: SampledFunction
    q: SampledFunction
    rhs: SampledFunction


@dataclass(frozen=True, eq=False)
class SturmLiouvilleProblem:
    grid: Grid
    p: SampledFunction
    q: SampledFunction
    rhs: SampledFunction
    eta1: float = 0.0
    eta2: float = 0.0

    def __post_init__(self):
        for name in ("p", "q", "rhs"):
            if getattr(self, name).grid != self.grid:
                raise ValueError(f"{name} is sampled on a different grid")
        if np.any(self.p.values <= 0.0):
            raise ValueError("p must be strictly positive")
        if not (np.isfinite(self.eta1) and np.isfinite(self.eta2)):
            raise NonFiniteCoefficient("boundary values must be finite")

    @classmethod
    def from_general(cls, p_tilde, q_tilde, f_tilde, eta1=0.0, eta2=0.0):
        """Build the problem for ``u'' + pt u' + qt u = ft``."""
        coeffs = normalize_to_sl(p_tilde, q_tilde, f_tilde)
        return cls(p_tilde.grid, coeffs.p, coeffs.q, coeffs.rhs, float(eta1), float(eta2))

    def with_rhs(self, rhs: SampledFunction, eta1=None, eta2=None) -> "SturmLiouvilleProblem":
        return SturmLiouvilleProblem(
            self.grid, self.p, self.q, rhs,
            self.eta1 if eta1 is None else float(eta1),
            self.eta2 if eta2 is None else float(eta2),
        )


def normalize_to_sl(p_tilde: SampledFunction, q_tilde: SampledFunction,
                    f_tilde: SampledFunction) -> SLCoefficients:
    """Multiply by ``p = exp(int_a^x pt)`` to reach self-adjoint form.

    ``p'`` is carried analytically as ``p * pt``.
    """
    grid = p_tilde.grid
    if q_tilde.grid != grid or f_tilde.grid != grid:
        raise ValueError("coefficients must share one grid")
    with np.errstate(over="ignore", invalid="ignore"):
        integral = cumulative_trapezoid(p_tilde.values, grid.nodes, initial=0.0)
        p_vals = np.exp(integral)
        p_d1 = p_vals * p_tilde.values
        p_d2 = p_d1 * p_tilde.values + p_vals * p_tilde.d1
        q_vals = p_vals * q_tilde.values
        f_vals = p_vals * f_tilde.values
    for arr in (p_vals, p_d1, p_d2, q_vals, f_vals):
        if not np.all(np.isfinite(arr)):
            raise NonFiniteCoefficient("normalized coefficients overflow")
    p = SampledFunction(grid, p_vals, p_d1, p_d2)
    return SLCoefficients(p, SampledFunction(grid, q_vals), SampledFunction(grid, f_vals))


def _bands(problem: SturmLiouvilleProblem):
    """Interior rows of the conservative flux discretization."""
    h2 = problem.grid.spacing ** 2
    p = problem.p.values
    pm = 0.5 * (p[:-1] + p[1:])  # p at half nodes
    lower = pm[:-1] / h2          # coefficient of u_{i-1}, i = 1..n-2
    upper = pm[1:] / h2           # coefficient of u_{i+1}
    diag = -(pm[:-1] + pm[1:]) / h2 + problem.q.values[1:-1]
    return lower, diag, upper


def discrete_operator(problem: SturmLiouvilleProblem, u: np.ndarray) -> np.ndarray:
    """Apply the discrete ``(p u')' + q u`` at interior nodes."""
    lower, diag, upper = _bands(problem)
    return lower * u[:-2] + diag * u[1:-1] + upper * u[2:]


def _singularity_threshold(problem: SturmLiouvilleProblem) -> float:
    if max_principle_applies(problem):
        return PIVOT_RTOL
    rel_h = 1.0 / (problem.grid.n - 1)
    return max(PIVOT_RTOL, min(RESOLUTION_CAP, RESOLUTION_FACTOR * rel_h ** 2))


def solve(problem: SturmLiouvilleProblem) -> SampledFunction:
    """Solve the discrete problem by banded LU with partial pivoting.

    Raises :class:`SingularSystem` when the smallest pivot of the row-equilibrated
    system is negligible against the largest one. For ``q <= 0`` the maximum
    principle rules out a kernel and only a round-off threshold applies; for
    ``q > 0`` pivots below the second-order resolution of the grid count as a
    kernel, since the continuum problem may then have no solution at all.
    """
    grid = problem.grid
    m = grid.n - 2
    lower, diag, upper = _bands(problem)
    rhs = problem.rhs.values[1:-1].copy()
    rhs[0] -= lower[0] * problem.eta1
    rhs[-1] -= upper[-1] * problem.eta2

    scale = 1.0 / np.maximum(np.abs(lower) + np.abs(diag) + np.abs(upper), 1e-300)
    lower, diag, upper, rhs = lower * scale, diag * scale, upper * scale, rhs * scale

    ab = np.zeros((4, m))
    ab[1, 1:] = upper[:-1]
    ab[2, :] = diag
    ab[3, :-1] = lower[1:]
    lu, piv, info = lapack.dgbtrf(ab, 1, 1)
    pivots = np.abs(lu[2, :])
    ratio = pivots.min() / pivots.max() if pivots.max() > 0 else 0.0
    if info > 0 or ratio < _singularity_threshold(problem):
        raise SingularSystem(
            f"discrete homogeneous problem is (near-)singular: pivot ratio {ratio:.3e}"
        )
    sol, info = lapack.dgbtrs(lu, 1, 1, rhs, piv)
    if info != 0:
        raise SingularSystem(f"banded back-substitution failed (info={info})")
    u = np.empty(grid.n)
    u[0], u[-1] = problem.eta1, problem.eta2
    u[1:-1] = sol
    return SampledFunction(grid, u)


def max_principle_applies(problem: SturmLiouvilleProblem) -> bool:
    return bool(np.all(problem.q.values <= 0.0))


@dataclass(frozen=True)
class CoefficientBounds:
    p0: float
    p1: float
    p1prime: float
    q1: float
    p1hat: float
    q1hat: float
    p1prime_hat: float
    alpha: float

    def as_tuple(self):
        return (self.p0, self.p1, self.p1prime, self.q1,
                self.p1hat, self.q1hat, self.p1prime_hat)


def coefficient_bounds(problem: SturmLiouvilleProblem, alpha: float) -> CoefficientBounds:
    """Constants bounding p, p' and q; q1 is taken as max |q|."""
    p, q = problem.p, problem.q
    return CoefficientBounds(
        p0=p.min(),
        p1=p.max(),
        p1prime=float(np.max(np.abs(p.d1))),
        q1=float(np.max(np.abs(q.values))),
        p1hat=holder_norm(p, 0, alpha),
        q1hat=holder_norm(q, 0, alpha),
        p1prime_hat=holder_norm(p, 1, alpha),
        alpha=float(alpha),
    )


def residual(problem: SturmLiouvilleProblem, u: SampledFunction) -> float:
    """Max interior defect of ``(p u')' + q u - f`` under the solver's stencil."""
    if u.grid != problem.grid:
        raise ValueError("u lives on a different grid")
    r = discrete_operator(problem, u.values) - problem.rhs.values[1:-1]
    return float(np.max(np.abs(r)))
