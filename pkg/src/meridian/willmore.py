"""Curvature along the meridian and critical points of ``int (a + b H^2 - g K) dA``.

Sign convention: ``H = f''/(2 W^3) - 1/(2 f W)`` with ``W = sqrt(1 + f'^2)``,
so catenoids have ``H = 0``, the cylinder of radius ``c`` has ``H = -1/(2c)``
and the sphere of radius ``R`` has ``H = -1/R``.

Two readings of the Gauss curvature are offered. ``paper_318`` is
``-f''/(f W^2)``; ``principal_product`` is the product of the principal
curvatures, ``-f''/(f W^4)``. They agree where ``f' = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.integrate import simpson, solve_ivp
from scipy.optimize import brentq
from scipy.sparse.linalg import spsolve

from . import bvp
from .catenary import RingBoundary, critical_ratio, fit
from .errors import (
    BetaZero,
    Condition414Violated,
    EpsilonTooLarge,
    NoConvergence,
    NonPositiveProfile,
    NotContracting,
)
from .grid import Grid, SampledFunction, holder_norm
from .schauder import ledger_for
from .stability import LinearizedOperator, operator_L, schauder_weights

__all__ = [
    "KVariant",
    "ModelParams",
    "MeridianSurface",
    "mean_curvature",
    "gauss_curvature",
    "laplace_beltrami_H",
    "willmore_operator",
    "willmore_ode_residual",
    "mc_ode_residual",
    "energy",
    "condition_414",
    "linearized_mean_curvature",
    "phi1",
    "phi2",
    "operator_L2",
    "CoupledConstants",
    "coupled_constants",
    "CoupledConfig",
    "CoupledTrace",
    "iterate_coupled",
    "WillmoreConfig",
    "bent_branch_profile",
    "solve_willmore_bvp",
]


class KVariant(str, Enum):
    PAPER_318 = "paper_318"
    PRINCIPAL_PRODUCT = "principal_product"


def _variant(v) -> KVariant:
    return KVariant(v)


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 0.0
    beta: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0:
            raise ValueError("alpha and gamma must be non-negative")

    def ratio(self) -> float:
        """``alpha / beta``; needs ``beta != 0``."""
        if self.beta == 0:
            raise BetaZero("the Euler-Lagrange equation needs beta != 0")
        return self.alpha / self.beta


WILLMORE = ModelParams(0.0, 1.0, 0.0)


def _check_f(f: SampledFunction):
    if np.any(f.values <= 0.0):
        raise NonPositiveProfile("meridian profile must be positive")


def _w2(f: SampledFunction) -> np.ndarray:
    return 1.0 + f.d1 ** 2


def _mc_values(f, d1, d2):
    w2 = 1.0 + d1 ** 2
    return d2 / (2.0 * w2 ** 1.5) - 1.0 / (2.0 * f * np.sqrt(w2))


def mean_curvature(f: SampledFunction) -> SampledFunction:
    _check_f(f)
    return SampledFunction(f.grid, _mc_values(f.values, f.d1, f.d2))


def _kappa(f: SampledFunction, variant) -> np.ndarray:
    """Coefficient of ``2H`` in the Euler-Lagrange equation, ``-K W^2``."""
    k = f.d2 / f.values
    if _variant(variant) is KVariant.PRINCIPAL_PRODUCT:
        k = k / _w2(f)
    return k


def gauss_curvature(f: SampledFunction, variant=KVariant.PAPER_318) -> SampledFunction:
    _check_f(f)
    return SampledFunction(f.grid, -_kappa(f, variant) / _w2(f))


def laplace_beltrami_H(f: SampledFunction, H: SampledFunction) -> SampledFunction:
    _check_f(f)
    w2 = _w2(f)
    vals = f.d1 / w2 * (1.0 / f.values - f.d2 / w2) * H.d1 + H.d2 / w2
    return SampledFunction(f.grid, vals)


def willmore_operator(f: SampledFunction, H: SampledFunction, params: ModelParams,
                      variant=KVariant.PAPER_318) -> np.ndarray:
    """Left side of the rotationally symmetric Euler-Lagrange equation, nodewise."""
    ab = params.ratio()
    _check_f(f)
    w2 = _w2(f)
    h = H.values
    return (H.d2 + f.d1 * (1.0 / f.values - f.d2 / w2) * H.d1
            + 2.0 * h ** 3 * w2 + 2.0 * _kappa(f, variant) * h - 2.0 * ab * w2 * h)


@dataclass(frozen=True, eq=False)
class MeridianSurface:
    f: SampledFunction
    H: SampledFunction
    params: ModelParams = WILLMORE
    k_variant: KVariant = KVariant.PAPER_318
    info: Dict = field(default_factory=dict)

    def __post_init__(self):
        _check_f(self.f)
        if self.H.grid != self.f.grid:
            raise ValueError("f and H must share the grid")
        object.__setattr__(self, "k_variant", _variant(self.k_variant))

    @property
    def grid(self) -> Grid:
        return self.f.grid

    def area(self) -> float:
        return energy(self, ModelParams(1.0, 0.0, 0.0))

    def willmore_energy(self) -> float:
        return energy(self, ModelParams(0.0, 1.0, 0.0))


def willmore_ode_residual(surface: MeridianSurface) -> float:
    r = willmore_operator(surface.f, surface.H, surface.params, surface.k_variant)
    return float(np.max(np.abs(r[1:-1])))


def mc_ode_residual(f: SampledFunction, H: SampledFunction) -> float:
    _check_f(f)
    w2 = _w2(f)
    r = f.d2 - 2.0 * H.values * w2 ** 1.5 - w2 / f.values
    return float(np.max(np.abs(r[1:-1])))


def energy(surface: MeridianSurface, params: Optional[ModelParams] = None) -> float:
    """``2 pi int (alpha + beta H^2 - gamma K) f W dx`` by Simpson's rule."""
    p = surface.params if params is None else params
    f, H = surface.f, surface.H
    _check_f(f)
    K = gauss_curvature(f, surface.k_variant).values
    dens = p.alpha + p.beta * H.values ** 2 - p.gamma * K
    return float(2.0 * math.pi * simpson(dens * f.values * np.sqrt(_w2(f)), x=f.nodes))


def condition_414(f: SampledFunction, params: ModelParams) -> bool:
    """Maximum principle for the curvature operator: ``1/min(f)^2 < alpha/beta``."""
    if params.beta == 0:
        raise BetaZero("condition needs beta != 0")
    _check_f(f)
    return bool(1.0 / f.min() ** 2 < params.alpha / params.beta)


def linearized_mean_curvature(f: SampledFunction, psi: SampledFunction) -> np.ndarray:
    """First-order change of ``H`` along ``f + psi`` for a minimal ``f``."""
    w3 = _w2(f) ** 1.5
    return (psi.d2 / (2 * w3) - f.d1 * psi.d1 / (f.values * w3)
            + f.d2 * psi.values / (2 * f.values * w3))


def _jacobi(f: SampledFunction, psi: SampledFunction) -> np.ndarray:
    return psi.d2 - 2.0 * f.d1 / f.values * psi.d1 + f.d2 / f.values * psi.values


def phi1(phi: SampledFunction, H_tilde: SampledFunction, f: SampledFunction,
         chi: SampledFunction) -> SampledFunction:
    """Right side of the transformed mean-curvature equation.

    The super-linear part is the exact difference between the Jacobi operator
    and ``2 W^3`` times the change in mean curvature; ``H(f)`` is subtracted
    so the map vanishes at ``(0, 0)`` in floating point.
    """
    psi = phi * chi
    w3 = _w2(f) ** 1.5
    g = f + psi
    _check_f(g)
    dH = _mc_values(g.values, g.d1, g.d2) - _mc_values(f.values, f.d1, f.d2)
    nonlinear = _jacobi(f, psi) - 2.0 * w3 * dH
    return SampledFunction(f.grid, (2.0 * w3 * H_tilde.values + nonlinear) / chi.values)


def _l2_coefficient(f: SampledFunction, params: ModelParams, variant) -> np.ndarray:
    return 2.0 * _kappa(f, variant) - 2.0 * params.ratio() * _w2(f)


def phi2(phi: SampledFunction, H_tilde: SampledFunction, f: SampledFunction,
         params: ModelParams, chi: Optional[SampledFunction] = None,
         variant=KVariant.PAPER_318) -> SampledFunction:
    """Right side of the perturbed curvature equation, ``L2[H] - EL(f + psi, H)``.

    The profile is perturbed by ``psi = phi * chi`` when ``chi`` is given and
    by ``phi`` itself otherwise.
    """
    psi = phi if chi is None else phi * chi
    g = f + psi
    l2 = H_tilde.d2 + _l2_coefficient(f, params, variant) * H_tilde.values
    return SampledFunction(f.grid, l2 - willmore_operator(g, H_tilde, params, variant))


def operator_L2(f: SampledFunction, params: ModelParams,
                variant=KVariant.PAPER_318) -> LinearizedOperator:
    zero = SampledFunction(f.grid, np.zeros(f.grid.n))
    q = SampledFunction(f.grid, _l2_coefficient(f, params, variant))
    return LinearizedOperator(zero, q)


# ---------------------------------------------------------------- coupled scheme


@dataclass(frozen=True)
class CoupledConstants:
    C4: float
    C5: float
    C6: float

    def epsilon_growth(self) -> float:
        k = self.C4 * self.C6
        return min(1.0, 1.0 / (2.0 * k), 1.0 / (k * (1.0 + k)))

    def epsilon_contraction(self) -> float:
        return 1.0 / (20.0 * self.C5 ** 2 * self.C6 ** 2)

    def epsilon_max(self) -> float:
        return min(self.epsilon_growth(), self.epsilon_contraction())

    def ratio_bound(self, epsilon: float) -> float:
        return 10.0 * epsilon * self.C5 ** 2 * self.C6 ** 2


def _random_shape(rng: np.random.Generator, x: np.ndarray, vanish: bool) -> np.ndarray:
    """One of: random mode mixture, single low mode, affine, constant."""
    kind = rng.integers(4)
    if kind == 0:
        k = np.arange(1, 5)[:, None]
        v = rng.normal(size=4) @ np.sin(np.pi * k * x[None, :])
    elif kind == 1:
        v = np.sin(np.pi * rng.integers(1, 4) * x + (0.0 if vanish else rng.uniform(0, np.pi)))
    elif kind == 2:
        v = rng.normal() + rng.normal() * x
    else:
        v = np.ones_like(x)
    if not vanish and kind == 0:
        v = v + rng.normal() * (1 - x) + rng.normal() * x
    return v


def _random_pair(rng: np.random.Generator, grid: Grid, scale_phi: float, scale_H: float):
    x = (grid.nodes - grid.a) / grid.length
    phi = _random_shape(rng, x, vanish=False)
    H = _random_shape(rng, x, vanish=False)
    phi *= scale_phi / max(np.max(np.abs(phi)), 1e-300)
    H *= scale_H / max(np.max(np.abs(H)), 1e-300)
    return SampledFunction(grid, phi), SampledFunction(grid, H)


def coupled_constants(f: SampledFunction, chi: SampledFunction, params: ModelParams,
                      alpha: float = 0.5, samples: int = 24, seed: int = 0,
                      safety: float = 2.0, variant=KVariant.PAPER_318) -> CoupledConstants:
    """Estimate the growth and Lipschitz constants of ``(Phi1, Phi2)`` by sampling.

    ``C4`` and ``C5`` are ``safety`` times the largest ratio observed over
    seeded random pairs of size between 1e-3 and 1e-1, drawn from mode
    mixtures, single low modes, affine functions and constants. Neither is
    allowed below the Hoelder norm of ``2 W^3 / chi``, which bounds the part
    of ``Phi1`` linear in ``H``. ``C6`` is the larger of the two Schauder
    weights of the linear operators, from the ledger.
    """
    rng = np.random.default_rng(seed)
    g = f.grid
    n = lambda u: holder_norm(u, 2, alpha)
    na = lambda u: holder_norm(u, 0, alpha)
    floor = na(SampledFunction(g, 2.0 * _w2(f) ** 1.5 / chi.values))
    growth, lip = floor, floor
    for _ in range(samples):
        s1, s2, s3, s4 = 10.0 ** rng.uniform(-3, -1, size=4)
        p1, h1 = _random_pair(rng, g, s1, s2)
        p2, h2 = _random_pair(rng, g, s3, s4)
        P1, H1, P2, H2 = n(p1), n(h1), n(p2), n(h2)
        growth = max(growth,
                     na(phi1(p1, h1, f, chi)) / (H1 + P1 ** 2),
                     na(phi2(p1, h1, f, params, chi, variant)) / (H1 ** 3 + P1 * H1))
        dP, dH = n(p1 - p2), n(h1 - h2)
        d1 = na(phi1(p1, h1, f, chi) - phi1(p2, h2, f, chi))
        d2 = na(phi2(p1, h1, f, params, chi, variant) - phi2(p2, h2, f, params, chi, variant))
        lip = max(lip, d1 / (dH + (P1 + P2) * dP), d2 / ((P1 + P2 + H1 + H2) * (dP + dH)))
    zero = SampledFunction(g, np.zeros(g.n))
    weights = []
    for op in (operator_L(f, chi), operator_L2(f, params, variant)):
        ledger = ledger_for(op.problem(zero), alpha)
        weights.append(schauder_weights(op, ledger)[0])
    return CoupledConstants(safety * growth, safety * lip, max(weights))


@dataclass(frozen=True)
class CoupledConfig:
    alpha: float = 0.5
    tol: float = 1e-10
    max_iter: int = 200
    samples: int = 24
    seed: int = 0
    k_variant: KVariant = KVariant.PAPER_318


@dataclass
class CoupledTrace:
    phi_norms: List[float] = field(default_factory=list)
    H_norms: List[float] = field(default_factory=list)
    diff_norms: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)
    epsilon: float = 0.0
    ratio_bound: float = 0.0
    converged: bool = False
    steps: int = 0
    constants: Optional[CoupledConstants] = None


def iterate_coupled(f: SampledFunction, chi: SampledFunction, params: ModelParams,
                    boundary_data: Sequence[float] = (0.0, 0.0),
                    epsilon: Optional[float] = None,
                    config: CoupledConfig = CoupledConfig(),
                    constants: Optional[CoupledConstants] = None,
                    ) -> Tuple[SampledFunction, SampledFunction, CoupledTrace]:
    """Alternate ``L2[H_{k+1}] = Phi2(phi_k, H_k)`` and ``L1[phi_{k+1}] = Phi1(phi_k, H_{k+1})``.

    ``boundary_data`` holds ``(phi_left, phi_right)`` and optionally
    ``(H_left, H_right)``. ``epsilon`` defaults to half the admissible maximum.
    """
    if params.beta == 0:
        raise BetaZero("the coupled scheme needs beta != 0")
    if not condition_414(f, params):
        raise Condition414Violated(
            f"1/min(f)^2 = {1 / f.min() ** 2:.4g} is not below alpha/beta = {params.ratio():.4g}"
        )
    variant = config.k_variant
    if constants is None:
        constants = coupled_constants(f, chi, params, config.alpha, config.samples,
                                      config.seed, variant=variant)
    if epsilon is None:
        epsilon = 0.5 * constants.epsilon_max()
    if epsilon > constants.epsilon_growth() or epsilon >= constants.epsilon_contraction():
        raise EpsilonTooLarge(
            f"epsilon {epsilon:.3e} exceeds the admissible {constants.epsilon_max():.3e}"
        )
    bd = list(boundary_data) + [0.0] * (4 - len(boundary_data))
    pl, pr, hl, hr = (float(v) for v in bd[:4])

    L1 = operator_L(f, chi)
    L2 = operator_L2(f, params, variant)
    g = f.grid
    phi = SampledFunction(g, np.zeros(g.n))
    H = SampledFunction(g, np.zeros(g.n))
    trace = CoupledTrace(epsilon=epsilon, ratio_bound=constants.ratio_bound(epsilon),
                         constants=constants)
    a = config.alpha
    for k in range(1, config.max_iter + 1):
        H_new = bvp.solve(L2.problem(phi2(phi, H, f, params, chi, variant), hl, hr))
        phi_new = bvp.solve(L1.problem(phi1(phi, H_new, f, chi), pl, pr))
        diff = holder_norm(phi_new - phi, 2, a) + holder_norm(H_new - H, 2, a)
        trace.phi_norms.append(holder_norm(phi_new, 2, a))
        trace.H_norms.append(holder_norm(H_new, 2, a))
        trace.diff_norms.append(diff)
        trace.steps = k
        if len(trace.diff_norms) > 1:
            prev = trace.diff_norms[-2]
            ratio = diff / prev if prev > 0 else 0.0
            trace.ratios.append(ratio)
            if ratio > 1.0 and prev > 100.0 * config.tol:
                raise NotContracting(f"step {k}: combined difference grew by {ratio:.3g}")
        phi, H = phi_new, H_new
        if diff < config.tol:
            trace.converged = True
            return phi, H, trace
    raise NoConvergence(
        f"coupled iteration did not reach {config.tol:g} in {config.max_iter} steps",
        residuals=list(trace.diff_norms), stage="coupled",
    )


# ---------------------------------------------------------------- direct solver


@dataclass(frozen=True)
class WillmoreConfig:
    grid_n: int = 801
    residual_tol: float = 1e-9
    max_newton: int = 60
    max_halvings: int = 30
    k_variant: KVariant = KVariant.PRINCIPAL_PRODUCT
    alpha_steps: int = 10

    def __post_init__(self):
        if self.grid_n < 5:
            raise ValueError("grid_n must be at least 5")
        if self.residual_tol <= 0:
            raise ValueError("residual_tol must be positive")


def _shoot_rhs(x, y, ab, principal):
    f, fp, H, Hp = y
    w2 = 1.0 + fp * fp
    fpp = 2.0 * H * w2 ** 1.5 + w2 / f
    kap = fpp / f / w2 if principal else fpp / f
    Hpp = -fp * (1.0 / f - fpp / w2) * Hp - 2.0 * H ** 3 * w2 - 2.0 * kap * H + 2.0 * ab * w2 * H
    return [fp, fpp, Hp, Hpp]


def _shoot(eta: float, principal: bool, xmax: float = 60.0):
    """Integrate from the waist ``f = 1, H = eta`` to the first zero of ``H``."""
    def hits_zero(x, y, *args):
        return y[2]
    hits_zero.terminal = True

    def collapses(x, y, *args):
        return y[0] - 1e-3
    collapses.terminal = True

    sol = solve_ivp(_shoot_rhs, (0.0, xmax), [1.0, 0.0, eta, 0.0], args=(0.0, principal),
                    rtol=1e-11, atol=1e-12, events=(hits_zero, collapses), dense_output=True)
    if len(sol.t_events[0]) == 0:
        return None
    X = float(sol.t_events[0][0])
    return X, sol.sol


def _shoot_ratio(eta: float, principal: bool) -> float:
    shot = _shoot(eta, principal)
    if shot is None:
        return math.inf
    X, dense = shot
    return 2.0 * X / float(dense(X)[0])


def bent_branch_profile(rings: RingBoundary, grid: Grid, variant=KVariant.PRINCIPAL_PRODUCT):
    """Willmore profile (``alpha = 0``) with ``H != 0`` spanning the rings.

    The waist value ``eta`` of ``H`` is found so that the first zero of ``H``
    sits at the ring ratio; the shot is then rescaled to radius ``r``.
    Returns sampled ``(f, H)`` and ``eta``.
    """
    principal = _variant(variant) is KVariant.PRINCIPAL_PRODUCT
    target = rings.ratio
    etas = -np.geomspace(1e-4, 0.98, 40)
    prev_eta, prev_rho = None, None
    bracket = None
    for eta in etas:
        rho = _shoot_ratio(eta, principal)
        if rho >= target:
            if prev_eta is None:
                raise NoConvergence(f"h/r = {target:.6g} is below the bent branch",
                                    stage="bent_seed")
            bracket = (prev_eta, eta)
            break
        prev_eta, prev_rho = eta, rho
    if bracket is None:
        raise NoConvergence(f"h/r = {target:.6g} is beyond the reach of the bent branch",
                            stage="bent_seed")
    eta = brentq(lambda e: _shoot_ratio(e, principal) - target, *bracket, xtol=1e-13)
    X, dense = _shoot(eta, principal)
    lam = rings.r / float(dense(X)[0])
    s = np.clip(np.abs(grid.nodes) / lam, 0.0, X)
    y = dense(s)
    f = SampledFunction(grid, lam * y[0])
    H = SampledFunction(grid, y[2] / lam)
    return f, H, float(eta)


def _residual_arrays(F, Hf, hstep, ab, principal):
    """Central-difference residuals of both equations at interior nodes."""
    h2 = hstep * hstep
    f = F[1:-1]
    H = Hf[1:-1]
    fp = (F[2:] - F[:-2]) / (2 * hstep)
    fpp = (F[2:] - 2 * F[1:-1] + F[:-2]) / h2
    Hp = (Hf[2:] - Hf[:-2]) / (2 * hstep)
    Hpp = (Hf[2:] - 2 * Hf[1:-1] + Hf[:-2]) / h2
    w2 = 1.0 + fp * fp
    r1 = fpp - 2.0 * H * w2 ** 1.5 - w2 / f
    kap = fpp / f / w2 if principal else fpp / f
    r2 = (Hpp + fp * (1.0 / f - fpp / w2) * Hp + 2.0 * H ** 3 * w2
          + 2.0 * kap * H - 2.0 * ab * w2 * H)
    return r1, r2


def _newton(F, Hf, hstep, ab, principal, cfg: WillmoreConfig, stage: str):
    """Damped Newton on the interior unknowns; boundary entries stay fixed."""
    m = F.shape[0] - 2
    history = []

    def resid(F_, H_):
        r1, r2 = _residual_arrays(F_, H_, hstep, ab, principal)
        return np.concatenate([r1, r2])

    R = resid(F, Hf)
    norm = float(np.max(np.abs(R)))
    history.append(norm)
    delta = 1e-30
    for it in range(cfg.max_newton):
        if norm < cfg.residual_tol:
            return F, Hf, history
        rows, cols, vals = [], [], []
        idx = np.arange(m)
        for var in (0, 1):
            for color in range(3):
                cols_c = idx[idx % 3 == color]
                Fc = F.astype(complex)
                Hc = Hf.astype(complex)
                target = Fc if var == 0 else Hc
                target[1 + cols_c] += 1j * delta
                Rc = resid(Fc, Hc).imag / delta
                for eq in (0, 1):
                    block = Rc[eq * m:(eq + 1) * m]
                    # row i is touched by column i-1, i or i+1; exactly one has this color
                    for off in (-1, 0, 1):
                        j = idx + off
                        ok = (j >= 0) & (j < m) & (j % 3 == color)
                        rows.append(eq * m + idx[ok])
                        cols.append(var * m + j[ok])
                        vals.append(block[ok])
        J = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(2 * m, 2 * m))
        step = spsolve(J, -R)
        if not np.all(np.isfinite(step)):
            raise NoConvergence("singular Newton system", residuals=history, stage=stage)
        t = 1.0
        for _ in range(cfg.max_halvings + 1):
            Fn = F.copy()
            Hn = Hf.copy()
            Fn[1:-1] += t * step[:m]
            Hn[1:-1] += t * step[m:]
            if np.all(Fn > 0.0):
                Rn = resid(Fn, Hn)
                nn = float(np.max(np.abs(Rn)))
                if np.isfinite(nn) and nn < norm:
                    break
            t *= 0.5
        else:
            if not np.all(Fn > 0.0):
                raise NonPositiveProfile(f"Newton iterate left f > 0 ({stage})")
            raise NoConvergence("line search failed to reduce the residual",
                                residuals=history, stage=stage)
        F, Hf, R, norm = Fn, Hn, Rn, nn
        history.append(norm)
    if norm < cfg.residual_tol:
        return F, Hf, history
    raise NoConvergence(f"Newton did not reach {cfg.residual_tol:g}", residuals=history, stage=stage)


def solve_willmore_bvp(rings: RingBoundary, params: ModelParams = WILLMORE,
                       config: WillmoreConfig = WillmoreConfig()) -> MeridianSurface:
    """Critical meridian with ``f = r`` and ``H = 0`` at both rings.

    Newton starts from the outer catenoid while ``h/r`` is at most the
    critical ratio, and from the rescaled bent branch of the Willmore problem
    beyond it. For ``alpha > 0`` the area weight is switched on in
    ``config.alpha_steps`` continuation steps.
    """
    ab_target = params.ratio()
    variant = _variant(config.k_variant)
    principal = variant is KVariant.PRINCIPAL_PRODUCT
    grid = rings.grid(config.grid_n)
    if rings.ratio <= critical_ratio():
        cat = fit(rings)[0].catenary
        F = cat.value(grid.nodes)
        Hf = np.zeros(grid.n)
        seed, eta = "catenoid", None
    else:
        fs, Hs, eta = bent_branch_profile(rings, grid, variant)
        F, Hf = fs.values.copy(), Hs.values.copy()
        seed = "bent"
    F[0] = F[-1] = rings.r
    Hf[0] = Hf[-1] = 0.0
    hstep = grid.spacing
    history: List[float] = []
    steps = [0.0] if ab_target == 0.0 else list(np.linspace(0.0, ab_target, config.alpha_steps + 1))
    for k, ab in enumerate(steps):
        F, Hf, hist = _newton(F, Hf, hstep, ab, principal, config, stage=f"{seed}:alpha_step_{k}")
        history.extend(hist)
    f = SampledFunction(grid, F)
    H = SampledFunction(grid, Hf)
    info = {"seed": seed, "eta": eta, "newton_residuals": history,
            "mc_residual": mc_ode_residual(f, H)}
    surf = MeridianSurface(f, H, params, variant, info)
    info["el_residual"] = willmore_ode_residual(surf)
    return surf
