"""Catenaries ``f(x) = c1 cosh(x/c1 + c2)`` and the catenoid ring problem."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Union

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq, root

from .errors import NonPositiveProfile, NoSolution
from .grid import Grid, SampledFunction

__all__ = [
    "Catenary",
    "RingBoundary",
    "Branch",
    "fit",
    "fit_general",
    "outer_branch",
    "area",
    "minimal_residual",
    "critical_ratio",
    "critical_t",
    "goldschmidt_area",
    "cylinder_area",
]

# Root of t * tanh(t) = 1; the critical ratio is 2 t / cosh(t).
_T_STAR = brentq(lambda t: t * math.tanh(t) - 1.0, 1.0, 1.5, xtol=1e-16, rtol=8.9e-16)


def critical_t() -> float:
    return _T_STAR


def critical_ratio() -> float:
    """Largest ``h/r`` for which two equal coaxial rings bound a catenoid."""
    return 2.0 * _T_STAR / math.cosh(_T_STAR)


@dataclass(frozen=True)
class Catenary:
    c1: float
    c2: float = 0.0

    def __post_init__(self):
        if self.c1 == 0.0 or not math.isfinite(self.c1) or not math.isfinite(self.c2):
            raise ValueError("c1 must be finite and nonzero, c2 finite")

    def _arg(self, x):
        return np.asarray(x, dtype=float) / self.c1 + self.c2

    def value(self, x):
        return self.c1 * np.cosh(self._arg(x))

    def d1(self, x):
        return np.sinh(self._arg(x))

    def d2(self, x):
        return np.cosh(self._arg(x)) / self.c1

    __call__ = value

    def sample(self, grid: Grid) -> SampledFunction:
        x = grid.nodes
        return SampledFunction(grid, self.value(x), self.d1(x), self.d2(x))


@dataclass(frozen=True)
class RingBoundary:
    r: float
    h: float

    def __post_init__(self):
        for name in ("r", "h"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and positive, got {v}")

    @property
    def xl(self) -> float:
        return -0.5 * self.h

    @property
    def xr(self) -> float:
        return 0.5 * self.h

    @property
    def ratio(self) -> float:
        return self.h / self.r

    def grid(self, n: int) -> Grid:
        return Grid(self.xl, self.xr, n)


class Branch(NamedTuple):
    label: str  # "outer", "inner" or "critical"
    catenary: Catenary


def _g(c: float, h: float) -> float:
    with np.errstate(over="ignore"):
        return float(c * np.cosh(h / (2.0 * c)))


def fit(boundary: RingBoundary) -> List[Branch]:
    """All symmetric catenaries through both rings, outer branch first.

    Solves ``c cosh(h / 2c) = r``. The left side has a single minimum at
    ``c* = h / (2 t*)``, so the problem has two roots, one double root or none.
    """
    r, h = boundary.r, boundary.h
    c_star = h / (2.0 * _T_STAR)
    gap = r - _g(c_star, h)
    if gap < -1e-14 * r:
        raise NoSolution(
            f"h/r = {h / r:.10g} exceeds the critical ratio {critical_ratio():.10g}"
        )
    if gap <= 1e-14 * r:
        return [Branch("critical", Catenary(c_star))]

    F = lambda c: _g(c, h) - r
    outer = brentq(F, c_star, r, xtol=1e-15, rtol=8.9e-16)
    lo = 0.5 * c_star
    while F(lo) <= 0.0:
        lo *= 0.5
    inner = brentq(F, lo, c_star, xtol=1e-300, rtol=8.9e-16)
    return [Branch("outer", Catenary(outer)), Branch("inner", Catenary(inner))]


def outer_branch(boundary: RingBoundary) -> Catenary:
    return fit(boundary)[0].catenary


def fit_general(xl: float, yl: float, xr: float, yr: float,
                seed: Optional[Catenary] = None) -> Catenary:
    """Catenary through ``(xl, yl)`` and ``(xr, yr)`` by Newton on ``(c1, c2)``.

    Seeded by the symmetric fit for the mean height unless ``seed`` is given.
    """
    if not (xr > xl and yl > 0 and yr > 0):
        raise ValueError("need xr > xl and positive heights")
    if seed is None:
        mid = 0.5 * (xl + xr)
        sym = outer_branch(RingBoundary(0.5 * (yl + yr), xr - xl))
        seed = Catenary(sym.c1, -mid / sym.c1)

    def eqs(z):
        c1, c2 = z
        return [c1 * math.cosh(xl / c1 + c2) - yl, c1 * math.cosh(xr / c1 + c2) - yr]

    sol = root(eqs, [seed.c1, seed.c2], method="hybr", tol=1e-14)
    # hybr reports failure when its step tolerance is below round-off even
    # though the residual has converged, so judge by the residual alone
    if max(abs(v) for v in eqs(sol.x)) > 1e-10 * max(yl, yr):
        raise NoSolution(f"no catenary through the given points ({sol.message})")
    return Catenary(float(sol.x[0]), float(sol.x[1]))


def _check_positive(values: np.ndarray):
    if np.any(values <= 0.0):
        raise NonPositiveProfile("profile must be positive on the interval")


def area(surface: Union[Catenary, SampledFunction],
         boundary: Optional[RingBoundary] = None) -> float:
    """Area of the surface of revolution ``2 pi int f sqrt(1 + f'^2)``.

    A :class:`Catenary` needs the ``boundary`` whose interval it spans and is
    integrated in closed form; samples use composite Simpson quadrature.
    """
    if isinstance(surface, Catenary):
        if boundary is None:
            raise ValueError("a catenary needs a ring boundary to fix the interval")
        c, s = surface.c1, surface.c2
        xs = np.linspace(boundary.xl, boundary.xr, 65)
        _check_positive(surface.value(xs))

        def prim(x):
            return x + 0.5 * c * math.sinh(2.0 * (x / c + s))

        return math.pi * c * (prim(boundary.xr) - prim(boundary.xl))
    f = surface
    _check_positive(f.values)
    integrand = 2.0 * math.pi * f.values * np.sqrt(1.0 + f.d1 ** 2)
    return float(simpson(integrand, x=f.nodes))


def minimal_residual(f: SampledFunction) -> float:
    """Max interior defect of ``f f'' = 1 + f'^2``."""
    _check_positive(f.values)
    r = f.values * f.d2 - 1.0 - f.d1 ** 2
    return float(np.max(np.abs(r[1:-1])))


def goldschmidt_area(r: float) -> float:
    """Two flat discs of radius ``r``."""
    return 2.0 * math.pi * r * r


def cylinder_area(boundary: RingBoundary) -> float:
    return 2.0 * math.pi * boundary.r * boundary.h
