"""Uniform 1-D grids, sampled functions and their discrete Schauder norms.

All norms are evaluated on the grid nodes only. Derivatives come either from
analytic samples supplied by the caller or from second-order finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateInterval, InvalidExponent, MissingDerivative

__all__ = [
    "Grid",
    "SampledFunction",
    "NormReport",
    "uniform_grid",
    "fd_derivative",
    "ck_norm",
    "holder_seminorm",
    "holder_norm",
    "norm_report",
]


def _frozen(values, n=None, name="values"):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} has {arr.shape[0]} entries, grid has {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise DegenerateInterval(f"need b > a, got [{self.a}, {self.b}]")
        if int(self.n) != self.n or self.n < 3:
            raise DegenerateInterval(f"need at least 3 nodes, got {self.n}")

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @property
    def length(self) -> float:
        return self.b - self.a

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.a + np.arange(self.n) * self.spacing
        x[-1] = self.b
        x.flags.writeable = False
        return x

    def sample(self, fn, d1=None, d2=None) -> "SampledFunction":
        """Evaluate ``fn`` (and optional analytic derivatives) at the nodes."""
        x = self.nodes
        return SampledFunction(
            self,
            np.broadcast_to(fn(x), x.shape),
            None if d1 is None else np.broadcast_to(d1(x), x.shape),
            None if d2 is None else np.broadcast_to(d2(x), x.shape),
        )

    def constant(self, c: float) -> "SampledFunction":
        z = np.zeros(self.n)
        return SampledFunction(self, np.full(self.n, float(c)), z, z)


def uniform_grid(a: float, b: float, n: int) -> Grid:
    return Grid(float(a), float(b), int(n))


def _fd1(v: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    d[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    return d


def _fd2(v: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(v)
    h2 = h * h
    d[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h2
    if v.shape[0] >= 4:
        d[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h2
        d[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h2
    else:
        # three nodes: only the first-order copy of the interior value exists
        d[0] = d[-1] = d[1]
    return d


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function on a grid, with optional analytic derivatives.

    Missing derivatives are produced by second-order finite differences of
    ``values`` on first access and cached.
    """

    grid: Grid
    values: np.ndarray
    deriv1: Optional[np.ndarray] = None
    deriv2: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.grid.n
        object.__setattr__(self, "values", _frozen(self.values, n))
        for name in ("deriv1", "deriv2"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, _frozen(val, n, name))

    @cached_property
    def d1(self) -> np.ndarray:
        if self.deriv1 is not None:
            return self.deriv1
        return _frozen(_fd1(self.values, self.grid.spacing))

    @cached_property
    def d2(self) -> np.ndarray:
        if self.deriv2 is not None:
            return self.deriv2
        return _frozen(_fd2(self.values, self.grid.spacing))

    def derivative_values(self, k: int) -> np.ndarray:
        if k == 0:
            return self.values
        if k == 1:
            return self.d1
        if k == 2:
            return self.d2
        raise MissingDerivative(f"derivatives of order {k} are not available")

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def _check_grid(self, other: "SampledFunction"):
        if other.grid != self.grid:
            raise ValueError("sampled functions live on different grids")

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            self._check_grid(other)
            return SampledFunction(
                self.grid, self.values + other.values,
                self.d1 + other.d1, self.d2 + other.d2,
            )
        return SampledFunction(self.grid, self.values + other, self.d1, self.d2)

    __radd__ = __add__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values, -self.d1, -self.d2)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            self._check_grid(other)
            u, v = self, other
            return SampledFunction(
                self.grid,
                u.values * v.values,
                u.d1 * v.values + u.values * v.d1,
                u.d2 * v.values + 2 * u.d1 * v.d1 + u.values * v.d2,
            )
        c = float(other)
        return SampledFunction(self.grid, c * self.values, c * self.d1, c * self.d2)

    __rmul__ = __mul__

    def with_fd_derivatives(self) -> "SampledFunction":
        """Drop analytic derivatives so that both are finite differences."""
        return SampledFunction(self.grid, self.values)


def fd_derivative(u: SampledFunction, order: int) -> SampledFunction:
    """Finite-difference derivative of ``u``'s values.

    Central differences inside, second-order one-sided stencils at the ends.
    """
    h = u.grid.spacing
    if order == 1:
        return SampledFunction(u.grid, _fd1(u.values, h))
    if order == 2:
        return SampledFunction(u.grid, _fd2(u.values, h))
    raise ValueError("order must be 1 or 2")


def ck_norm(u: SampledFunction, k: int) -> float:
    if k not in (0, 1, 2):
        raise MissingDerivative(f"C^{k} norm needs derivatives up to order {k}")
    return float(sum(np.max(np.abs(u.derivative_values(j))) for j in range(k + 1)))


def _check_alpha(alpha: float):
    if not (0.0 < alpha < 1.0):
        raise InvalidExponent(f"Hoelder exponent must lie in (0, 1), got {alpha}")


def _pair_scan(v: np.ndarray, h: float, alpha: float) -> float:
    # uniform grid: |x_i - x_j| = |i - j| * h, so one pass per offset
    n = v.shape[0]
    best = 0.0
    for d in range(1, n):
        diff = np.max(np.abs(v[d:] - v[:-d]))
        if diff > 0.0:
            best = max(best, diff / (d * h) ** alpha)
    return float(best)


def holder_seminorm(u: SampledFunction, k: int, alpha: float) -> float:
    """Exact maximum of the Hoelder quotient of the k-th derivative over all node pairs."""
    _check_alpha(alpha)
    return _pair_scan(u.derivative_values(k), u.grid.spacing, alpha)


def holder_norm(u: SampledFunction, k: int, alpha: float) -> float:
    return ck_norm(u, k) + holder_seminorm(u, k, alpha)


@dataclass(frozen=True)
class NormReport:
    c0: float
    c1: float
    c2: float
    holder_semis: Dict[Tuple[int, float], float] = field(default_factory=dict)
    holder_norms: Dict[Tuple[int, float], float] = field(default_factory=dict)


def norm_report(u: SampledFunction, alphas: Sequence[float] = (0.5,)) -> NormReport:
    semis, norms = {}, {}
    ck = [ck_norm(u, k) for k in range(3)]
    for alpha in alphas:
        for k in range(3):
            s = holder_seminorm(u, k, alpha)
            semis[(k, alpha)] = s
            norms[(k, alpha)] = ck[k] + s
    return NormReport(ck[0], ck[1], ck[2], semis, norms)

