"""Table generation and verification sweeps driven by the command line."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from . import bvp
from .catenary import Catenary, RingBoundary, area, critical_ratio, fit, goldschmidt_area
from .errors import BetaZero, MeridianError, NoSolution
from .grid import Grid, SampledFunction, holder_norm
from .schauder import ledger_for, random_problem, verify_all
from .stability import PerturbationConfig, perturb
from .willmore import KVariant, ModelParams, WillmoreConfig, solve_willmore_bvp

__all__ = [
    "TableRow",
    "RunConfig",
    "ordered_map",
    "catenoid_table",
    "willmore_table",
    "rows_to_text",
    "VerifyReport",
    "verify_suite",
    "critical_ratio_report",
    "parse_heights",
]

STATUS_OK = "ok"
STATUS_GOLDSCHMIDT = "goldschmidt"
STATUS_NO_CONVERGENCE = "no_convergence"

# Mesh-table rows on either side of the catenoid breakdown: (h/r, area).
REFERENCE_BRACKET = ((1.2592, 16.5026), (1.3256, 14.3250))


@dataclass(frozen=True)
class TableRow:
    key: float
    area: float
    energy: Optional[float] = None
    status: str = STATUS_OK
    residuals: Optional[dict] = None


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = 801
    residual_tol: float = 1e-9
    fixedpoint_tol: float = 1e-10
    alpha_holder: float = 0.5
    k_variant: KVariant = KVariant.PRINCIPAL_PRODUCT
    output_path: Optional[str] = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.grid_n < 101:
            raise ValueError("grid_n must be at least 101")
        if self.residual_tol <= 0 or self.fixedpoint_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not (0.0 < self.alpha_holder < 1.0):
            raise ValueError("alpha_holder must lie in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def ordered_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """``map`` whose results follow input order regardless of completion order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _catenoid_row(r: float, h: float) -> TableRow:
    rings = RingBoundary(r, h)
    try:
        outer = fit(rings)[0].catenary
    except NoSolution:
        return TableRow(h / r, goldschmidt_area(r), status=STATUS_GOLDSCHMIDT)
    return TableRow(h / r, area(outer, rings))


def catenoid_table(r: float = 1.5088795, dh: float = 0.1, steps: int = 20,
                   config: RunConfig = RunConfig()) -> List[TableRow]:
    """Outer catenoid area for ``h = dh, 2 dh, ...``; two discs past breakdown."""
    if r <= 0 or dh <= 0 or steps < 1:
        raise ValueError("need r > 0, dh > 0 and steps >= 1")
    heights = [dh * k for k in range(1, steps + 1)]
    return ordered_map(lambda h: _catenoid_row(r, h), heights, config.workers)


def _willmore_row(r: float, h: float, params: ModelParams, wcfg: WillmoreConfig) -> TableRow:
    try:
        surf = solve_willmore_bvp(RingBoundary(r, h), params, wcfg)
    except MeridianError as exc:
        return TableRow(h, math.nan, math.nan, STATUS_NO_CONVERGENCE, {"error": str(exc)})
    res = {"mc": surf.info["mc_residual"], "el": surf.info["el_residual"]}
    return TableRow(h, surf.area(), surf.willmore_energy(), STATUS_OK, res)


def willmore_table(r: float, heights: Sequence[float], params: ModelParams = ModelParams(),
                   config: RunConfig = RunConfig()) -> List[TableRow]:
    """Area and Willmore energy ``2 pi int H^2 f W`` of the critical surface per height."""
    if params.beta == 0:
        raise BetaZero("the Euler-Lagrange equation needs beta != 0")
    wcfg = WillmoreConfig(grid_n=config.grid_n, residual_tol=config.residual_tol,
                          k_variant=config.k_variant)
    return ordered_map(lambda h: _willmore_row(r, h, params, wcfg), heights, config.workers)


def _fmt(v: Optional[float]) -> str:
    return format(v, ".6g")


def rows_to_text(rows: Sequence[TableRow], willmore: bool, fmt: str = "csv") -> str:
    if willmore:
        header = ["h", "area", "willmore_energy", "status"]
        cells = [[_fmt(r.key), _fmt(r.area), _fmt(r.energy), r.status] for r in rows]
    else:
        header = ["h_over_r", "area", "status"]
        cells = [[_fmt(r.key), _fmt(r.area), r.status] for r in rows]
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(c) for c in cells]
    elif fmt == "dat":
        lines = ["# " + " ".join(header)] + [" ".join(c) for c in cells]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(lines) + "\n"


def parse_heights(spec: str) -> List[float]:
    """``START:STEP:END`` with ``END`` included."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("heights must look like START:STEP:END")
    start, step, end = (float(p) for p in parts)
    if step <= 0 or end < start or start <= 0:
        raise ValueError("need 0 < START <= END and STEP > 0")
    count = int(round((end - start) / step)) + 1
    return [round(start + k * step, 12) for k in range(count)]


@dataclass
class VerifyReport:
    exit_code: int = 0
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    min_slack: float = math.inf

    def lines(self) -> List[str]:
        out = [f"checks run: {self.checks}",
               f"failures: {len(self.failures)}",
               f"skipped: {len(self.skipped)}",
               f"minimum estimate slack: {self.min_slack:.6g}"]
        out += [f"FAIL {m}" for m in self.failures]
        out += [f"SKIP {m}" for m in self.skipped]
        return out


def _interpolation_case(rng: np.random.Generator, alpha: float):
    a = rng.uniform(-1.0, 1.0)
    L = rng.uniform(0.2, 3.0)
    g = Grid(a, a + L, 201)
    x = g.nodes
    c = rng.normal(size=4)
    w = rng.uniform(0.5, 4.0)
    u = SampledFunction(g, c[0] + c[1] * x + c[2] * x ** 2 + c[3] * np.sin(w * x))
    k = 1.0 + L ** (1.0 - alpha)
    n0, n1, n2 = (holder_norm(u, j, alpha) for j in range(3))
    return [(n0, k * n1), (n0, k * k * n2)]


def verify_suite(seed: int, cases: int, config: RunConfig = RunConfig(),
                 extra_problems: Sequence[bvp.SturmLiouvilleProblem] = ()) -> VerifyReport:
    """Estimate, maximum-principle, interpolation and contraction sweeps.

    Deterministic for a given seed. Problems with ``q > 0`` anywhere are
    skipped with a reason rather than counted as failures.
    """
    if cases < 1:
        raise ValueError("cases must be at least 1")
    rng = np.random.default_rng(seed)
    rep = VerifyReport()
    alpha = config.alpha_holder
    problems = [random_problem(rng) for _ in range(cases)] + list(extra_problems)

    for i, prob in enumerate(problems):
        if not bvp.max_principle_applies(prob):
            rep.skipped.append(f"case {i}: q > 0 somewhere, the C^0 estimate does not apply")
            continue
        u = bvp.solve(prob)
        reports = verify_all(prob, u, ledger_for(prob, alpha))
        for r in reports:
            rep.checks += 1
            rep.min_slack = min(rep.min_slack, r.slack)
            if not r.holds:
                rep.failures.append(f"case {i}: estimate {r.which} lhs={r.lhs:.6g} rhs={r.rhs:.6g}")

    for i in range(cases):
        prob = random_problem(rng)
        pos = prob.with_rhs(SampledFunction(prob.grid, np.abs(prob.rhs.values)), 0.0, 0.0)
        u = bvp.solve(pos)
        rep.checks += 1
        if u.max() > 1e-10:
            rep.failures.append(f"max principle case {i}: max u = {u.max():.3e}")

    for i in range(cases):
        for lhs, rhs in _interpolation_case(rng, alpha):
            rep.checks += 1
            if lhs > rhs:
                rep.failures.append(f"interpolation case {i}: {lhs:.6g} > {rhs:.6g}")

    f = Catenary(1.0).sample(Grid(-0.4, 0.4, 201))
    eps = 0.5
    try:
        res = perturb(f, 0.0, 0.0, eps, PerturbationConfig(alpha=alpha))
        a_max = res.a_max
        res = perturb(f, 0.5 * a_max, -0.25 * a_max, eps, PerturbationConfig(alpha=alpha))
        rep.checks += 1
        if any(r > eps + 0.05 for r in res.trace.ratios):
            rep.failures.append(f"contraction: ratios {res.trace.ratios}")
    except MeridianError as exc:
        rep.failures.append(f"contraction: {type(exc).__name__}: {exc}")

    rep.exit_code = 1 if rep.failures else 0
    return rep


def critical_ratio_report() -> str:
    rho = critical_ratio()
    (lo, a_lo), (hi, a_hi) = REFERENCE_BRACKET
    inside = lo < rho < hi
    return (
        f"critical h/r = {rho:.6f}\n"
        f"reference mesh rows: h/r = {lo:.4f} (catenoid area {a_lo:.4f}), "
        f"h/r = {hi:.4f} (two discs, area {a_hi:.4f})\n"
        f"bracketed: {'yes' if inside else 'no'}\n"
    )
