import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meridian.errors import DegenerateInterval, InvalidExponent, MissingDerivative
from meridian.grid import (
    Grid,
    SampledFunction,
    ck_norm,
    fd_derivative,
    holder_norm,
    holder_seminorm,
    norm_report,
)


@pytest.mark.parametrize("a, b, n", [(1.0, 1.0, 11), (2.0, 1.0, 11), (0.0, 1.0, 2), (0.0, math.inf, 5)])
def test_grid_rejects_degenerate(a, b, n):
    with pytest.raises(DegenerateInterval):
        Grid(a, b, n)


def test_nodes_hit_both_ends():
    g = Grid(-0.3, 0.7, 11)
    assert g.nodes[0] == -0.3 and g.nodes[-1] == 0.7
    assert g.spacing == pytest.approx(0.1)
    assert not g.nodes.flags.writeable


def test_fd_exact_on_quadratics():
    g = Grid(-1.0, 2.0, 7)
    u = g.sample(lambda x: 3 * x ** 2 - x + 2)
    np.testing.assert_allclose(fd_derivative(u, 1).values, 6 * g.nodes - 1, atol=1e-12)
    np.testing.assert_allclose(fd_derivative(u, 2).values, 6.0, atol=1e-10)


def test_fd_ends_are_second_order_on_cubics():
    # the four-point one-sided second difference is exact for cubics
    g = Grid(0.0, 1.0, 9)
    u = g.sample(lambda x: x ** 3)
    np.testing.assert_allclose(fd_derivative(u, 2).values, 6 * g.nodes, atol=1e-10)


@pytest.mark.parametrize("order", [1, 2])
def test_fd_order_two_decay(order):
    exact = [np.cos, lambda x: -np.sin(x)][order - 1]
    errs = []
    for n in (41, 81, 161, 321):
        g = Grid(0.0, 2.0, n)
        errs.append(np.max(np.abs(fd_derivative(g.sample(np.sin), order).values - exact(g.nodes))))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    assert all(3.5 <= r <= 4.5 for r in ratios), ratios


def test_fd_derivative_bad_order():
    with pytest.raises(ValueError):
        fd_derivative(Grid(0, 1, 5).constant(1.0), 3)


def test_analytic_derivatives_preferred():
    g = Grid(0.0, 1.0, 5)
    u = g.sample(np.exp, np.exp, np.exp)
    assert np.array_equal(u.d1, np.exp(g.nodes))
    assert not np.array_equal(u.with_fd_derivatives().d1, u.d1)


def test_product_rule_on_samples():
    g = Grid(0.0, 1.0, 11)
    u = g.sample(np.sin, np.cos, lambda x: -np.sin(x))
    v = g.sample(np.exp, np.exp, np.exp)
    w = u * v
    x = g.nodes
    np.testing.assert_allclose(w.d2, 2 * np.cos(x) * np.exp(x), atol=1e-14)


def test_mismatched_grids():
    u = Grid(0, 1, 5).constant(1.0)
    v = Grid(0, 1, 6).constant(1.0)
    with pytest.raises(ValueError):
        u + v


def test_sqrt_seminorm_is_one():
    # |sqrt(x) - sqrt(y)| <= |x - y|^(1/2), equality when y = 0
    g = Grid(0.0, 1.0, 401)
    u = g.sample(np.sqrt)
    assert holder_seminorm(u, 0, 0.5) == pytest.approx(1.0, rel=1e-12)


def test_ck_norms_cos():
    g = Grid(0.0, math.pi, 201)
    u = g.sample(np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))
    assert ck_norm(u, 0) == pytest.approx(1.0)
    assert ck_norm(u, 2) == pytest.approx(3.0, rel=1e-4)
    with pytest.raises(MissingDerivative):
        ck_norm(u, 3)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
def test_invalid_exponent(alpha):
    with pytest.raises(InvalidExponent):
        holder_seminorm(Grid(0, 1, 5).constant(1.0), 0, alpha)


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(-5, 5),
    length=st.floats(0.1, 5),
    slope=st.floats(-10, 10),
    alpha=st.floats(0.05, 0.95),
)
def test_linear_seminorm_closed_form(a, length, slope, alpha):
    g = Grid(a, a + length, 31)
    u = g.sample(lambda x: slope * x + 1.0)
    expected = abs(slope) * length ** (1 - alpha)
    assert holder_seminorm(u, 0, alpha) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    coeffs=st.lists(st.floats(-3, 3), min_size=3, max_size=3),
    lam=st.floats(-4, 4),
    alpha=st.floats(0.05, 0.95),
)
def test_holder_norm_homogeneous_and_monotone(coeffs, lam, alpha):
    g = Grid(-1.0, 1.0, 41)
    c0, c1, c2 = coeffs
    u = g.sample(lambda x: c0 + c1 * np.sin(x) + c2 * x ** 2)
    for k in range(3):
        assert holder_norm(lam * u, k, alpha) == pytest.approx(abs(lam) * holder_norm(u, k, alpha),
                                                                 rel=1e-9, abs=1e-12)
    assert holder_norm(u, 0, alpha) <= holder_norm(u, 1, alpha) + ck_norm(u, 0) + 1e-12


def test_norm_report_consistent():
    g = Grid(0.0, 1.0, 51)
    u = g.sample(np.exp)
    rep = norm_report(u, alphas=(0.25, 0.5))
    assert rep.holder_norms[(1, 0.5)] == pytest.approx(holder_norm(u, 1, 0.5))
    assert rep.c0 == pytest.approx(math.e)
    assert set(rep.holder_semis) == {(k, a) for k in range(3) for a in (0.25, 0.5)}


def test_sampled_function_is_immutable():
    u = Grid(0, 1, 5).constant(2.0)
    with pytest.raises(ValueError):
        u.values[0] = 1.0
    assert isinstance(u - 1.0, SampledFunction)
