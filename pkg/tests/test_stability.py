import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meridian import bvp
from meridian.catenary import Catenary, fit_general
from meridian.errors import BoundaryDataTooLarge, CertificateInvalid, Unstable
from meridian.grid import Grid, SampledFunction, holder_norm
from meridian.stability import (
    PerturbationConfig,
    admissible_boundary,
    certify,
    iteration_constants,
    lipschitz_constant,
    operator_L,
    perturb,
    phi_rhs,
    stability_function,
)


@pytest.fixture(scope="module")
def cosh_small():
    f = Catenary(1.0).sample(Grid(-0.4, 0.4, 201))
    return f, stability_function(f, select="balanced").chi


@pytest.mark.parametrize("select", ["first", "balanced"])
def test_certificate_on_short_catenoid(select):
    f = Catenary(1.0).sample(Grid(-0.4, 0.4, 201))
    cert = stability_function(f, select=select)
    assert cert.margin > 0
    assert cert.inequality_slack <= 1e-8


def test_long_catenoid_is_unstable():
    # the conjugate point of the cosh Jacobi field lies near x = +-1.2
    f = Catenary(1.0).sample(Grid(-2.0, 2.0, 401))
    with pytest.raises(Unstable):
        stability_function(f)


def test_bad_select():
    f = Catenary(1.0).sample(Grid(-0.4, 0.4, 21))
    with pytest.raises(ValueError):
        stability_function(f, select="best")


def test_certificate_is_homogeneous(cosh_small):
    f, chi = cosh_small
    assert certify(f, 2.0 * chi).margin == pytest.approx(2 * certify(f, chi).margin)


def test_zero_order_coefficient_vanishes_for_exact_chi(cosh_small):
    f, chi = cosh_small
    op = operator_L(f, chi)
    assert np.max(np.abs(op.q_tilde.values)) < 1e-10
    zero = SampledFunction(f.grid, np.zeros(f.grid.n))
    assert bvp.max_principle_applies(op.problem(zero))


def test_tampered_chi_rejected(cosh_small):
    f, chi = cosh_small
    vals = chi.values.copy()
    vals[len(vals) // 2] = 0.0
    bad = SampledFunction(f.grid, vals)
    with pytest.raises(CertificateInvalid):
        certify(f, bad)
    with pytest.raises(CertificateInvalid):
        operator_L(f, bad)


def test_phi_rhs_zero_and_constant(cosh_small):
    f, chi = cosh_small
    g = f.grid
    assert np.all(phi_rhs(g.constant(0.0), chi, f).values == 0.0)
    k = 0.3
    expected = (chi.d1 ** 2 / (f.values * chi.values) - chi.d2 / f.values) * k ** 2
    np.testing.assert_allclose(phi_rhs(g.constant(k), chi, f).values, expected, atol=1e-14)


def test_phi_rhs_is_quadratic_remainder(cosh_small):
    # For g = f + phi chi, g g'' - 1 - g'^2 splits into a part linear in phi
    # and Q = psi psi'' - psi'^2; the right-hand side equals -Q / (f chi).
    f, chi = cosh_small
    g = f.grid
    phi = g.sample(lambda x: 0.2 * x ** 2 - x, lambda x: 0.4 * x - 1, lambda x: np.full_like(x, 0.4))
    psi = phi * chi
    Q = psi.values * psi.d2 - psi.d1 ** 2
    np.testing.assert_allclose(phi_rhs(phi, chi, f).values, -Q / (f.values * chi.values),
                               rtol=1e-9, atol=1e-12)


def test_lipschitz_doubles_with_chi(cosh_small):
    f, chi = cosh_small
    assert lipschitz_constant(2.0 * chi, f, 0.5) == pytest.approx(2 * lipschitz_constant(chi, f, 0.5))


def test_lipschitz_brute_force(cosh_small):
    f, chi = cosh_small
    g = f.grid
    C1 = lipschitz_constant(chi, f, 0.5)
    rng = np.random.default_rng(7)

    def smooth():
        a, w, s = rng.normal(size=3), rng.uniform(0.5, 6, 3), rng.uniform(0, 6, 3)
        v = sum(a[i] * np.sin(w[i] * g.nodes + s[i]) for i in range(3))
        d1 = sum(a[i] * w[i] * np.cos(w[i] * g.nodes + s[i]) for i in range(3))
        d2 = -sum(a[i] * w[i] ** 2 * np.sin(w[i] * g.nodes + s[i]) for i in range(3))
        return SampledFunction(g, v, d1, d2) * 10 ** rng.uniform(-3, 0)

    worst = 0.0
    for _ in range(200):
        e1, e2 = smooth(), smooth()
        num = holder_norm(phi_rhs(e1, chi, f) - phi_rhs(e2, chi, f), 0, 0.5)
        den = (holder_norm(e1, 2, 0.5) + holder_norm(e2, 2, 0.5)) * holder_norm(e1 - e2, 2, 0.5)
        worst = max(worst, num / den)
    assert worst <= C1


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_admissible_boundary_solves_condition(cosh_small, eps):
    f, chi = cosh_small
    consts = iteration_constants(f, chi)
    a = admissible_boundary(consts, eps)
    aK = a * consts.product
    assert 2 * aK * (1 + aK / (1 - eps)) == pytest.approx(eps, rel=1e-12)


def test_zero_data_one_step(cosh_small):
    f, _ = cosh_small
    res = perturb(f, 0.0, 0.0)
    assert res.trace.steps == 1 and res.trace.converged
    assert np.all(res.psi.values == 0.0)


def test_data_above_bound_rejected(cosh_small):
    f, _ = cosh_small
    a_max = perturb(f, 0.0, 0.0).a_max
    with pytest.raises(BoundaryDataTooLarge):
        perturb(f, 10 * a_max, 10 * a_max)


def _refit_error(f, res):
    g = f.grid
    prof = f + res.psi
    cat = fit_general(g.a, prof.values[0], g.b, prof.values[-1])
    return float(np.max(np.abs(cat(g.nodes) - prof.values)))


def test_admissible_data_refit(cosh_small):
    f, _ = cosh_small
    a_max = perturb(f, 0.0, 0.0).a_max
    res = perturb(f, 0.9 * a_max, -0.5 * a_max, 0.5)
    assert res.trace.converged
    assert _refit_error(f, res) <= 1e-6


@settings(max_examples=8, deadline=None)
@given(pl=st.floats(-0.02, 0.02), pr=st.floats(-0.02, 0.02))
def test_larger_data_still_contracts(cosh_small, pl, pr):
    # far beyond the sufficient bound the scheme still converges in practice
    f, _ = cosh_small
    res = perturb(f, pl, pr, 0.5, PerturbationConfig(check_admissible=False))
    assert all(r <= 0.55 for r in res.trace.ratios)
    assert _refit_error(f, res) <= 1e-6
