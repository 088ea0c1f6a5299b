import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minorant.bounds import (
    DiscProblem,
    annulus_factor,
    covering_content_budget,
    disc_certificate,
    n0_gauge_integral,
    power_content_budget,
    theorem1_pointwise_bound,
)
from minorant.core import Gauge
from minorant.errors import DivergenceError, DomainError, UnsupportedGaugeError, ValidationError
from minorant.riesz import AtomicMeasure


def sharp_budget(R):
    return 25 * ((1 + R) / (1 - R)) ** 2 / math.log(1 / R)


def test_n0_examples():
    assert n0_gauge_integral(Gauge.power(2, 1), 1.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert n0_gauge_integral(Gauge.power(1, 0), 1.0) == 0.0
    assert n0_gauge_integral(Gauge.power(1, 1), 1.0) == 2.0


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("r", [0.1, 0.7, 1.0])
def test_n0_closed_form_vs_quadrature(p, r):
    B = 1.7
    c_p = mpmath.pi ** (p / 2) / mpmath.gamma(p / 2 + 1)
    ref = float(mpmath.quad(lambda s: B * c_p * s ** p / s, [0, r]))
    assert n0_gauge_integral(Gauge.power(p, B), r) == pytest.approx(ref, rel=1e-9)


def test_n0_tabulated_matches_power_on_linear_table():
    # h(t) = 2t is both the power gauge p=1 and an exact linear table
    tab = Gauge.tabulated([0.0, 0.5, 1.0], [0.0, 1.0, 2.0])
    assert n0_gauge_integral(tab, 0.8) == pytest.approx(n0_gauge_integral(Gauge.power(1, 1), 0.8), rel=1e-12)


def test_n0_tabulated_vs_quadrature():
    tab = Gauge.tabulated([0.0, 0.1, 0.3, 1.0], [0.0, 0.05, 0.4, 0.6])
    ref = float(mpmath.quad(lambda s: float(tab(float(s))) / s, [0, 0.1, 0.3, 0.9]))
    assert n0_gauge_integral(tab, 0.9) == pytest.approx(ref, rel=1e-9)


def test_n0_divergence():
    with pytest.raises(DivergenceError):
        n0_gauge_integral(Gauge.power(1, 1), 1.0, d=3)
    with pytest.raises(DivergenceError):
        n0_gauge_integral(Gauge.tabulated([0, 1], [0, 1]), 0.5, d=3)
    # p > d - 2 converges in d = 3
    assert n0_gauge_integral(Gauge.power(2, 1), 1.0, d=3) == pytest.approx(math.pi)


def test_n0_domain_errors():
    with pytest.raises(DomainError):
        n0_gauge_integral(Gauge.power(1), 0.0)
    with pytest.raises(DomainError):
        n0_gauge_integral(Gauge.tabulated([0, 1], [0, 1]), 2.0)


def test_pointwise_bound_center_is_zero():
    assert theorem1_pointwise_bound(2, 0.5, 0j, 1.0, 0.3, AtomicMeasure.empty()) == 0.0


def test_pointwise_bound_worked_example():
    def u(z):
        return math.log(abs(z - 0.9)) - math.log(0.9)

    # sup of u on |z| = 0.5 is at z = -0.5 by direct scan
    theta = np.linspace(0, 2 * np.pi, 100001)
    sup_D = float(np.max(np.log(np.abs(0.5 * np.exp(1j * theta) - 0.9)) - math.log(0.9)))
    assert sup_D == pytest.approx(math.log(14 / 9), rel=1e-12)
    bound = theorem1_pointwise_bound(2, 0.5, 0.25, 1.0, sup_D, AtomicMeasure.empty())
    assert bound == pytest.approx(-2 * math.log(14 / 9), rel=1e-9)
    assert u(0.25) == pytest.approx(-0.3254, abs=1e-4)
    assert u(0.25) >= bound


def test_pointwise_bound_atom_at_x():
    mu = AtomicMeasure([[0.1, 0.2]], [1.0])
    assert theorem1_pointwise_bound(2, 0.5, (0.1, 0.2), 1.0, 1.0, mu) == -math.inf


def test_pointwise_bound_outside():
    with pytest.raises(DomainError, match="x outside D"):
        theorem1_pointwise_bound(2, 0.5, 0.5, 1.0, 1.0, AtomicMeasure.empty())


def test_pointwise_bound_with_atoms_direct_evaluation():
    # u = ln|z - a| - ln|a| with a inside D; check the bound holds on a grid
    a = 0.2 + 0.1j
    mu = AtomicMeasure([[a.real, a.imag]], [1.0])
    theta = np.linspace(0, 2 * np.pi, 20001)
    sup_D = float(np.max(np.log(np.abs(0.5 * np.exp(1j * theta) - a)))) - math.log(abs(a)) + 1e-6
    for x in [0.1, -0.3j, 0.35 + 0.2j, 0.2 + 0.11j]:
        u = math.log(abs(x - a)) - math.log(abs(a))
        assert u >= theorem1_pointwise_bound(2, 0.5, x, 1.0, sup_D, mu)


def test_worked_certificate():
    prob = DiscProblem(0.5, 0.25, 1.0, Gauge.power(1, 1), boundary_sup=1.3)
    cert = disc_certificate(prob)
    assert cert.annulus_term == 0.0
    assert cert.harnack_term == 2.0
    assert cert.gauge_term == 2.0
    assert cert.lower_bound == -4 * 1.3
    assert cert.multiplier == 4.0


def test_harnack_term_matches_ball_distance():
    from minorant.harnack import ball_center_distance
    for s0 in [0.05, 0.2, 0.4]:
        cert = disc_certificate(DiscProblem(0.5, s0, 0.5, Gauge.power(1)))
        assert cert.harnack_term == pytest.approx(ball_center_distance(2, 0.5, s0).value - 1, rel=1e-13)


def test_s0_zero():
    assert disc_certificate(DiscProblem(0.5, 0.0, 0.5, Gauge.power(1))).harnack_term == 0.0


def test_budget_value():
    cert = disc_certificate(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1)))
    assert cert.content_budget == pytest.approx(225 / math.log(2), rel=1e-14)
    assert round(cert.content_budget, 2) == 324.61
    assert round(cert.simplified_budget_paper, 2) == 288.54
    assert cert.simplified_budget_paper < cert.content_budget


def test_budget_formula_and_covering_constant():
    for R in [0.1, 0.3, 0.5, 0.9]:
        cert = disc_certificate(DiscProblem(R, 0.0, R, Gauge.power(1)))
        assert cert.content_budget == pytest.approx(sharp_budget(R), rel=1e-13)
        assert cert.constants["covering_constant"] == 5 ** 2
        generic = covering_content_budget(2, R, 1 - R, ((1 + R) / (1 - R)) ** 2)
        assert generic == cert.content_budget


def test_power_budget_scaling():
    base = power_content_budget(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1, 1)))
    assert base == pytest.approx(324.606, abs=1e-3)
    assert power_content_budget(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1, 10))) == pytest.approx(base / 10, rel=1e-15)
    assert power_content_budget(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1, 1e12))) < 1e-9


def test_power_budget_errors():
    tab = Gauge.tabulated([0, 2], [0, 1])
    with pytest.raises(UnsupportedGaugeError):
        power_content_budget(DiscProblem(0.5, 0.25, 1.0, tab))
    with pytest.raises(ValidationError):
        power_content_budget(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1, 0)))


@settings(max_examples=200, deadline=None)
@given(
    R=st.floats(0.01, 0.99),
    s_frac=st.floats(0, 0.999),
    r_frac=st.floats(1e-6, 1.0),
    p=st.floats(0.05, 2.0),
    B=st.floats(0.01, 100),
)
def test_trade_off_and_sign(R, s_frac, r_frac, p, B):
    prob1 = DiscProblem(R, s_frac * R, r_frac * 2 * R, Gauge.power(p, 1.0), 1.0)
    probB = DiscProblem(R, s_frac * R, r_frac * 2 * R, Gauge.power(p, B), 1.0)
    c1, cB = disc_certificate(prob1), disc_certificate(probB)
    assert c1.annulus_term >= 0
    assert cB.gauge_term == pytest.approx(B * c1.gauge_term, rel=1e-12)
    assert power_content_budget(probB) == pytest.approx(power_content_budget(prob1) / B, rel=1e-12)
    assert c1.lower_bound == pytest.approx(-c1.multiplier * 1.0, rel=1e-15)


def test_annulus_zero_exactly_at_2R():
    for R in np.linspace(0.05, 0.95, 19):
        assert disc_certificate(DiscProblem(float(R), 0.0, float(2 * R), Gauge.power(1))).annulus_term == 0.0


def test_annulus_factor_value():
    assert annulus_factor(2, 1.0, 0.5, 0.5, 0.5) == pytest.approx(1.0)
    assert annulus_factor(3, 1.0, 0.5, 0.5, 0.5) == pytest.approx(1.0 / 1.0)
    with pytest.raises(DomainError):
        annulus_factor(2, 1.0, 1.5, 0.5, 0.5)


def test_harnack_term_diverges_as_s0_to_R():
    seq = [0.5 * (1 - 10.0 ** -k) for k in range(1, 12)]
    terms = [disc_certificate(DiscProblem(0.5, s, 1.0, Gauge.power(1))).harnack_term for s in seq]
    assert all(b > a for a, b in zip(terms, terms[1:]))
    assert terms[-1] > 1e10


@pytest.mark.parametrize("kwargs,field", [
    (dict(R=1.0, s0=0.1, r=0.5), "problem.R"),
    (dict(R=0.0, s0=0.0, r=0.5), "problem.R"),
    (dict(R=0.5, s0=0.5, r=0.5), "problem.s0"),
    (dict(R=0.5, s0=-0.1, r=0.5), "problem.s0"),
    (dict(R=0.5, s0=0.1, r=1.01), "problem.r"),
    (dict(R=0.5, s0=0.1, r=0.0), "problem.r"),
])
def test_problem_validation(kwargs, field):
    with pytest.raises(ValidationError) as info:
        DiscProblem(gauge=Gauge.power(1), **kwargs)
    assert info.value.field == field


def test_problem_validation_gauge_and_sup():
    with pytest.raises(ValidationError) as info:
        DiscProblem(0.5, 0.1, 0.5, Gauge.power(2.5))
    assert info.value.field == "gauge.p"
    with pytest.raises(ValidationError) as info:
        DiscProblem(0.5, 0.1, 0.5, Gauge.power(1), boundary_sup=-1.0)
    assert info.value.field == "problem.boundary_sup"
    with pytest.raises(ValidationError) as info:
        DiscProblem(0.5, 0.1, 0.8, Gauge.tabulated([0, 0.5], [0, 1]))
    assert info.value.field == "gauge.table"


def test_certificate_dict_names_every_term():
    d = disc_certificate(DiscProblem(0.5, 0.25, 1.0, Gauge.power(1), 2.0)).as_dict()
    assert set(d["terms"]) == {"harnack_term", "annulus_term", "gauge_term"}
    assert d["lower_bound"] == -8.0


def test_simplified_budget_threshold():
    # 25 ((1+R)/(1-R))^2 <= 100/(1-R) exactly when R <= 2 sqrt(3) - 3
    edge = 2 * math.sqrt(3) - 3
    for R in np.linspace(0.01, 0.99, 99):
        cert = disc_certificate(DiscProblem(float(R), 0.0, float(R), Gauge.power(1)))
        assert (cert.simplified_budget_paper >= cert.content_budget) == (R <= edge)
