"""Lower-bound certificates for subharmonic functions on discs and balls.

Setting for the disc certificate: u is subharmonic on the closed unit disc
with u(0) = 0, D is the disc of radius R < 1 about 0, S lies in the closed
disc of radius s0 < R, and covering radii are at most r <= 2R.  Outside an
exceptional set E,

    u >= -(harnack_term + annulus_term + gauge_term) * sup_{|z|=1} u

with

    harnack_term = 2 s0 / (R - s0)
    annulus_term = ln(2R/r) / ln(1/R) * ((1+R)/(1-R))^2
    gauge_term   = N_0^h(r) = int_0^r h(s)/s ds

and the h-content of radius r of E is at most 25 ((1+R)/(1-R))^2 / ln(1/R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import integrate

from .core import Gauge, _check_dim, d_hat, extended_sum, gauge_constant, kernel
from .errors import DivergenceError, DomainError, UnsupportedGaugeError, ValidationError
from .harnack import ball_center_distance, punctured_disc_circle_bound
from .riesz import AtomicMeasure, integrated_counting


def n0_gauge_integral(g: Gauge, r: float, d: int = 2) -> float:
    """d_hat * int_0^r h(s) / s^(d-1) ds.

    Closed form B c_p d_hat r^(p-d+2) / (p-d+2) for power gauges; adaptive
    quadrature over the table knots for tabulated ones.
    """
    d = _check_dim(d)
    if d < 2:
        raise DomainError("N_0 is used for d >= 2")
    if not r > 0:
        raise DomainError(f"r must be positive, got {r!r}")
    if g.kind == "power":
        excess = g.p - (d - 2)
        if excess <= 0:
            raise DivergenceError(f"int_0 h(s)/s^{d - 1} ds diverges for p = {g.p} <= d - 2 = {d - 2}")
        if g.B == 0:
            return 0.0
        return g.B * gauge_constant(g.p) * d_hat(d) * r ** excess / excess
    if r > g.r_max:
        raise DomainError(f"gauge is tabulated only up to {g.r_max}")
    # near 0 the interpolant is linear, h(s) ~ slope * s
    slope = g.hs[1] / g.ts[1]
    if d >= 3 and slope > 0:
        raise DivergenceError("a tabulated gauge with h'(0) > 0 makes N_0 diverge for d >= 3")
    knots = [t for t in g.ts if 0 < t < r]
    val, err = integrate.quad(lambda s: g(s) / s ** (d - 1), 0.0, r, points=knots or None,
                              limit=200, epsabs=0.0, epsrel=1e-12)
    return d_hat(d) * val


def annulus_factor(d: int, diam: float, r: float, R: float, gap: float) -> float:
    """(k(diam) - k(r)) / (k(R + gap) - k(R)) for the kernel k of dimension d."""
    if not 0 < r <= diam:
        raise DomainError("need 0 < r <= diam")
    if r == diam:
        return 0.0
    return (kernel(d, diam) - kernel(d, r)) / (kernel(d, R + gap) - kernel(d, R))


def covering_content_budget(d: int, R: float, gap: float, harnack_sup: float) -> float:
    """5^d / (k(R + gap) - k(R)) * harnack_sup: the content budget for the exceptional set."""
    return 5 ** d / (kernel(d, R + gap) - kernel(d, R)) * harnack_sup


def theorem1_pointwise_bound(d: int, D_radius: float, x, diamD: float, boundary_sup_D: float,
                             mu: AtomicMeasure) -> float:
    """Lower bound for u(x) on the ball D = B_0(D_radius), given u(0) = 0.

    -(dist_har(0, x) - 1) * sup_{dD} u - N_x(diamD) with the integrated
    counting function of ``mu``, the Riesz measure of u restricted to the
    closed ball.  Returns -inf when an atom of ``mu`` sits at ``x``.
    """
    if isinstance(x, (complex, float, int)):
        x = (complex(x).real, complex(x).imag)
    rho = math.hypot(*x)
    if rho >= D_radius:
        raise DomainError("x outside D")
    harnack = ball_center_distance(d, D_radius, rho).value - 1.0
    count = integrated_counting(mu, x, diamD, d)
    return extended_sum(-harnack * boundary_sup_D, -count)


@dataclass(frozen=True)
class DiscProblem:
    """Disc configuration: D = R * unit disc, G = unit disc, S inside |z| <= s0."""

    R: float
    s0: float
    r: float
    gauge: Gauge
    boundary_sup: float = 0.0

    def __post_init__(self):
        if not 0 < self.R < 1:
            raise ValidationError("problem.R", f"need 0 < R < 1, got {self.R!r}")
        if not 0 <= self.s0 < self.R:
            raise ValidationError("problem.s0", f"need 0 <= s0 < R = {self.R}, got {self.s0!r}")
        if not 0 < self.r <= 2 * self.R:
            raise ValidationError("problem.r", f"need 0 < r <= 2R = {2 * self.R}, got {self.r!r}")
        if not (math.isfinite(self.boundary_sup) and self.boundary_sup >= 0):
            raise ValidationError("problem.boundary_sup",
                                  f"sup of u on the unit circle must be finite and >= u(0) = 0, got {self.boundary_sup!r}")
        if self.gauge.kind == "power" and not self.gauge.p <= 2:
            raise ValidationError("gauge.p", f"degree must lie in (0, 2] in the plane, got {self.gauge.p!r}")
        if self.gauge.kind == "tabulated" and self.r > self.gauge.r_max:
            raise ValidationError("gauge.table", f"table ends at {self.gauge.r_max} < r = {self.r}")

    @property
    def gap(self) -> float:
        """Distance from D to the complement of the unit disc."""
        return 1.0 - self.R

    def with_boundary_sup(self, value: float) -> "DiscProblem":
        return DiscProblem(self.R, self.s0, self.r, self.gauge, value)


@dataclass(frozen=True)
class BoundCertificate:
    lower_bound: float
    content_budget: float
    harnack_term: float
    annulus_term: float
    gauge_term: float
    boundary_sup: float
    simplified_budget_paper: float
    constants: dict = field(default_factory=dict)

    @property
    def multiplier(self) -> float:
        return self.harnack_term + self.annulus_term + self.gauge_term

    def as_dict(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "content_budget": self.content_budget,
            "terms": {
                "harnack_term": self.harnack_term,
                "annulus_term": self.annulus_term,
                "gauge_term": self.gauge_term,
            },
            "boundary_sup": self.boundary_sup,
            "simplified_budget_paper": self.simplified_budget_paper,
            "constants": dict(self.constants),
        }


def disc_certificate(prob: DiscProblem) -> BoundCertificate:
    """Uniform lower bound on S minus E and the content budget for E."""
    R, s0, r = prob.R, prob.s0, prob.r
    # dist_har(0, z) - 1 on the disc of radius R, written without cancellation
    harnack_term = 2.0 * s0 / (R - s0)
    punctured = punctured_disc_circle_bound(R).value
    annulus_term = annulus_factor(2, 2 * R, r, R, prob.gap) * punctured
    gauge_term = n0_gauge_integral(prob.gauge, r, 2)
    budget = covering_content_budget(2, R, prob.gap, punctured)
    multiplier = harnack_term + annulus_term + gauge_term
    return BoundCertificate(
        lower_bound=-multiplier * prob.boundary_sup,
        content_budget=budget,
        harnack_term=harnack_term,
        annulus_term=annulus_term,
        gauge_term=gauge_term,
        boundary_sup=prob.boundary_sup,
        simplified_budget_paper=100.0 / ((1.0 - R) * math.log(1.0 / R)),
        constants={
            "punctured_circle_distance": punctured,
            "covering_constant": 5 ** 2,
            "log_gap": -math.log(R),
        },
    )


def power_content_budget(prob: DiscProblem) -> float:
    """Budget for the p-dimensional content of E: content budget divided by B."""
    g = prob.gauge
    if g.kind != "power":
        raise UnsupportedGaugeError("the p-content budget needs a power gauge")
    if not g.B > 0:
        raise ValidationError("gauge.B", "multiplier must be positive for the p-content budget")
    return disc_certificate(prob).content_budget / g.B
