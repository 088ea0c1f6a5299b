import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minorant.errors import DomainError, NumericFailure
from minorant.harnack import (
    BoundaryAtomMeasure,
    HarnackBound,
    ball_center_distance,
    ball_pair_upper,
    center_distance_array,
    poisson_center_distance,
    poisson_disc_distance,
    poisson_integral,
    poisson_kernel,
    punctured_disc_circle_bound,
    punctured_harmonic_sample,
)


def mobius_distance(x, y):
    # Harnack distance on the unit disc via the pseudo-hyperbolic distance; invariant oracle
    delta = abs(x - y) / abs(1 - x.conjugate() * y)
    return (1 + delta) / (1 - delta)


def random_disc_points(rng, n, rmax=0.95):
    return np.sqrt(rng.uniform(0, rmax ** 2, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))


class TestClosedForm:
    def test_center(self):
        assert ball_center_distance(2, 1, 0).value == 1.0

    def test_half_radius_plane(self):
        b = ball_center_distance(2, 1, 0.5)
        assert b.value == pytest.approx(3.0, rel=1e-15)
        assert b.exact and b.method == "ball_formula"

    def test_half_radius_space(self):
        assert ball_center_distance(3, 1, 0.5).value == pytest.approx(6.0, rel=1e-15)

    def test_outside(self):
        with pytest.raises(DomainError):
            ball_center_distance(2, 1, 1.0)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_monotone_in_rho(self, d):
        rho = np.linspace(0, 0.99, 200)
        vals = center_distance_array(d, 1.0, rho)
        assert np.all(np.diff(vals) > 0)
        assert vals[0] == 1.0

    @given(r1=st.floats(0.1, 5), extra=st.floats(0.01, 5), frac=st.floats(0, 0.999))
    def test_subordination(self, r1, extra, frac):
        r2 = r1 + extra
        rho = frac * r1
        for d in (2, 3):
            assert ball_center_distance(d, r2, rho).value <= ball_center_distance(d, r1, rho).value

    def test_homothety(self):
        assert ball_center_distance(2, 4.0, 2.0).value == pytest.approx(3.0)
        assert ball_center_distance(3, 2.0, 1.0).value == pytest.approx(6.0)


class TestTriangle:
    def test_origin(self):
        assert ball_pair_upper(2, 1, 0j, 0j).value == 1.0

    def test_two_halves(self):
        b = ball_pair_upper(2, 1, 0.5, 0.5j)
        assert b.value == pytest.approx(9.0)
        assert not b.exact and b.method == "triangle"

    def test_half_and_origin(self):
        assert ball_pair_upper(2, 1, (0.5, 0.0), (0.0, 0.0)).value == pytest.approx(3.0)

    def test_outside(self):
        with pytest.raises(DomainError, match="x outside ball"):
            ball_pair_upper(2, 1, 1.5, 0)


class TestPuncturedBound:
    def test_values(self):
        assert punctured_disc_circle_bound(1 / 3).value == pytest.approx(4.0)
        assert punctured_disc_circle_bound(0.5).value == pytest.approx(9.0)

    def test_limit_at_zero(self):
        assert punctured_disc_circle_bound(1e-12).value == pytest.approx(1.0)

    @pytest.mark.parametrize("R", [0.0, 1.0, -0.2, 1.5])
    def test_domain(self, R):
        with pytest.raises(DomainError):
            punctured_disc_circle_bound(R)


class TestOracle:
    def test_equal_points(self):
        assert poisson_disc_distance(0.3 + 0.1j, 0.3 + 0.1j).value == 1.0

    def test_matches_closed_form(self):
        assert poisson_disc_distance(0.5, 0).value == pytest.approx(3.0, abs=1e-9)

    def test_symmetric(self):
        x, y = 0.2 - 0.4j, -0.7 + 0.1j
        assert poisson_disc_distance(x, y).value == pytest.approx(poisson_disc_distance(y, x).value, rel=1e-12)

    def test_matches_mobius(self):
        rng = np.random.default_rng(7)
        xs, ys = random_disc_points(rng, 40), random_disc_points(rng, 40)
        for x, y in zip(xs, ys):
            assert poisson_disc_distance(x, y).value == pytest.approx(mobius_distance(x, y), rel=1e-9)

    def test_near_boundary(self):
        x = 0.999 * cmath.exp(0.3j)
        assert poisson_disc_distance(x, 0).value == pytest.approx(1.999 / 0.001, rel=1e-9)

    def test_dominated_by_triangle(self):
        rng = np.random.default_rng(3)
        for x, y in zip(random_disc_points(rng, 50), random_disc_points(rng, 50)):
            assert poisson_disc_distance(x, y).value <= ball_pair_upper(2, 1, x, y).value + 1e-9

    def test_iteration_cap(self):
        with pytest.raises(NumericFailure) as exc:
            poisson_disc_distance(0.5, 0.1j, tolerance=1e-15, max_iter=3)
        assert exc.value.bracket is not None

    def test_outside(self):
        with pytest.raises(DomainError):
            poisson_disc_distance(1.0, 0)

    @pytest.mark.parametrize("d", [3, 4])
    def test_center_oracle(self, d):
        for rho in (0.1, 0.5, 0.9):
            assert poisson_center_distance(d, 1.0, rho).value == pytest.approx(
                ball_center_distance(d, 1.0, rho).value, rel=1e-10)

    def test_center_oracle_plane(self):
        assert poisson_center_distance(2, 1.0, 0.5).value == pytest.approx(3.0, rel=1e-10)


class TestSamplers:
    def test_poisson_kernel_center(self):
        assert poisson_kernel(0, 1) == pytest.approx(1 / (2 * math.pi))
        h = punctured_harmonic_sample(0.0, BoundaryAtomMeasure([0.0], [1.0]))
        assert h(0) == pytest.approx(1 / (2 * math.pi))

    def test_log_part_vanishes_on_circle(self):
        mu = BoundaryAtomMeasure([0.0], [1e-9])
        h = punctured_harmonic_sample(1.0, mu)
        w = cmath.exp(2j)
        assert h(w) == pytest.approx(float(poisson_integral(mu, w)), abs=1e-15)
        assert h(w) == pytest.approx(0.0, abs=1e-9)

    def test_origin_is_infinite(self):
        h = punctured_harmonic_sample(1.0, BoundaryAtomMeasure([0.0], [1.0]))
        assert h(0) == math.inf

    def test_measure_invariants(self):
        with pytest.raises(DomainError):
            BoundaryAtomMeasure([], [])
        with pytest.raises(DomainError):
            BoundaryAtomMeasure([0.0], [0.0])

    def test_scale_invariance(self):
        # the kernel normalisation cancels in every ratio
        mu = BoundaryAtomMeasure([0.1, 2.0], [1.0, 3.0])
        mu_scaled = BoundaryAtomMeasure([0.1, 2.0], [2 * math.pi, 6 * math.pi])
        x, y = 0.3 + 0.2j, -0.5j
        r1 = poisson_integral(mu, x) / poisson_integral(mu, y)
        r2 = poisson_integral(mu_scaled, x) / poisson_integral(mu_scaled, y)
        assert r1 == pytest.approx(r2, rel=1e-14)

    def test_single_pair_within_punctured_bound(self):
        R = 0.5
        h = punctured_harmonic_sample(1.0, BoundaryAtomMeasure([0.0], [1.0]))
        t = punctured_disc_circle_bound(R).value
        w = R * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
        vals = h(w)
        ratio = vals[:, None] / vals[None, :]
        assert ratio.max() <= t and ratio.min() >= 1 / t


@settings(max_examples=50, deadline=None)
@given(angles=st.lists(st.floats(0, 2 * math.pi), min_size=1, max_size=5),
       seed=st.integers(0, 2 ** 32 - 1))
def test_harnack_inequality_with_oracle_distance(angles, seed):
    rng = np.random.default_rng(seed)
    mu = BoundaryAtomMeasure(angles, rng.uniform(0.1, 2.0, len(angles)))
    x, y = random_disc_points(rng, 2)
    t = poisson_disc_distance(x, y).value
    hx, hy = poisson_integral(mu, x), poisson_integral(mu, y)
    assert hx <= t * hy * (1 + 1e-10)
    assert hy <= t * hx * (1 + 1e-10)


def test_harnack_bound_never_below_one():
    with pytest.raises(NumericFailure):
        HarnackBound(0.5, True, "ball_formula")
