import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremaldep.core import (
    Cone,
    Degenerate,
    DegenerateTailError,
    OrderedTail,
    ParameterError,
    PolarObservation,
    PolarSample,
    cone_distance,
    cone_distance_cartesian,
    g_transform,
    hill_alpha,
    hill_estimate,
    hill_log_mean,
    order_tail,
    polar_transform,
    power_transform,
    to_polar,
)


def _tail(radii, thetas=None):
    radii = np.asarray(radii, dtype=float)
    thetas = np.full(radii.shape, 0.5) if thetas is None else np.asarray(thetas, dtype=float)
    return OrderedTail(radii, thetas, radii.shape[0])


class TestPolar:
    def test_examples(self):
        assert to_polar((3, 1)) == PolarObservation(4.0, 0.75)
        assert to_polar((0, 5)) == PolarObservation(5.0, 0.0)
        assert isinstance(to_polar((0, 0)), Degenerate)

    def test_rejects_negative(self):
        with pytest.raises(ParameterError):
            to_polar((-1, 2))
        with pytest.raises(ParameterError):
            polar_transform([1.0, -1.0], [1.0, 1.0])

    def test_vector_drops_zero_radius(self):
        s = polar_transform([3.0, 0.0, 0.0], [1.0, 0.0, 2.0])
        np.testing.assert_array_equal(s.r, [4.0, 2.0])
        np.testing.assert_array_equal(s.theta, [0.75, 0.0])

    @given(st.floats(1e-6, 1e6), st.floats(0, 1))
    def test_round_trip(self, r, theta):
        p = to_polar((r * theta, r * (1 - theta)))
        assert math.isclose(p.r, r, rel_tol=1e-12)
        assert math.isclose(p.theta, theta, rel_tol=1e-12, abs_tol=1e-15)


class TestGTransform:
    @pytest.mark.parametrize("theta,expected", [(0, 1.0), (1, 1.0), (0.25, 0.5), (0.5, 2.0)])
    def test_values(self, theta, expected):
        assert g_transform(theta) == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ParameterError):
            g_transform(1.2)
        with pytest.raises(ParameterError):
            g_transform(-0.01)

    def test_range_on_dense_grid(self):
        g = g_transform(np.linspace(0, 1, 100001))
        assert g.min() > 0 and g.max() <= 2


class TestConeDistance:
    def test_inside(self):
        assert cone_distance(4, 0.5, Cone(0.4, 0.6)) == 0

    def test_degenerate_cone(self):
        assert cone_distance(4, 0.75, Cone(0.5, 0.5)) == pytest.approx(2.0)
        assert cone_distance_cartesian(3, 1, Cone(0.5, 0.5)) == pytest.approx(2.0)

    def test_a_zero_convention(self):
        assert cone_distance(4, 0.75, Cone(0.0, 0.5)) == pytest.approx(2.0)
        assert cone_distance(4, 0.0, Cone(0.0, 0.5)) == 0

    def test_b_zero(self):
        assert cone_distance(1.0, 0.2, Cone(0.0, 0.0)) == math.inf
        assert cone_distance(1.0, 0.0, Cone(0.0, 0.0)) == 0

    def test_invalid_cone(self):
        with pytest.raises(ParameterError):
            Cone(0.6, 0.4)

    def test_cartesian_agrees(self):
        rng = np.random.default_rng(3)
        x, y = rng.pareto(1.0, 10_000), rng.pareto(1.0, 10_000)
        a = rng.uniform(1e-3, 1, 10_000)
        b = a + (1 - a) * rng.random(10_000)
        for i in range(0, 10_000, 997):
            cone = Cone(a[i], b[i])
            r, th = x[i] + y[i], x[i] / (x[i] + y[i])
            assert cone_distance(r, th, cone) == pytest.approx(
                cone_distance_cartesian(x[i], y[i], cone), rel=1e-10, abs=1e-12 * r
            )

    @given(st.floats(1e-3, 1e3), st.floats(0, 1), st.floats(0.01, 1), st.floats(0, 1))
    def test_scale_equivariance(self, r, theta, b, frac):
        cone = Cone(b * frac, b)
        for c in (1e-3, 7.5, 1e3):
            assert cone_distance(c * r, theta, cone) == pytest.approx(c * cone_distance(r, theta, cone), rel=1e-12)

    @given(st.floats(0, 1), st.floats(0.01, 1), st.floats(0.01, 1))
    def test_membership(self, theta, a, b):
        a, b = min(a, b), max(a, b)
        inside = a <= theta <= b
        assert (cone_distance(2.0, theta, Cone(a, b)) == 0) == inside

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_nesting(self, theta, p1, p2, q1, q2):
        a_out, b_out = min(p1, p2), max(p1, p2)
        a_in = a_out + (b_out - a_out) * min(q1, q2)
        b_in = a_out + (b_out - a_out) * max(q1, q2)
        assert cone_distance(3.0, theta, Cone(a_in, b_in)) >= cone_distance(3.0, theta, Cone(a_out, b_out)) - 1e-12


class TestOrderTail:
    def test_sorting(self):
        s = PolarSample(np.array([1.0, 5.0, 3.0]), np.array([0.2, 0.9, 0.5]))
        t = order_tail(s, 2)
        np.testing.assert_array_equal(t.radii, [5, 3])
        np.testing.assert_array_equal(t.concomitants, [0.9, 0.5])

    def test_tie_break_by_index(self):
        t = order_tail(PolarSample(np.array([2.0, 2.0]), np.array([0.1, 0.7])), 2)
        np.testing.assert_array_equal(t.concomitants, [0.1, 0.7])

    def test_full_length(self):
        rng = np.random.default_rng(0)
        s = PolarSample(rng.random(50) + 0.1, rng.random(50))
        t = order_tail(s, 50)
        assert t.k == 50 and t.n == 50
        assert np.all(np.diff(t.radii) <= 0)
        assert sorted(t.concomitants) == sorted(s.theta)

    @pytest.mark.parametrize("k", [0, 4])
    def test_range(self, k):
        with pytest.raises(ParameterError):
            order_tail(PolarSample(np.ones(3), np.zeros(3)), k)


class TestHill:
    def test_examples(self):
        e = math.e
        assert hill_log_mean(_tail([e**2, e])) == pytest.approx(0.5)
        assert hill_alpha(_tail([e**2, e])) == pytest.approx(2.0)
        assert hill_log_mean(_tail([8, 4, 2])) == pytest.approx(math.log(2))
        assert hill_alpha(_tail([8, 4, 2])) == pytest.approx(1 / math.log(2))

    def test_degenerate(self):
        assert hill_log_mean(_tail([3, 3, 3])) == 0
        with pytest.raises(DegenerateTailError):
            hill_alpha(_tail([3, 3, 3]))

    @given(st.lists(st.floats(1, 1e4), min_size=2, max_size=40), st.sampled_from([1e-3, 0.37, 1e3]))
    def test_scale_invariance(self, values, c):
        radii = np.sort(np.array(values))[::-1]
        assert hill_log_mean(radii * c) == pytest.approx(hill_log_mean(radii), rel=1e-12, abs=1e-12)

    def test_estimate_reciprocal(self):
        est = hill_estimate(np.random.default_rng(1).pareto(2.0, 1000) + 1, 100)
        assert est.alpha_hat * est.inv_alpha_hat == pytest.approx(1.0, rel=1e-12)


class TestPowerTransform:
    def test_examples(self):
        assert power_transform([4.0], 2, 3)[0] == pytest.approx(4 ** (2 / 3))
        assert power_transform([4.0], 2, 3)[0] == pytest.approx(2.5198, abs=1e-4)
        np.testing.assert_array_equal(power_transform([1.0, 2.5], 2, 2), [1.0, 2.5])

    def test_bad_alpha(self):
        with pytest.raises(ParameterError):
            power_transform([1.0], 0, 1)

    def test_monotone(self):
        x = np.sort(np.random.default_rng(2).random(100))
        assert np.all(np.diff(power_transform(x, 1.3, 2.1)) >= 0)

    def test_hill_after_transform(self):
        # Pareto(2) -> target 3; Hill at k=100 should land near 3
        rng = np.random.default_rng(11)
        est = []
        for _ in range(100):
            x = (1 - rng.random(10_000)) ** (-1 / 2)
            est.append(hill_estimate(power_transform(x, 2.0, 3.0), 100).alpha_hat)
        est = np.array(est)
        assert np.mean((est >= 2.4) & (est <= 3.6)) >= 0.9
