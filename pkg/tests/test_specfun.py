import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satsecrecy.specfun import (
    EULER_GAMMA,
    DEFAULT_SERIES,
    SeriesControl,
    SeriesConvergenceError,
    digamma,
    gamma_fn,
    hyp1f1,
    hyp2f1,
    hyp2f1_da,
    q_fn,
    q_inv,
)

from oracles import mp_hyp1f1, mp_hyp2f1

TABLE_X = 0.515 / (0.26 + 0.515)  # Gauss-series argument of the default fading


class TestGamma:
    def test_factorials(self):
        assert gamma_fn(1.0) == 1.0
        assert gamma_fn(5.0) == 24.0

    def test_half_integer(self):
        # frozen from a 40-digit reference evaluation
        assert gamma_fn(2.5) == pytest.approx(1.3293403881791370205, rel=1e-12)

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.7, 5.0, 10.0, 17.3, 30.0])
    def test_recurrence(self, x):
        assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, float("nan"), float("inf")])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            gamma_fn(x)


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-12)

    def test_recurrence_value(self):
        assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, rel=1e-12)

    def test_against_lgamma_difference(self):
        # central difference of an independent log-gamma
        h = 1e-6
        for x in (1.3, 2.0, 4.7, 10.5, 33.0):
            fd = (math.lgamma(x + h) - math.lgamma(x - h)) / (2 * h)
            assert abs(digamma(x) - fd) <= 1e-6

    @pytest.mark.parametrize("x", [0.0, -3.0, float("inf")])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            digamma(x)


class TestHyp1f1:
    @pytest.mark.parametrize("m", [0.739, 1.0, 10.1, 26.0])
    def test_at_zero(self, m):
        assert hyp1f1(m, 1.0, 0.0) == 1.0

    @pytest.mark.parametrize("x", [0.0, 0.5, 2.0, 7.5, 13.0, 20.0])
    def test_exponential_identity(self, x):
        assert hyp1f1(1.0, 1.0, x) == pytest.approx(math.exp(x), rel=1e-10)

    def test_large_shape(self):
        # frozen 500-term extended-precision sum
        assert hyp1f1(26.0, 1.0, 0.9) == pytest.approx(3005.9493409971525907,
                                                       rel=1e-12)
        assert hyp1f1(26.0, 1.0, 0.9) == pytest.approx(
            mp_hyp1f1(26, 1, 0.9), rel=1e-12)

    def test_nonpositive_b(self):
        with pytest.raises(ValueError):
            hyp1f1(1.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            hyp1f1(1.0, -2.0, 0.5)

    def test_convergence_error_carries_term(self):
        with pytest.raises(SeriesConvergenceError) as err:
            hyp1f1(26.0, 1.0, 1e6, SeriesControl(rel_tol=1e-14, max_terms=200))
        assert err.value.last_term > 0
        assert err.value.operation == "hyp1f1"


class TestHyp2f1:
    @pytest.mark.parametrize("a,b,c", [(1.0, 2.0, 1.0), (2.5, 26.0, 1.0)])
    def test_at_zero(self, a, b, c):
        assert hyp2f1(a, b, c, 0.0) == 1.0

    @pytest.mark.parametrize("m", [1.0, 5.0, 10.1, 19.4, 26.0])
    @pytest.mark.parametrize("x", [0.0, 0.2, 0.45, 0.6, 0.8, 0.95])
    def test_binomial_identity(self, m, x):
        assert hyp2f1(1.0, m, 1.0, x) == pytest.approx((1 - x) ** -m, rel=1e-10)

    def test_simple_value(self):
        assert hyp2f1(1.0, 2.0, 1.0, 0.3) == pytest.approx(0.7 ** -2, rel=1e-12)

    def test_default_fading_argument(self):
        # frozen 1000-term extended-precision sum at the default-scenario x
        assert hyp2f1(2.0, 26.0, 1.0, TABLE_X) == pytest.approx(
            112900670548590.35035, rel=1e-11)
        assert hyp2f1(2.0, 26.0, 1.0, TABLE_X) == pytest.approx(
            mp_hyp2f1(2, 26, 1, TABLE_X), rel=1e-11)

    def test_direct_series_matches_terminating_path(self):
        # x > 0.5 with non-integer first parameter exercises the direct sum
        for a in (1.5, 2.0001, 2.7):
            assert hyp2f1(a, 10.1, 1.0, 0.66) == pytest.approx(
                mp_hyp2f1(a, 10.1, 1, 0.66, terms=2000), rel=1e-11)

    @pytest.mark.parametrize("x", [1.0, 1.5, -0.2, 66.45])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            hyp2f1(2.0, 26.0, 1.0, x)

    def test_nonpositive_c(self):
        with pytest.raises(ValueError):
            hyp2f1(1.0, 2.0, 0.0, 0.3)


class TestHyp2f1Da:
    @pytest.mark.parametrize("a,b,c", [(1.0, 2.0, 1.0), (2.0, 26.0, 1.5)])
    def test_at_zero(self, a, b, c):
        assert hyp2f1_da(a, b, c, 0.0) == 0.0

    @staticmethod
    def _fd(a, b, c, x, h=1e-5):
        return (hyp2f1(a + h, b, c, x) - hyp2f1(a - h, b, c, x)) / (2 * h)

    def test_against_finite_difference(self):
        assert abs(hyp2f1_da(1.0, 2.0, 1.0, 0.5)
                   - self._fd(1.0, 2.0, 1.0, 0.5)) <= 1e-6

    def test_default_fading_point(self):
        got = hyp2f1_da(1.0, 26.0, 1.0, TABLE_X)
        ref = self._fd(1.0, 26.0, 1.0, TABLE_X)
        assert abs(got - ref) / abs(ref) <= 1e-6

    def test_grid_against_finite_difference(self):
        # 5x5 grid of (a, x), absolute agreement within 1e-6 (scaled by value)
        for a in (0.5, 1.0, 1.5, 2.0, 3.0):
            for x in (0.05, 0.15, 0.25, 0.35, 0.45):
                got = hyp2f1_da(a, 2.5, 1.0, x)
                ref = self._fd(a, 2.5, 1.0, x)
                assert abs(got - ref) <= 1e-6 * max(1.0, abs(ref))


class TestQFunctions:
    def test_half(self):
        assert q_fn(0.0) == 0.5
        assert q_inv(0.5) == 0.0

    def test_deep_tail(self):
        assert q_fn(10.0) == pytest.approx(7.619853024160526066e-24, rel=1e-13)

    def test_lower_tail(self):
        assert q_fn(-1.2815515655446004) == pytest.approx(0.9, abs=1e-15)

    def test_quantiles(self):
        assert q_inv(1e-3) == pytest.approx(3.0902323061678135415, rel=1e-12)
        assert q_inv(1e-4) == pytest.approx(3.7190164854556805644, rel=1e-12)

    def test_round_trip_grid(self):
        import numpy as np
        for p in np.geomspace(1e-9, 0.5, 200):
            p = float(p)
            assert abs(q_fn(q_inv(p)) - p) / p <= 1e-10

    @given(st.floats(min_value=1e-9, max_value=0.499))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_property(self, p):
        assert abs(q_fn(q_inv(p)) - p) <= 1e-10 * p

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            q_inv(p)


class TestSeriesControl:
    def test_defaults(self):
        assert DEFAULT_SERIES.rel_tol == 1e-14
        assert DEFAULT_SERIES.max_terms == 10_000

    @pytest.mark.parametrize("kwargs", [
        {"rel_tol": 0.0}, {"rel_tol": 1e-2}, {"rel_tol": -1e-6},
        {"max_terms": 10},
    ])
    def test_invariants(self, kwargs):
        with pytest.raises(ValueError):
            SeriesControl(**kwargs)
