"""Unit-root statistics validated against independently-coded oracles.

The KPSS oracle is statsmodels' implementation. No reference library for the
PP Z-alpha and OCSB statistics is available in this environment, so their
oracles are separate implementations built here on statsmodels OLS, coded
directly from the published regression constructions.
"""

import warnings

import numpy as np
import pytest
from statsmodels.tsa.stattools import kpss as sm_kpss

from helpers import ocsb_oracle, pp_zalpha_oracle, validation_series

from gratis.errors import TooShort
from gratis.features.unitroot import (
    KPSS_TREND_CRIT_5PCT,
    kpss_stat,
    ndiffs,
    nsdiffs,
    ocsb_crit,
    ocsb_stat,
    pp_zalpha,
)
from gratis.generator import GeneratorConfig, generate_batch


class TestKpssOracle:
    def test_trend_statistic_matches_statsmodels(self):
        for x in validation_series():
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                ref, *_ = sm_kpss(x, regression="ct", nlags=1)
            assert kpss_stat(x, trend="ct", lags=1) == pytest.approx(ref, abs=1e-4)

    def test_level_statistic_matches_statsmodels(self):
        for x in validation_series()[:25]:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                ref, *_ = sm_kpss(x, regression="c", nlags=4)
            assert kpss_stat(x, trend="c", lags=4) == pytest.approx(ref, abs=1e-4)


class TestPPOracle:
    def test_matches_independent_implementation(self):
        for x in validation_series():
            mine = pp_zalpha(x, lags=1)
            ref = pp_zalpha_oracle(x, lags=1)
            assert mine == pytest.approx(ref, abs=1e-4 * max(1.0, abs(ref)))


class TestOcsbOracle:
    def test_matches_independent_implementation(self):
        rng = np.random.default_rng(99)
        for period in (4, 12):
            for i in range(10):
                n = 30 * period + 20 * i
                x = np.cumsum(rng.normal(0, 1, n)) + np.tile(
                    rng.normal(0, 2, period), n // period + 1
                )[:n]
                mine = ocsb_stat(x, period)
                ref = ocsb_oracle(x, period)
                assert mine == pytest.approx(ref, abs=1e-4 * max(1.0, abs(ref)))


class TestBehavior:
    def test_trend_stationary_passes_kpss(self):
        rng = np.random.default_rng(0)
        t = np.arange(2000)
        x = 0.01 * t + rng.normal(0, 1, 2000)
        assert kpss_stat(x, trend="ct", lags=1) < KPSS_TREND_CRIT_5PCT

    def test_random_walk_fails_kpss(self):
        rng = np.random.default_rng(1)
        hits = sum(
            kpss_stat(np.cumsum(rng.normal(0, 1, 2000)), trend="ct", lags=1)
            > KPSS_TREND_CRIT_5PCT
            for _ in range(100)
        )
        assert hits >= 95

    def test_white_noise_pp_strongly_negative(self):
        rng = np.random.default_rng(2)
        assert pp_zalpha(rng.normal(0, 1, 2000)) < -100

    def test_random_walk_pp_near_zero(self):
        rng = np.random.default_rng(3)
        vals = [pp_zalpha(np.cumsum(rng.normal(0, 1, 1000))) for _ in range(20)]
        assert np.median(vals) > -30


class TestNdiffs:
    def test_white_noise(self):
        rng = np.random.default_rng(4)
        assert ndiffs(rng.normal(0, 1, 500)) == 0

    def test_random_walk(self):
        rng = np.random.default_rng(5)
        hits = sum(ndiffs(np.cumsum(rng.normal(0, 1, 500))) == 1 for _ in range(100))
        assert hits >= 95

    def test_double_integrated(self):
        rng = np.random.default_rng(6)
        hits = sum(
            ndiffs(np.cumsum(np.cumsum(rng.normal(0, 1, 500)))) == 2
            for _ in range(50)
        )
        assert hits >= 45

    def test_monotone_under_differencing(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            x = np.cumsum(rng.normal(0, 1, 300))
            d0 = ndiffs(x)
            assert ndiffs(np.diff(x)) <= d0 or d0 == 0

    def test_too_short(self):
        with pytest.raises(TooShort):
            ndiffs(np.arange(11.0))


class TestNsdiffs:
    def test_non_seasonal_zero(self):
        rng = np.random.default_rng(8)
        assert nsdiffs(rng.normal(0, 1, 200), period=1) == 0

    def test_seasonal_random_walk_needs_difference(self):
        rng = np.random.default_rng(9)
        hits = 0
        for _ in range(20):
            n, m = 240, 12
            x = np.zeros(n)
            eps = rng.normal(0, 1, n)
            for t in range(m, n):
                x[t] = x[t - m] + eps[t]
            hits += nsdiffs(x, period=m)
        assert hits >= 18

    def test_stationary_seasonal_ar_no_difference(self):
        rng = np.random.default_rng(10)
        hits = 0
        for _ in range(20):
            n, m = 200, 4
            x = np.zeros(n)
            eps = rng.normal(0, 1, n)
            for t in range(m, n):
                x[t] = 0.5 * x[t - m] + eps[t]
            hits += 1 - nsdiffs(x, period=m)
        assert hits >= 18

    def test_short_input_returns_zero(self):
        rng = np.random.default_rng(11)
        assert nsdiffs(rng.normal(0, 1, 2 * 12 + 7), period=12) == 0

    def test_critical_values_negative_and_ordered(self):
        assert ocsb_crit(4) < ocsb_crit(12) < ocsb_crit(52) < 0


class TestOnGeneratedCorpus:
    def test_statistics_finite_on_generated_series(self):
        batch = generate_batch(GeneratorConfig(period=12, length=180), 20, seed=77)
        for ts in batch:
            assert np.isfinite(kpss_stat(ts.values, trend="ct", lags=1))
            assert np.isfinite(pp_zalpha(ts.values))
            assert nsdiffs(ts.values, 12) in (0, 1)
            assert ndiffs(ts.values) in (0, 1, 2)
