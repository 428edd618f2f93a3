import numpy as np
import pytest
from statsmodels.tsa.stattools import acf as sm_acf
from statsmodels.tsa.stattools import pacf as sm_pacf

from gratis.errors import TooShort
from gratis.features._util import acf, pacf
from gratis.features.correlation import acf_feature_set, pacf_feature_set
from gratis.mar import MARModel, SeasonalARComponent, simulate_mar


def ar1_series(theta, n, seed):
    m = MARModel(
        components=(SeasonalARComponent(ar_coeffs=(theta,)),), weights=(1.0,)
    )
    return simulate_mar(m, n=n, burn_in=200, seed=seed).values


class TestEstimators:
    def test_acf_matches_reference(self):
        rng = np.random.default_rng(0)
        x = rng.normal(0, 1, 500)
        ref = sm_acf(x, nlags=10, fft=False)[1:]
        np.testing.assert_allclose(acf(x, 10), ref, atol=1e-10)

    def test_pacf_matches_reference(self):
        rng = np.random.default_rng(1)
        x = np.cumsum(rng.normal(0, 1, 400)) * 0.1 + rng.normal(0, 1, 400)
        ref = sm_pacf(x, nlags=8, method="ywm")[1:]
        np.testing.assert_allclose(pacf(x, 8), ref, atol=1e-8)

    def test_zero_variance_series_yields_zeros(self):
        assert np.all(acf(np.ones(50), 10) == 0.0)


class TestAcfFeatures:
    def test_white_noise(self):
        rng = np.random.default_rng(2)
        out = acf_feature_set(rng.normal(0, 1, 100_000))
        assert abs(out["x.acf1"]) < 0.02

    def test_ar1_theoretical(self):
        out = acf_feature_set(ar1_series(0.5, 100_000, seed=3))
        assert out["x.acf1"] == pytest.approx(0.5, abs=0.02)

    def test_non_seasonal_zero(self):
        rng = np.random.default_rng(4)
        out = acf_feature_set(rng.normal(0, 1, 50), period=1)
        assert out["seas.acf1"] == 0.0

    def test_seasonal_lag_detects_cycle(self):
        t = np.arange(600)
        x = np.sin(2 * np.pi * t / 12) + np.random.default_rng(5).normal(0, 0.1, 600)
        out = acf_feature_set(x, period=12)
        assert out["seas.acf1"] > 0.8

    def test_too_short(self):
        with pytest.raises(TooShort):
            acf_feature_set(np.arange(12.0))


class TestPacfFeatures:
    def test_white_noise_small(self):
        rng = np.random.default_rng(6)
        out = pacf_feature_set(rng.normal(0, 1, 100_000))
        assert out["x.pacf5"] < 0.01

    def test_ar1_cuts_off(self):
        out = pacf_feature_set(ar1_series(0.5, 100_000, seed=7))
        assert out["x.pacf5"] == pytest.approx(0.25, abs=0.03)

    def test_non_seasonal_zero(self):
        rng = np.random.default_rng(8)
        out = pacf_feature_set(rng.normal(0, 1, 50), period=1)
        assert out["seas.pacf"] == 0.0
