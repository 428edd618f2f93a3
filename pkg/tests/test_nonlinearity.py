import numpy as np
import pytest

from gratis.errors import SingularDesign, TooShort
from gratis.features.nonlinearity import nonlinearity


def quadratic_map_series(n, seed):
    """x_t = 0.5 x_{t-1}^2 - 0.4 + noise, kept bounded by clipping."""
    rng = np.random.default_rng(seed)
    x = np.empty(n)
    x[0] = 0.0
    for t in range(1, n):
        x[t] = np.clip(0.5 * x[t - 1] ** 2 - 0.4 + rng.normal(0, 0.5), -3.0, 3.0)
    return x


class TestNonlinearity:
    def test_linear_ar_small(self):
        rng = np.random.default_rng(0)
        x = np.empty(2000)
        x[0] = 0.0
        for t in range(1, 2000):
            x[t] = 0.5 * x[t - 1] + rng.normal()
        assert nonlinearity(x) < 0.02

    def test_quadratic_map_large(self):
        assert nonlinearity(quadratic_map_series(2000, seed=1)) > 0.1

    def test_affine_invariance(self):
        x = quadratic_map_series(500, seed=2)
        a = nonlinearity(x)
        b = nonlinearity(250.0 * x - 17.0)
        assert a == pytest.approx(b, abs=1e-8)

    def test_too_short(self):
        with pytest.raises(TooShort):
            nonlinearity(np.arange(19.0))

    def test_singular_design(self):
        # A two-valued alternating series makes lag powers collinear.
        x = np.tile([0.0, 1.0], 50)
        with pytest.raises(SingularDesign):
            nonlinearity(x)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        for s in range(10):
            assert nonlinearity(rng.normal(0, 1, 200)) >= 0.0
