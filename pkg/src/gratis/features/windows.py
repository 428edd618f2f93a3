"""Window-based features: tiled stability/lumpiness and sliding shifts.

All computations run on the standardized series. The window width is one
seasonal cycle for seasonal data and 10 observations otherwise.
"""

from __future__ import annotations

import numpy as np

from ..errors import TooShort
from ._util import standardize

_VAR_FLOOR = 1e-10


def window_width(period: int) -> int:
    return period if period > 1 else 10


def tiled_window_features(x: np.ndarray, period: int = 1) -> dict:
    """Stability (variance of tile means) and lumpiness (variance of tile
    variances) over non-overlapping tiles."""
    x = np.asarray(x, dtype=float)
    w = window_width(period)
    if len(x) < 2 * w:
        raise TooShort(f"tiled features need length >= {2 * w}, got {len(x)}")
    z = standardize(x)
    n_tiles = len(z) // w
    tiles = z[: n_tiles * w].reshape(n_tiles, w)
    means = tiles.mean(axis=1)
    variances = tiles.var(axis=1, ddof=1)
    return {
        "stability": float(means.var(ddof=1)),
        "lumpiness": float(variances.var(ddof=1)),
    }


def _rolling_mean_var(z: np.ndarray, w: int):
    c1 = np.concatenate(([0.0], np.cumsum(z)))
    c2 = np.concatenate(([0.0], np.cumsum(z * z)))
    sums = c1[w:] - c1[:-w]
    sqsums = c2[w:] - c2[:-w]
    means = sums / w
    variances = np.maximum((sqsums - sums * sums / w) / (w - 1), 0.0)
    return means, variances


def sliding_shift_features(x: np.ndarray, period: int = 1) -> dict:
    """Largest level, variance, and Gaussian-KL shifts between consecutive
    windows, each with the 1-based position of the earlier window's end."""
    x = np.asarray(x, dtype=float)
    w = window_width(period)
    if len(x) < 2 * w:
        raise TooShort(f"shift features need length >= {2 * w}, got {len(x)}")
    z = standardize(x)
    means, variances = _rolling_mean_var(z, w)

    mu_a, mu_b = means[:-w], means[w:]
    level = np.abs(mu_b - mu_a)
    var_a = np.maximum(variances[:-w], _VAR_FLOOR)
    var_b = np.maximum(variances[w:], _VAR_FLOOR)
    var_shift = np.abs(var_b - var_a)
    kl = 0.5 * np.log(var_b / var_a) + (var_a + (mu_a - mu_b) ** 2) / (2.0 * var_b) - 0.5

    out = {}
    for name, series in (("level", level), ("var", var_shift), ("kl", kl)):
        idx = int(np.argmax(series))
        out[f"max.{name}.shift"] = float(series[idx])
        out[f"time.{name}.shift"] = float(idx + w)
    return out
