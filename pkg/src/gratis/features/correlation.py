"""Autocorrelation and partial autocorrelation feature sets.

Covers the series itself, its first and second differences, and the first
seasonal lag. Single-lag entries are correlations; the *.acf10 / *.pacf5
entries are sums of squared coefficients.
"""

from __future__ import annotations

import numpy as np

from ..errors import TooShort
from ._util import acf, pacf


def acf_feature_set(x: np.ndarray, period: int = 1) -> dict:
    """Lag-1 ACF and sum of squared first-10 ACFs for x, diff(x), diff2(x),
    plus the ACF at the first seasonal lag (0 for non-seasonal data)."""
    x = np.asarray(x, dtype=float)
    if len(x) < 13:
        raise TooShort(f"acf features need length >= 13, got {len(x)}")
    d1 = np.diff(x)
    d2 = np.diff(d1)
    out = {}
    for name, series in (("x", x), ("diff1", d1), ("diff2", d2)):
        r = acf(series, 10)
        out[f"{name}.acf1"] = float(r[0])
        out[f"{name}.acf10"] = float(r @ r)
    if period > 1 and period < len(x) - 1:
        out["seas.acf1"] = float(acf(x, period)[-1])
    else:
        out["seas.acf1"] = 0.0
    return out


def pacf_feature_set(x: np.ndarray, period: int = 1) -> dict:
    """Sums of squared first-5 PACFs for x, diff(x), diff2(x), plus the PACF
    at the first seasonal lag (0 for non-seasonal data)."""
    x = np.asarray(x, dtype=float)
    if len(x) < 13:
        raise TooShort(f"pacf features need length >= 13, got {len(x)}")
    d1 = np.diff(x)
    d2 = np.diff(d1)
    out = {}
    for name, series in (("x", x), ("diff1", d1), ("diff2", d2)):
        p = pacf(series, 5)
        out[f"{name}.pacf5"] = float(p @ p)
    if period > 1 and period < len(x) - 1:
        out["seas.pacf"] = float(pacf(x, period)[-1])
    else:
        out["seas.pacf"] = 0.0
    return out
