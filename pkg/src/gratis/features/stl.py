"""Trend/seasonal/remainder decomposition and the features derived from it.

Seasonal series are decomposed with STL (seasonal window 21). Multiple
seasonal periods are handled by iterative back-fitting: each seasonal
component is re-extracted from the series minus the current estimates of the
others, and two sweeps suffice. Non-seasonal series get a variable-span
local-linear trend with the span chosen by generalized cross-validation.

The decomposition operates on the standardized series; the remainder is
defined as the exact residual, so components always reconstruct the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from statsmodels.tsa.seasonal import STL

from ..errors import TooShort
from ._util import acf, standardize

SEASONAL_WINDOW = 21
BACKFIT_SWEEPS = 2
_GCV_SPANS = (0.1, 0.2, 0.3, 0.5, 0.75)


@dataclass(frozen=True)
class STLDecomposition:
    """Additive decomposition of a (standardized) series."""

    values: np.ndarray
    trend: np.ndarray
    seasonal_components: tuple
    periods: tuple
    remainder: np.ndarray


def _local_linear(z: np.ndarray, k: int):
    """Local linear smoother with tricube weights over k-point windows.

    Returns the fitted curve and the diagonal of the smoother matrix,
    which is what GCV needs.
    """
    n = len(z)
    k = min(max(k, 3), n)
    t = np.arange(n, dtype=float)
    fitted = np.empty(n)
    hat_diag = np.empty(n)
    half = k // 2
    for i in range(n):
        lo = max(0, min(i - half, n - k))
        window = slice(lo, lo + k)
        dt = t[window] - t[i]
        span = max(np.abs(dt).max(), 1.0)
        w = (1.0 - (np.abs(dt) / (span * 1.0001)) ** 3) ** 3
        sw = w.sum()
        st = w @ dt
        stt = w @ (dt * dt)
        sy = w @ z[window]
        sty = w @ (dt * z[window])
        denom = sw * stt - st * st
        if abs(denom) < 1e-12:
            fitted[i] = sy / sw
            hat_diag[i] = w[i - lo] / sw
        else:
            fitted[i] = (stt * sy - st * sty) / denom
            hat_diag[i] = w[i - lo] * stt / denom
    return fitted, hat_diag


def gcv_trend(z: np.ndarray) -> np.ndarray:
    """Trend of a non-seasonal series: local-linear fit with the span picked
    by generalized cross-validation over a small grid."""
    n = len(z)
    best = None
    for frac in _GCV_SPANS:
        k = max(5, int(np.ceil(frac * n)))
        if k > n:
            k = n
        fitted, hat_diag = _local_linear(z, k)
        tr = float(hat_diag.sum())
        if tr >= n - 0.5:
            continue
        rss = float(((z - fitted) ** 2).sum())
        gcv = n * rss / (n - tr) ** 2
        if best is None or gcv < best[0]:
            best = (gcv, fitted)
    if best is None:
        return np.full(n, z.mean())
    return best[1]


def stl_decompose_multi(x: np.ndarray, periods) -> STLDecomposition:
    """Decompose into trend + one seasonal component per period + remainder."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    periods = tuple(int(p) for p in periods)
    seasonal_periods = tuple(p for p in periods if p > 1)

    if seasonal_periods:
        if n < 2 * max(seasonal_periods) + 4:
            raise TooShort(
                f"seasonal decomposition needs length >= {2 * max(seasonal_periods) + 4}"
            )
    elif n < 8:
        raise TooShort("non-seasonal decomposition needs length >= 8")

    if np.ptp(x) == 0.0:
        # Constant input cannot be standardized: the trend is the series
        # itself and the remainder vanishes.
        zeros = np.zeros(n)
        return STLDecomposition(
            values=x.copy(),
            trend=x.copy(),
            seasonal_components=tuple(zeros.copy() for _ in seasonal_periods),
            periods=seasonal_periods,
            remainder=zeros,
        )

    z = standardize(x)

    if not seasonal_periods:
        trend = gcv_trend(z)
        return STLDecomposition(
            values=z,
            trend=trend,
            seasonal_components=(),
            periods=(),
            remainder=z - trend,
        )

    seasonals = [np.zeros(n) for _ in seasonal_periods]
    trend = np.zeros(n)
    sweeps = BACKFIT_SWEEPS if len(seasonal_periods) > 1 else 1
    for _ in range(sweeps):
        for i, period in enumerate(seasonal_periods):
            partial = z - sum(s for j, s in enumerate(seasonals) if j != i)
            res = STL(partial, period=period, seasonal=SEASONAL_WINDOW).fit()
            seasonals[i] = np.asarray(res.seasonal)
            trend = np.asarray(res.trend)
    remainder = z - trend - sum(seasonals)
    return STLDecomposition(
        values=z,
        trend=trend,
        seasonal_components=tuple(seasonals),
        periods=seasonal_periods,
        remainder=remainder,
    )


def _strength(component: np.ndarray, remainder: np.ndarray) -> float:
    denom = np.var(component + remainder, ddof=1)
    if denom <= 0 or not np.isfinite(denom):
        return 0.0
    return float(np.clip(1.0 - np.var(remainder, ddof=1) / denom, 0.0, 1.0))


def _leave_one_out_variances(e: np.ndarray) -> np.ndarray:
    n = len(e)
    s1 = e.sum()
    s2 = float(e @ e)
    means = (s1 - e) / (n - 1)
    ss = s2 - e * e - (n - 1) * means * means
    return np.maximum(ss, 0.0) / (n - 2)


def stl_feature_set(x: np.ndarray, periods) -> dict:
    """Trend and seasonal strengths, seasonal peak/trough positions,
    spikiness, trend linearity/curvature, and remainder autocorrelations."""
    dec = stl_decompose_multi(x, periods)
    n = len(dec.values)
    e = dec.remainder

    out = {"trend": _strength(dec.trend, e)}

    strengths = []
    for s in dec.seasonal_components:
        strengths.append(_strength(s, e))
    if not strengths:
        strengths = [0.0]
    out["seasonal.strength"] = strengths

    if dec.seasonal_components:
        largest = dec.seasonal_components[-1]
        m = dec.periods[-1]
        out["peak"] = float(int(np.argmax(largest)) % m + 1)
        out["trough"] = float(int(np.argmin(largest)) % m + 1)
    else:
        out["peak"] = 0.0
        out["trough"] = 0.0

    out["spike"] = float(np.var(_leave_one_out_variances(e), ddof=1)) if n > 3 else 0.0

    t = np.arange(n, dtype=float)
    basis = np.column_stack((np.ones(n), t, t * t))
    q, r = np.linalg.qr(basis)
    q = q * np.sign(np.diag(r))
    coeffs = q.T @ dec.trend
    out["linearity"] = float(coeffs[1])
    out["curvature"] = float(coeffs[2])

    r_e = acf(e, 10)
    out["e.acf1"] = float(r_e[0])
    out["e.acf10"] = float(r_e @ r_e)
    return out
