"""Scoped forecaster bank and MASE scoring.

Six methods: naive, seasonal naive, random walk with drift, theta (SES on
seasonally adjusted data plus half the linear-trend slope), mean, and an
AIC-selected least-squares AR. The bank order is canonical and breaks
selection ties.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter
from statsmodels.tsa.seasonal import STL

from ..arfit import fit_ar, select_ar_order
from ..errors import TooShort, ZeroScale
from ..mar import TimeSeries

METHOD_ORDER = ("naive", "snaive", "rw_drift", "theta", "mean", "ar")

DEFAULT_HORIZONS = {1: 6, 4: 8, 12: 18}


def horizon_for_period(period: int, horizons: dict = None) -> int:
    table = DEFAULT_HORIZONS if horizons is None else horizons
    if period in table:
        return table[period]
    return max(2, period // 4)


def _naive(x: np.ndarray, h: int) -> np.ndarray:
    return np.full(h, x[-1])


def _snaive(x: np.ndarray, h: int, period: int) -> np.ndarray:
    if period <= 1 or len(x) < period:
        return _naive(x, h)
    cycle = x[-period:]
    reps = int(np.ceil(h / period))
    return np.tile(cycle, reps)[:h]


def _rw_drift(x: np.ndarray, h: int) -> np.ndarray:
    drift = (x[-1] - x[0]) / (len(x) - 1)
    return x[-1] + drift * np.arange(1, h + 1)


def _mean(x: np.ndarray, h: int) -> np.ndarray:
    return np.full(h, float(x.mean()))


def _ar(x: np.ndarray, h: int) -> np.ndarray:
    max_order = int(min(10, len(x) // 5))
    order = select_ar_order(x, max_order)
    if order == 0:
        return _mean(x, h)
    intercept, coeffs, _ = fit_ar(x, order)
    history = list(x[-order:])
    out = np.empty(h)
    for j in range(h):
        nxt = intercept + float(
            np.dot(coeffs, history[-1 : -order - 1 : -1] if order > 1 else [history[-1]])
        )
        out[j] = nxt
        history.append(nxt)
    return out


def _ses_level(x: np.ndarray, alpha: float) -> float:
    """Final level of simple exponential smoothing initialized at x[0]."""
    if len(x) == 1:
        return float(x[0])
    levels = lfilter([alpha], [1.0, -(1.0 - alpha)], x[1:], zi=np.array([(1.0 - alpha) * x[0]]))[0]
    return float(levels[-1])


def _ses_sse(x: np.ndarray, alpha: float) -> float:
    if len(x) < 2:
        return 0.0
    levels = lfilter([alpha], [1.0, -(1.0 - alpha)], x[1:], zi=np.array([(1.0 - alpha) * x[0]]))[0]
    preds = np.concatenate(([x[0]], levels[:-1]))
    err = x[1:] - preds
    return float(err @ err)


def _theta(x: np.ndarray, h: int, period: int) -> np.ndarray:
    seasonal = None
    if period > 1 and len(x) >= 2 * period + 4:
        res = STL(x, period=period, seasonal=21).fit()
        seasonal = np.asarray(res.seasonal)
        work = x - seasonal
    else:
        work = x
    alphas = np.linspace(0.01, 0.99, 99)
    best_alpha = min(alphas, key=lambda a: _ses_sse(work, a))
    level = _ses_level(work, best_alpha)
    t = np.arange(len(work), dtype=float)
    slope = float(np.polyfit(t, work, 1)[0]) if len(work) > 1 else 0.0
    out = level + 0.5 * slope * np.arange(1, h + 1)
    if seasonal is not None:
        cycle = seasonal[-period:]
        reps = int(np.ceil(h / period))
        out = out + np.tile(cycle, reps)[:h]
    return out


_DISPATCH = {
    "naive": lambda x, h, m: _naive(x, h),
    "snaive": lambda x, h, m: _snaive(x, h, m),
    "rw_drift": lambda x, h, m: _rw_drift(x, h),
    "theta": lambda x, h, m: _theta(x, h, m),
    "mean": lambda x, h, m: _mean(x, h),
    "ar": lambda x, h, m: _ar(x, h),
}


def forecast(method: str, train: TimeSeries, h: int) -> np.ndarray:
    """h-step point forecast from the named method."""
    if method not in _DISPATCH:
        raise ValueError(f"unknown method {method!r}; valid: {METHOD_ORDER}")
    if h < 1:
        raise ValueError("h must be >= 1")
    x = train.values
    if len(x) < 3:
        raise TooShort(f"forecasting needs at least 3 observations, got {len(x)}")
    return _DISPATCH[method](x, h, train.period)


def mase(actuals, forecasts, insample: TimeSeries) -> float:
    """Mean absolute error scaled by the in-sample seasonal-naive MAE.

    The scaling lag is the series period (1 when non-seasonal).
    """
    actuals = np.asarray(actuals, dtype=float)
    forecasts = np.asarray(forecasts, dtype=float)
    if actuals.shape != forecasts.shape:
        raise ValueError("actuals and forecasts must align")
    y = insample.values
    m = insample.period if insample.period > 1 else 1
    if len(y) <= m:
        raise TooShort("in-sample series must be longer than the scaling lag")
    denom = float(np.mean(np.abs(y[m:] - y[:-m])))
    if denom == 0.0:
        raise ZeroScale("in-sample seasonal-naive MAE is zero")
    return float(np.mean(np.abs(actuals - forecasts)) / denom)
