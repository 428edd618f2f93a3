"""Stationarity and unit-root statistics: KPSS, Phillips-Perron Z-alpha,
and the OCSB seasonal unit-root regression, plus the difference-order
features derived from them.

Critical values are embedded constants from the published tables of the
respective tests (5% level throughout).
"""

from __future__ import annotations

import numpy as np

from ..errors import TooShort

# Published 5% critical values for the KPSS statistic.
KPSS_LEVEL_CRIT_5PCT = 0.463
KPSS_TREND_CRIT_5PCT = 0.146


def _bartlett_lrv(e: np.ndarray, lags: int) -> float:
    """Newey-West long-run variance with Bartlett weights."""
    n = len(e)
    lrv = float(e @ e) / n
    for j in range(1, lags + 1):
        gamma = float(e[j:] @ e[:-j]) / n
        lrv += 2.0 * (1.0 - j / (lags + 1.0)) * gamma
    return lrv


def kpss_stat(x: np.ndarray, trend: str = "c", lags: int = 1) -> float:
    """KPSS statistic for level ("c") or linear-trend ("ct") stationarity."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 12:
        raise TooShort(f"kpss needs length >= 12, got {n}")
    if trend == "c":
        e = x - x.mean()
    elif trend == "ct":
        design = np.column_stack((np.ones(n), np.arange(1.0, n + 1)))
        beta, *_ = np.linalg.lstsq(design, x, rcond=None)
        e = x - design @ beta
    else:
        raise ValueError(f"trend must be 'c' or 'ct', got {trend!r}")
    s = np.cumsum(e)
    eta = float(s @ s) / n**2
    lrv = _bartlett_lrv(e, lags)
    if lrv <= 0:
        return 0.0
    return eta / lrv


def pp_zalpha(x: np.ndarray, lags: int = 1) -> float:
    """Z-alpha form of the Phillips-Perron statistic (constant trend).

    From the regression x_t = c + rho * x_{t-1} + u_t:
    Z = n(rho - 1) - (n^2 se_rho^2 / s^2)(lambda^2 - gamma_0) / 2,
    with lambda^2 the Bartlett long-run variance of the residuals.
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 12:
        raise TooShort(f"pp needs length >= 12, got {len(x)}")
    y = x[1:]
    design = np.column_stack((np.ones(len(y)), x[:-1]))
    n = len(y)
    xtx_inv = np.linalg.inv(design.T @ design)
    beta = xtx_inv @ design.T @ y
    u = y - design @ beta
    rho = float(beta[1])
    s2 = float(u @ u) / (n - 2)
    gamma0 = float(u @ u) / n
    lam2 = _bartlett_lrv(u, lags)
    se_rho2 = s2 * float(xtx_inv[1, 1])
    return n * (rho - 1.0) - 0.5 * (n**2 * se_rho2 / s2) * (lam2 - gamma0)


def unit_root_stats(x: np.ndarray) -> dict:
    """F13: KPSS with linear trend and lag one, and PP Z-alpha with constant
    trend and lag one."""
    return {
        "unitroot.kpss": float(kpss_stat(x, trend="ct", lags=1)),
        "unitroot.pp": float(pp_zalpha(x, lags=1)),
    }


def _kpss_auto_lag(n: int) -> int:
    """Short truncation-lag rule l4 = floor(4 (n/100)^(1/4))."""
    return int(np.floor(4.0 * (n / 100.0) ** 0.25))


def ndiffs(x: np.ndarray) -> int:
    """Smallest d in {0, 1, 2} whose d-times differenced series passes the
    level-stationarity KPSS test at the 5% level; 2 if none pass."""
    x = np.asarray(x, dtype=float)
    if len(x) < 12:
        raise TooShort(f"ndiffs needs length >= 12, got {len(x)}")
    current = x
    for d in range(3):
        if len(current) < 12:
            return d  # too short to keep testing; accept the current order
        if np.ptp(current) == 0.0:
            return d
        stat = kpss_stat(current, trend="c", lags=_kpss_auto_lag(len(current)))
        if stat <= KPSS_LEVEL_CRIT_5PCT:
            return d
        current = np.diff(current)
    return 2


def ocsb_crit(period: int) -> float:
    """Approximate published 5% critical value for the OCSB t-statistic as a
    smooth function of the seasonal period."""
    log_m = np.log(period)
    z = log_m - 0.7656451
    return float(-0.2937411 * np.exp(-0.2850853 * z - 0.05983644 * z**2) - 1.652202)


def ocsb_stat(x: np.ndarray, period: int, aug_lags: int = 3) -> float:
    """t-statistic of the seasonal-lag regressor in the OCSB regression.

    With y = diff(diff(x, period)), z4 = diff(x, period), z5 = diff(x), fit
    y_t ~ const + y_{t-1..t-L} + z4_{t-1} + z5_{t-period}
    and return the t-ratio of the z5 coefficient. Values above the (negative)
    critical value indicate that a seasonal difference is required.
    """
    x = np.asarray(x, dtype=float)
    m = period
    if m < 2:
        raise ValueError("OCSB requires a seasonal period > 1")
    z4 = x[m:] - x[:-m]  # z4[i] = x_{i+m} - x_i, i.e. seasonal difference at t=i+m
    z5 = x[1:] - x[:-1]  # first difference at t=i+1
    y = np.diff(z4)  # y[j] corresponds to t = j + m + 1 (0-based)

    # Row t (0-based index into x) runs over all t with full history available.
    t_min = max(m + 1 + aug_lags, m + 1, 1 + m)
    rows = range(t_min, len(x))
    if len(x) - t_min < aug_lags + 4:
        raise TooShort("not enough observations for the OCSB regression")

    def y_at(t):
        return y[t - m - 1]

    design = []
    target = []
    for t in rows:
        row = [1.0]
        row.extend(y_at(t - j) for j in range(1, aug_lags + 1))
        row.append(z4[t - 1 - m])  # z4 value at time t-1
        row.append(z5[t - m - 1])  # z5 value at time t-m
        design.append(row)
        target.append(y_at(t))
    design = np.asarray(design)
    target = np.asarray(target)

    nrow, ncol = design.shape
    xtx_inv = np.linalg.pinv(design.T @ design)
    beta = xtx_inv @ design.T @ target
    resid = target - design @ beta
    dof = max(nrow - ncol, 1)
    s2 = float(resid @ resid) / dof
    se = np.sqrt(max(s2 * float(xtx_inv[-1, -1]), 1e-300))
    return float(beta[-1] / se)


def nsdiffs(x: np.ndarray, period: int) -> int:
    """0 or 1 seasonal difference at the largest period, decided by the OCSB
    test at the 5% level. Non-seasonal or too-short input returns 0."""
    x = np.asarray(x, dtype=float)
    if period <= 1 or len(x) < 2 * period + 8:
        return 0
    if np.ptp(x) == 0.0:
        return 0
    try:
        stat = ocsb_stat(x, period)
    except TooShort:
        return 0
    return int(stat > ocsb_crit(period))
