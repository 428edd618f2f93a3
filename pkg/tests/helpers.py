"""Shared test oracles: independently-coded references used by both the
module tests and the acceptance suite."""

import numpy as np
import statsmodels.api as sm
from scipy.optimize import linprog


def validation_series():
    """Deterministic 50-series validation set spanning the relevant shapes."""
    rng = np.random.default_rng(20260808)
    out = []
    for i in range(10):
        out.append(rng.normal(0, 1 + i / 10, 120 + 10 * i))  # white noise
    for i in range(10):
        out.append(np.cumsum(rng.normal(0, 1, 150 + 5 * i)))  # random walks
    for i in range(10):
        n = 140 + 6 * i
        t = np.arange(n)
        out.append(0.05 * t + rng.normal(0, 1, n))  # trend stationary
    for i in range(10):
        n = 144
        t = np.arange(n)
        x = np.sin(2 * np.pi * t / 12) * (1 + i / 5) + rng.normal(0, 0.5, n)
        out.append(x)  # seasonal
    for i in range(10):
        n = 200
        x = np.empty(n)
        x[0] = 0.0
        phi = 0.3 + 0.06 * i
        eps = rng.normal(0, 1, n)
        for t in range(1, n):
            x[t] = phi * x[t - 1] + eps[t]
        out.append(x)  # AR(1)
    assert len(out) == 50
    return out


def pp_zalpha_oracle(x, lags=1):
    """Independent Z-alpha implementation on statsmodels OLS."""
    x = np.asarray(x, dtype=float)
    y = x[1:]
    design = sm.add_constant(x[:-1])
    res = sm.OLS(y, design).fit()
    u = res.resid
    n = len(y)
    s2 = float(u @ u) / (n - 2)
    gamma0 = float(u @ u) / n
    lam2 = gamma0
    for j in range(1, lags + 1):
        lam2 += 2.0 * (1.0 - j / (lags + 1.0)) * float(u[j:] @ u[:-j]) / n
    rho = float(res.params[1])
    se2 = float(res.bse[1]) ** 2
    return n * (rho - 1.0) - 0.5 * (n**2 * se2 / s2) * (lam2 - gamma0)


def ocsb_oracle(x, period, aug_lags=3):
    """Independent OCSB regression built on statsmodels OLS."""
    x = np.asarray(x, dtype=float)
    m = period
    n = len(x)
    sdiff = x[m:] - x[:-m]
    fdiff = np.diff(x)
    y_full = np.diff(sdiff)

    def y_val(t):
        return y_full[t - m - 1]

    t0 = m + 1 + aug_lags
    rows = np.arange(t0, n)
    target = np.array([y_val(t) for t in rows])
    cols = []
    for j in range(1, aug_lags + 1):
        cols.append([y_val(t - j) for t in rows])
    cols.append([sdiff[t - 1 - m] for t in rows])
    cols.append([fdiff[t - m - 1] for t in rows])
    design = sm.add_constant(np.column_stack(cols))
    res = sm.OLS(target, design).fit()
    return float(res.tvalues[-1])


def quantile_lp_oracle(X, y, tau, lam_weights):
    """Dense LP with an epigraph encoding: variables [a, b, u, v, t],
    t_j >= |b_j|. Returns the optimal objective."""
    n, p = X.shape
    c = np.concatenate(
        ([0.0], np.zeros(p), np.full(n, tau), np.full(n, 1 - tau), lam_weights)
    )
    A_eq = np.hstack((np.ones((n, 1)), X, np.eye(n), -np.eye(n), np.zeros((n, p))))
    upper = np.hstack((np.zeros((p, 1)), np.eye(p), np.zeros((p, 2 * n)), -np.eye(p)))
    lower = np.hstack((np.zeros((p, 1)), -np.eye(p), np.zeros((p, 2 * n)), -np.eye(p)))
    A_ub = np.vstack((upper, lower))
    bounds = [(None, None)] * (1 + p) + [(0, None)] * (2 * n) + [(0, None)] * p
    res = linprog(
        c,
        A_eq=A_eq,
        b_eq=y,
        A_ub=A_ub,
        b_ub=np.zeros(2 * p),
        bounds=bounds,
        method="highs",
    )
    assert res.success, res.message
    return float(res.fun)


def simulate_garch(n, omega, alpha, beta, seed):
    rng = np.random.default_rng(seed)
    x = np.empty(n)
    sig2 = omega / (1 - alpha - beta)
    for t in range(n):
        eps = rng.normal()
        x[t] = np.sqrt(sig2) * eps
        sig2 = omega + alpha * x[t] ** 2 + beta * sig2
    return x
