"""Heterogeneity features: ARCH/GARCH effects on the pre-whitened series.

The series is pre-whitened (demean, linear detrend, AIC-selected AR filter)
so the conditional-variance statistics are not contaminated by mean or
autoregressive structure. A Gaussian GARCH(1,1) quasi-likelihood fit then
yields standardized residuals; the ARCH statistics come from the squared
pre-whitened series and the GARCH statistics from the squared residuals.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from ..arfit import fit_ar, select_ar_order
from ..errors import GarchFitFailed, TooShort
from ._util import acf, standardize

_GARCH_STARTS = ((0.05, 0.90), (0.10, 0.80), (0.20, 0.50))
_STATIONARITY_CAP = 0.999
_N_LAGS = 12


def prewhiten(x: np.ndarray) -> np.ndarray:
    """Remove mean, linear trend, and AR structure; standardize the result.

    The standardized residuals are snapped to a 1e-6 grid: affine rescalings
    of the input leave only ~1e-14 floating-point noise after
    detrending/standardizing, and quantizing it away keeps the GARCH fit
    (whose likelihood ridge is otherwise path-sensitive) bit-reproducible.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    t = np.arange(n, dtype=float)
    design = np.column_stack((np.ones(n), t))
    beta, *_ = np.linalg.lstsq(design, x, rcond=None)
    detrended = x - design @ beta
    max_order = int(min(10, n // 10))
    order = select_ar_order(detrended, max_order)
    _, _, resid = fit_ar(detrended, order)
    return np.round(standardize(resid), 6)


def _garch_neg_loglik(params, x2, init_var):
    omega, alpha, beta = params
    if omega <= 0 or alpha < 0 or beta < 0 or alpha + beta > _STATIONARITY_CAP:
        return 1e12 + 1e12 * max(0.0, alpha + beta - _STATIONARITY_CAP)
    n = len(x2)
    sig2 = np.empty(n)
    sig2[0] = init_var
    # sig2_t = omega + alpha x2_{t-1} + beta sig2_{t-1}, vectorized recursion
    drive = omega + alpha * x2[:-1]
    acc = init_var
    sig2[1:] = lfilter([1.0], [1.0, -beta], drive, zi=np.array([beta * acc]))[0]
    if np.any(sig2 <= 0) or not np.all(np.isfinite(sig2)):
        return 1e12
    return 0.5 * float(np.sum(np.log(sig2) + x2 / sig2))


def _grid_candidates(x2: np.ndarray, v: float):
    """Objective over a variance-targeted (alpha, beta) grid.

    omega is pinned at v(1 - alpha - beta) so every grid point matches the
    sample variance; the coarse grid makes the basin choice deterministic
    under tiny input perturbations, unlike a line-search path.
    """
    cands = []
    for alpha in np.arange(0.0, 0.96, 0.05):
        for beta in np.arange(0.0, 0.96, 0.05):
            if alpha + beta > 0.99:
                continue
            omega = max(v * (1.0 - alpha - beta), 1e-8 * v)
            f = _garch_neg_loglik((omega, alpha, beta), x2, v)
            cands.append((f, omega, float(alpha), float(beta)))
    cands.sort()
    return cands


def fit_garch11(x: np.ndarray) -> dict:
    """Gaussian QMLE of a GARCH(1,1): sigma2_t = omega + alpha x_{t-1}^2 +
    beta sigma2_{t-1}.

    A derivative-free two-stage search: a variance-targeted grid picks the
    basin, then a bounded simplex polish from the three best grid cells pins
    the optimum (constraint penalties in the objective keep iterates inside
    the feasible region)."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    v = float(x2.mean())
    if v <= 0 or not np.isfinite(v):
        raise GarchFitFailed("degenerate variance")
    cands = [c for c in _grid_candidates(x2, v) if np.isfinite(c[0]) and c[0] < 1e11]
    if not cands:
        raise GarchFitFailed("no feasible grid start")
    best = None
    for f0, omega, alpha, beta in cands[:3]:
        res = minimize(
            _garch_neg_loglik,
            np.array([omega, alpha, beta]),
            args=(x2, v),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
        )
        if np.isfinite(res.fun) and res.fun < 1e11 and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise GarchFitFailed("all optimizer starts failed")
    omega, alpha, beta = best.x
    sig2 = np.empty(len(x2))
    sig2[0] = v
    sig2[1:] = lfilter(
        [1.0], [1.0, -beta], omega + alpha * x2[:-1], zi=np.array([beta * v])
    )[0]
    resid = x / np.sqrt(np.maximum(sig2, 1e-300))
    return {"omega": float(omega), "alpha": float(alpha), "beta": float(beta),
            "residuals": resid, "neg_loglik": float(best.fun)}


def _arch_r2(x: np.ndarray, lags: int = _N_LAGS) -> float:
    """R^2 of regressing x_t^2 on an intercept and its first ``lags`` lags."""
    x2 = x * x
    y = x2[lags:]
    cols = [np.ones(len(y))]
    for j in range(1, lags + 1):
        cols.append(x2[lags - j : len(x2) - j])
    design = np.column_stack(cols)
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    tss = float(((y - y.mean()) ** 2).sum())
    if tss <= 0:
        return 0.0
    return float(np.clip(1.0 - float(resid @ resid) / tss, 0.0, 1.0))


def heterogeneity_features(x: np.ndarray) -> dict:
    """arch.acf, garch.acf, arch.r2, garch.r2 (F23-F26).

    On GARCH fit failure the four entries are zeroed and flagged.
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 50:
        raise TooShort(f"heterogeneity needs length >= 50, got {len(x)}")
    white = prewhiten(x)
    r = acf(white * white, _N_LAGS)
    out = {
        "arch.acf": float(r @ r),
        "arch.r2": _arch_r2(white),
        "garch.acf": 0.0,
        "garch.r2": 0.0,
        "garch_failed": False,
    }
    try:
        fit = fit_garch11(white)
    except GarchFitFailed:
        out["garch_failed"] = True
        return out
    z = fit["residuals"]
    rz = acf(z * z, _N_LAGS)
    out["garch.acf"] = float(rz @ rz)
    out["garch.r2"] = _arch_r2(z)
    return out
