"""Shared numeric helpers for feature computations."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateSeries


def standardize(x: np.ndarray) -> np.ndarray:
    """Center and scale to unit sample standard deviation."""
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        raise DegenerateSeries("need at least 2 observations")
    sd = np.std(x, ddof=1)
    if sd == 0 or not np.isfinite(sd):
        raise DegenerateSeries("zero-variance series")
    return (x - x.mean()) / sd


def acf(x: np.ndarray, nlags: int) -> np.ndarray:
    """Autocorrelations r_1..r_nlags with the biased (divide-by-n) estimator.

    The biased estimator keeps the autocovariance sequence positive
    semidefinite, which bounds downstream partial autocorrelations.
    Zero-variance input yields zeros.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    xc = x - x.mean()
    denom = xc @ xc
    if denom <= 0 or not np.isfinite(denom):
        return np.zeros(nlags)
    out = np.empty(nlags)
    for k in range(1, nlags + 1):
        out[k - 1] = (xc[k:] @ xc[:-k]) / denom if k < n else 0.0
    return out


def pacf(x: np.ndarray, nlags: int) -> np.ndarray:
    """Partial autocorrelations phi_11..phi_kk via Durbin-Levinson."""
    r = acf(x, nlags)
    out = np.zeros(nlags)
    if nlags == 0:
        return out
    phi = np.zeros((nlags + 1, nlags + 1))
    phi[1, 1] = r[0]
    out[0] = r[0]
    for k in range(2, nlags + 1):
        num = r[k - 1] - sum(phi[k - 1, j] * r[k - j - 1] for j in range(1, k))
        den = 1.0 - sum(phi[k - 1, j] * r[j - 1] for j in range(1, k))
        if abs(den) < 1e-14:
            break
        phi[k, k] = num / den
        for j in range(1, k):
            phi[k, j] = phi[k - 1, j] - phi[k, k] * phi[k - 1, k - j]
        out[k - 1] = phi[k, k]
    return np.clip(out, -1.0 + 1e-12, 1.0 - 1e-12)


def ols_residuals(y: np.ndarray, X: np.ndarray) -> np.ndarray:
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return y - X @ beta
