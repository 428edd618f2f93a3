"""Least-squares AR fitting with AIC order selection.

Shared by the heterogeneity pre-whitening step and the AR forecaster. Orders
are compared on a common effective sample (dropping max_order leading
observations) so the information criteria are comparable; the chosen order is
then re-fit on its own full sample.
"""

from __future__ import annotations

import numpy as np


def _design(x: np.ndarray, order: int, offset: int):
    y = x[offset:]
    cols = [np.ones(len(y))]
    for j in range(1, order + 1):
        cols.append(x[offset - j : len(x) - j])
    return np.column_stack(cols), y


def select_ar_order(x: np.ndarray, max_order: int, min_order: int = 0) -> int:
    """AIC-best AR order in {min_order, ..., max_order}."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    max_order = int(min(max_order, n - 2))
    if max_order < min_order:
        return min_order
    best_order, best_aic = min_order, np.inf
    n_eff = n - max_order
    for p in range(min_order, max_order + 1):
        design, y = _design(x, p, max_order)
        beta, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ beta
        rss = float(resid @ resid)
        aic = n_eff * np.log(max(rss / n_eff, 1e-300)) + 2.0 * (p + 1)
        if aic < best_aic:
            best_order, best_aic = p, aic
    return best_order


def fit_ar(x: np.ndarray, order: int):
    """OLS AR(order) fit: returns (intercept, coefficients, residuals).

    Residuals cover t = order..n-1; order 0 returns the demeaned series.
    """
    x = np.asarray(x, dtype=float)
    if order == 0:
        return float(x.mean()), np.array([]), x - x.mean()
    design, y = _design(x, order, order)
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    return float(beta[0]), beta[1:].copy(), resid
