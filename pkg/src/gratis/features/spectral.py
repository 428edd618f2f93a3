"""Spectral entropy and long-memory (Hurst) features."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import TooShort
from ._util import standardize

# Small uniform blend keeps the density strictly positive so the entropy is
# finite and the result lies in (0, 1].
_PRIOR_WEIGHT = 1e-3


def _burg(x: np.ndarray, order: int):
    """Burg AR coefficients and innovation variances for orders 0..order."""
    n = len(x)
    ef = x.astype(float).copy()
    eb = ef.copy()
    a = np.array([1.0])
    var = float(x @ x) / n
    variances = [var]
    coeffs = [np.array([])]
    for _ in range(order):
        f = ef[1:]
        b = eb[:-1]
        den = float(f @ f + b @ b)
        if den <= 0 or len(f) < 1:
            break
        rc = -2.0 * float(f @ b) / den
        a = np.concatenate((a, [0.0]))
        a = a + rc * a[::-1]
        ef = f + rc * b
        eb = b + rc * f
        var = var * (1.0 - rc * rc)
        variances.append(var)
        coeffs.append(-a[1:].copy())
    return coeffs, variances


def spectral_entropy(x: np.ndarray) -> float:
    """Normalized Shannon entropy of an AR-based spectral density estimate.

    The AR order is chosen by AIC (Burg recursion). Low values mean the
    spectrum is concentrated (forecastable series); white noise approaches 1.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 16:
        raise TooShort(f"spectral entropy needs length >= 16, got {n}")
    z = standardize(x)
    order_max = int(min(n - 2, round(10 * np.log10(n))))
    coeffs, variances = _burg(z, order_max)
    aics = [n * np.log(max(v, 1e-300)) + 2 * p for p, v in enumerate(variances)]
    best = int(np.argmin(aics))
    phi = coeffs[best]

    n_freq = n // 2 + 1
    lam = np.linspace(0.0, np.pi, n_freq)
    if len(phi):
        ks = np.arange(1, len(phi) + 1)
        transfer = 1.0 - np.exp(-1j * np.outer(lam, ks)) @ phi.astype(complex)
        dens = 1.0 / np.maximum(np.abs(transfer) ** 2, 1e-300)
    else:
        dens = np.ones(n_freq)
    p = dens / dens.sum()
    p = (1.0 - _PRIOR_WEIGHT) * p + _PRIOR_WEIGHT / len(p)
    ent = float(-(p @ np.log(p)) / np.log(len(p)))
    return min(ent, 1.0)


def hurst(x: np.ndarray) -> float:
    """Long-memory coefficient: 0.5 plus the Whittle estimate of the
    fractional differencing order of an ARFIMA(0, d, 0) fit, clamped to
    [0.5, 1]."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 32:
        raise TooShort(f"hurst needs length >= 32, got {n}")
    xc = x - x.mean()
    m = (n - 1) // 2
    fft = np.fft.rfft(xc)
    periodogram = (np.abs(fft[1 : m + 1]) ** 2) / n
    lam = 2.0 * np.pi * np.arange(1, m + 1) / n
    log_gain = np.log(2.0 * np.sin(lam / 2.0))
    mean_log_gain = log_gain.mean()

    def whittle(d: float) -> float:
        scaled = periodogram * np.exp(2.0 * d * log_gain)
        return np.log(max(scaled.mean(), 1e-300)) - 2.0 * d * mean_log_gain

    res = minimize_scalar(whittle, bounds=(0.0, 0.5), method="bounded")
    d_hat = float(np.clip(res.x, 0.0, 0.5))
    return 0.5 + d_hat
