"""Mixture autoregressive (MAR) models: definition, moments, simulation.

A MAR model is a finite mixture of K Gaussian AR components. At each time
step one component is drawn according to the mixture weights and emits the
next value through its (possibly seasonal, possibly differenced) AR
recursion. Seasonal AR components with d ordinary and D seasonal differences
are expanded to a pure AR lag polynomial before use, so simulation and
moment computations only ever see plain AR coefficient vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import InsufficientHistory, NonFiniteSample
from .rng import stream

# Simulated values beyond this magnitude abort the path as explosive.
MAGNITUDE_CAP = 1e30


@dataclass(frozen=True)
class SeasonalARComponent:
    """One mixture component: a seasonal AR model with unit-root factors.

    The component is ARIMA(p, d, 0)(P, D, 0)_period without moving-average
    terms; ``ar_coeffs`` holds the ordinary AR coefficients, and
    ``seasonal_ar_coeffs`` the seasonal ones at multiples of ``period``.
    """

    ar_coeffs: tuple = ()
    seasonal_ar_coeffs: tuple = ()
    d: int = 0
    D: int = 0
    period: int = 1
    intercept: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ar_coeffs", tuple(float(c) for c in self.ar_coeffs))
        object.__setattr__(
            self, "seasonal_ar_coeffs", tuple(float(c) for c in self.seasonal_ar_coeffs)
        )
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        if self.period == 1 and (self.seasonal_ar_coeffs or self.D):
            raise ValueError("period-1 components cannot carry seasonal terms")
        if not (0 <= self.d <= 2):
            raise ValueError(f"d must be in {{0,1,2}}, got {self.d}")
        if not (0 <= self.D <= 1):
            raise ValueError(f"D must be in {{0,1}}, got {self.D}")


@dataclass(frozen=True)
class MARModel:
    """K weighted seasonal-AR components sharing one seasonal period."""

    components: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not 1 <= len(self.components) <= 5:
            raise ValueError(f"K must be in 1..5, got {len(self.components)}")
        if len(self.weights) != len(self.components):
            raise ValueError("weights and components must have equal length")
        if any(w <= 0 for w in self.weights):
            raise ValueError("all weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {sum(self.weights)}")
        periods = {c.period for c in self.components}
        if len(periods) > 1:
            raise ValueError(f"components must share one period, got {periods}")

    @property
    def period(self) -> int:
        return self.components[0].period

    def expanded(self) -> list:
        """Full AR coefficient vectors for every component."""
        return [expand_component_to_ar(c) for c in self.components]

    def max_lag(self) -> int:
        return max(len(a) for a in self.expanded())


@dataclass(frozen=True)
class TimeSeries:
    """Observed values plus seasonal period metadata."""

    values: np.ndarray
    periods: tuple = (1,)
    origin_meta: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "periods", tuple(int(p) for p in self.periods))
        if vals.ndim != 1 or len(vals) < 1:
            raise ValueError("values must be a nonempty 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if not self.periods:
            raise ValueError("periods must be nonempty")
        if self.periods[0] < 1:
            raise ValueError("periods must be >= 1")
        if list(self.periods) != sorted(self.periods):
            raise ValueError("periods must be sorted ascending")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def period(self) -> int:
        """Largest seasonal period (the one used for seasonal statistics)."""
        return self.periods[-1]


def expand_component_to_ar(c: SeasonalARComponent) -> np.ndarray:
    """Expand a seasonal/differenced component to plain AR coefficients.

    Multiplies the lag polynomials
    (1 - sum theta_i B^i)(1 - sum Theta_j B^(j*period))(1 - B)^d (1 - B^period)^D
    and returns ``a`` such that x_t = intercept + sum a_i x_{t-i} + sigma e_t.
    The result has length p + P*period + d + D*period.
    """
    poly = np.array([1.0])
    if c.ar_coeffs:
        ar = np.zeros(len(c.ar_coeffs) + 1)
        ar[0] = 1.0
        ar[1:] = [-t for t in c.ar_coeffs]
        poly = np.convolve(poly, ar)
    if c.seasonal_ar_coeffs:
        sar = np.zeros(len(c.seasonal_ar_coeffs) * c.period + 1)
        sar[0] = 1.0
        for j, t in enumerate(c.seasonal_ar_coeffs, start=1):
            sar[j * c.period] = -t
        poly = np.convolve(poly, sar)
    for _ in range(c.d):
        poly = np.convolve(poly, np.array([1.0, -1.0]))
    if c.D:
        sdiff = np.zeros(c.period + 1)
        sdiff[0] = 1.0
        sdiff[-1] = -1.0
        poly = np.convolve(poly, sdiff)
    return -poly[1:]


def _component_means(m: MARModel, history: Sequence[float]) -> np.ndarray:
    """Conditional mean of each component given the most recent history.

    ``history`` is ordered oldest to newest; the last entry is x_{t-1}.
    """
    hist = np.asarray(history, dtype=float)
    expansions = m.expanded()
    need = max(len(a) for a in expansions)
    if len(hist) < need:
        raise InsufficientHistory(
            f"history of length {len(hist)} but the largest AR lag is {need}"
        )
    rev = hist[::-1]  # rev[i-1] = x_{t-i}
    mus = np.empty(len(expansions))
    for k, (comp, a) in enumerate(zip(m.components, expansions)):
        mus[k] = comp.intercept + (a @ rev[: len(a)] if len(a) else 0.0)
    return mus


def conditional_moments(m: MARModel, history: Sequence[float]) -> tuple:
    """One-step conditional mean and variance of the mixture."""
    mus = _component_means(m, history)
    w = np.asarray(m.weights)
    sig2 = np.array([c.sigma**2 for c in m.components])
    mean = float(w @ mus)
    variance = float(w @ sig2 + w @ mus**2 - mean**2)
    return mean, variance


def _gaussian_central_moment(order: int, sigma: float) -> float:
    """E[Z^order] for Z ~ N(0, sigma^2): zero for odd order, else sigma^i (i-1)!!."""
    if order % 2 == 1:
        return 0.0
    double_fact = 1.0
    for j in range(order - 1, 0, -2):
        double_fact *= j
    return sigma**order * double_fact


def conditional_central_moment(m: MARModel, history: Sequence[float], order: int) -> float:
    """m-th central moment of the one-step conditional mixture distribution.

    Uses the exact mixture identity
    E[(x - mu)^m] = sum_k alpha_k sum_i C(m, i) E_k[(x - mu_k)^i] (mu_k - mu)^(m-i)
    with closed-form Gaussian component moments.
    """
    if not 1 <= order <= 6:
        raise ValueError(f"order must be in 1..6, got {order}")
    mus = _component_means(m, history)
    w = np.asarray(m.weights)
    mu = float(w @ mus)
    total = 0.0
    for k, comp in enumerate(m.components):
        delta = mus[k] - mu
        inner = 0.0
        for i in range(order + 1):
            inner += (
                math.comb(order, i)
                * _gaussian_central_moment(i, comp.sigma)
                * delta ** (order - i)
            )
        total += w[k] * inner
    return float(total)


def one_step_draws(
    m: MARModel, history: Sequence[float], size: int, seed: int
) -> np.ndarray:
    """Draw ``size`` independent one-step-ahead samples given the history."""
    mus = _component_means(m, history)
    sigmas = np.array([c.sigma for c in m.components])
    rng = stream(seed)
    cumw = np.cumsum(m.weights)
    ks = np.searchsorted(cumw, rng.random(size), side="left")
    eps = rng.standard_normal(size)
    return mus[ks] + sigmas[ks] * eps


def simulate_mar(
    m: MARModel, n: int, burn_in: int = 0, seed: int = 0
) -> TimeSeries:
    """Simulate a MAR sample path and return the last ``n`` values.

    All lagged values before the first step are 0; the burn-in washes the
    initialization out. At each step a component index is drawn by one
    uniform variate against the cumulative weights (ties to the lower
    index), then x_t = mu_{k,t} + sigma_k * eps_t.

    Raises NonFiniteSample when |x_t| exceeds MAGNITUDE_CAP, which callers
    treat as an explosive parameter draw and retry with a fresh model.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")

    expansions = m.expanded()
    max_lag = max(len(a) for a in expansions)
    total = burn_in + n
    rng = stream(seed)
    cumw = np.cumsum(m.weights)
    us = rng.random(total)
    eps = rng.standard_normal(total)
    sigmas = np.array([c.sigma for c in m.components])
    intercepts = np.array([c.intercept for c in m.components])

    if len(m.components) == 1:
        # Single component: the recursion is a linear filter of the shocks.
        a = expansions[0]
        shocks = intercepts[0] + sigmas[0] * eps
        denom = np.concatenate(([1.0], -a))
        with np.errstate(over="ignore", invalid="ignore"):
            x = lfilter([1.0], denom, shocks)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > MAGNITUDE_CAP:
            raise NonFiniteSample("simulated path exploded")
    else:
        ks = np.searchsorted(cumw, us, side="left")
        buf = np.zeros(max_lag + total)
        for t in range(total):
            k = ks[t]
            a = expansions[k]
            pos = max_lag + t
            window = buf[pos - len(a) : pos][::-1] if len(a) else ()
            mu = intercepts[k] + (a @ window if len(a) else 0.0)
            xt = mu + sigmas[k] * eps[t]
            if not math.isfinite(xt) or abs(xt) > MAGNITUDE_CAP:
                raise NonFiniteSample(f"simulated path exploded at step {t}")
            buf[pos] = xt
        x = buf[max_lag:]

    seed_id = tuple(seed) if isinstance(seed, (tuple, list)) else int(seed)
    return TimeSeries(
        values=x[burn_in:].copy(),
        periods=(m.period,),
        origin_meta={"seed": seed_id, "burn_in": int(burn_in)},
    )
