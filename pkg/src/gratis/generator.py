"""Randomized MAR model sampling and batch series generation.

Models are drawn from configurable parameter distributions: uniform component
count, Dirichlet-style weights from normalized uniforms, Gaussian AR
coefficients, log-normal noise scales, and Bernoulli difference orders.
Multi-seasonal series are built by weighted aggregation of standardized
single-period simulations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateSeries, NonFiniteSample, RetryExhausted
from .mar import MARModel, SeasonalARComponent, TimeSeries, simulate_mar
from .rng import stream, substream_id

# Representative lengths per period, used when no explicit length is given.
DEFAULT_LENGTH_POOLS = {
    1: (20, 30, 40),
    4: (60, 90, 120),
    12: (80, 200, 300),
    52: (350, 900, 1600),
}

MAX_RETRIES = 100


@dataclass(frozen=True)
class GeneratorConfig:
    """Distributional settings for random MAR model sampling."""

    period: int = 1
    length: Optional[int] = None
    length_pool: Optional[tuple] = None
    k_max: int = 5
    coefficient_sd: float = 0.5
    sigma_log_mean: float = 0.1
    sigma_log_sd: float = 0.1
    p_d: float = 0.9
    p_D: float = 0.4
    ar_order_max: int = 2
    seasonal_ar_order_max: int = 1

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be >= 1")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.coefficient_sd <= 0:
            raise ValueError("coefficient_sd must be positive")
        for name in ("p_d", "p_D"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.length is not None and self.length < 1:
            raise ValueError("length must be >= 1")
        if self.length_pool is not None:
            object.__setattr__(self, "length_pool", tuple(int(v) for v in self.length_pool))
            if not self.length_pool or any(v < 1 for v in self.length_pool):
                raise ValueError("length_pool must hold positive lengths")

    def sample_length(self, rng: np.random.Generator) -> int:
        if self.length is not None:
            return self.length
        pool = self.length_pool or DEFAULT_LENGTH_POOLS.get(self.period)
        if pool is None:
            raise ValueError(
                f"no built-in length pool for period {self.period}; "
                "set length or length_pool"
            )
        return int(pool[rng.integers(len(pool))])


@dataclass(frozen=True)
class MultiSeasonalSpec:
    """Aggregation request: one simulated component per seasonal period."""

    periods: tuple
    length: int
    weights: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(p) for p in self.periods))
        if not self.periods or any(p < 1 for p in self.periods):
            raise ValueError("periods must be positive")
        if self.length < max(self.periods):
            raise ValueError("length must be >= the largest period")
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            object.__setattr__(self, "weights", w)
            if len(w) != len(self.periods):
                raise ValueError("weights must match periods in length")
            if any(not 0.0 < v < 1.0 for v in w) and len(w) > 1:
                raise ValueError("weights must lie in (0, 1)")
            if abs(sum(w) - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")


def sample_mar_parameters(cfg: GeneratorConfig, seed) -> MARModel:
    """Draw one random MAR model from the configured distributions."""
    rng = stream(seed)
    k = int(rng.integers(1, cfg.k_max + 1))
    betas = np.clip(rng.random(k), 1e-12, None)
    weights = betas / betas.sum()
    components = []
    for _ in range(k):
        p = int(rng.integers(1, cfg.ar_order_max + 1))
        theta = rng.normal(0.0, cfg.coefficient_sd, p)
        if cfg.period > 1:
            big_p = int(rng.integers(0, cfg.seasonal_ar_order_max + 1))
            big_theta = rng.normal(0.0, cfg.coefficient_sd, big_p)
            d_seas = int(rng.random() < cfg.p_D)
        else:
            big_theta = np.array([])
            d_seas = 0
        d = int(rng.random() < cfg.p_d)
        sigma = float(rng.lognormal(cfg.sigma_log_mean, cfg.sigma_log_sd))
        components.append(
            SeasonalARComponent(
                ar_coeffs=tuple(theta),
                seasonal_ar_coeffs=tuple(big_theta),
                d=d,
                D=d_seas,
                period=cfg.period,
                intercept=0.0,
                sigma=sigma,
            )
        )
    return MARModel(components=tuple(components), weights=tuple(weights))


def _generate_one(cfg: GeneratorConfig, seed, index: int) -> TimeSeries:
    """Generate series ``index`` of a batch, resampling explosive models."""
    length = cfg.sample_length(stream(seed, index, 0))
    burn_in = cfg.period * 10
    for attempt in range(MAX_RETRIES):
        model = sample_mar_parameters(cfg, substream_id(seed, index, 1, attempt))
        try:
            ts = simulate_mar(model, length, burn_in, substream_id(seed, index, 2, attempt))
        except NonFiniteSample:
            continue
        meta = {
            "seed": substream_id(seed, index),
            "index": index,
            "attempt": attempt,
            "model": model,
        }
        return TimeSeries(values=ts.values, periods=(cfg.period,), origin_meta=meta)
    raise RetryExhausted(
        f"{MAX_RETRIES} consecutive explosive draws for config {cfg}"
    )


def generate_batch(
    cfg: GeneratorConfig, count: int, seed, workers: int = 1
) -> list:
    """Generate ``count`` independent series, each from a fresh random model.

    Items derive child RNG streams from (seed, index), so the result is
    identical for any worker count.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: _generate_one(cfg, seed, i), range(count)))
    return [_generate_one(cfg, seed, i) for i in range(count)]


def standardize_series(ts: TimeSeries) -> TimeSeries:
    """Center to zero mean and scale to unit sample standard deviation."""
    if len(ts) < 2:
        raise DegenerateSeries("need at least 2 observations to standardize")
    sd = float(np.std(ts.values, ddof=1))
    if sd == 0.0 or not np.isfinite(sd):
        raise DegenerateSeries("series has zero variance")
    vals = (ts.values - float(np.mean(ts.values))) / sd
    return TimeSeries(values=vals, periods=ts.periods, origin_meta=ts.origin_meta)


def generate_multiseasonal(
    spec: MultiSeasonalSpec, cfg: Optional[GeneratorConfig] = None, seed=0
) -> TimeSeries:
    """Simulate one standardized series per period and combine them.

    Components are standardized before weighting so the weights control
    relative amplitude; weights default to normalized uniform draws.
    """
    cfg = cfg or GeneratorConfig()
    if spec.weights is not None:
        weights = np.asarray(spec.weights)
    else:
        gammas = np.clip(stream(seed, 0).random(len(spec.periods)), 1e-12, None)
        weights = gammas / gammas.sum()

    parts = []
    models = []
    for m_idx, period in enumerate(spec.periods):
        pcfg = GeneratorConfig(
            period=period,
            length=spec.length,
            k_max=cfg.k_max,
            coefficient_sd=cfg.coefficient_sd,
            sigma_log_mean=cfg.sigma_log_mean,
            sigma_log_sd=cfg.sigma_log_sd,
            p_d=cfg.p_d,
            p_D=cfg.p_D,
            ar_order_max=cfg.ar_order_max,
            seasonal_ar_order_max=cfg.seasonal_ar_order_max,
        )
        part = _generate_one(pcfg, substream_id(seed, 1 + m_idx), 0)
        parts.append(standardize_series(part).values)
        models.append(part.origin_meta["model"])

    combined = np.zeros(spec.length)
    for w, part in zip(weights, parts):
        combined = combined + w * part
    meta = {
        "seed": substream_id(seed),
        "weights": [float(w) for w in weights],
        "models": models,
    }
    return TimeSeries(
        values=combined, periods=tuple(sorted(set(spec.periods))), origin_meta=meta
    )
