"""Real-coded genetic algorithm that tunes MAR parameters toward target
features.

Chromosomes are flat real genomes over a fixed model structure (K components
with a fixed AR order each). Fitness simulates one series from the decoded
model and scores the negative scaled Euclidean distance between its selected
features and the target; tournament selection, blend crossover, Gaussian
mutation, and single-individual elitism evolve the population. The elite's
recorded fitness is carried without re-evaluation, which makes the
best-so-far trace monotone even though fitness is stochastic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonFiniteSample
from .features import canonical_names, compute_feature_vector, feature_info
from .mar import MARModel, SeasonalARComponent, TimeSeries, simulate_mar
from .rng import stream, substream_id

COEFF_RANGE = (-1.5, 1.5)
LOG_SIGMA_RANGE = (np.log(0.5), np.log(2.0))
WEIGHT_RANGE = (1e-6, 1.0)
GATE_RANGE = (0.0, 1.0)
SIGMA_CLAMP = (1e-4, 1e2)
_WORST = float("-inf")


@dataclass(frozen=True)
class TargetSpec:
    """Feature targets for a series of a given period and length."""

    feature_names: tuple
    target_values: tuple
    period: int = 1
    length: int = 60

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(
            self, "target_values", tuple(float(v) for v in self.target_values)
        )
        if not self.feature_names:
            raise ValueError("at least one target feature is required")
        if len(self.feature_names) != len(self.target_values):
            raise ValueError("feature names and target values must align")
        if any(not np.isfinite(v) for v in self.target_values):
            raise ValueError("target values must be finite")
        if self.period < 1 or self.length < 1:
            raise ValueError("period and length must be positive")
        valid = set(canonical_names(1))
        for name in self.feature_names:
            if name not in valid:
                raise ValueError(
                    f"unknown feature {name!r}; valid names: {sorted(valid)}"
                )
            if self.period == 1 and feature_info(name).seasonal_only:
                raise ValueError(f"feature {name!r} requires a seasonal period > 1")


@dataclass(frozen=True)
class GAConfig:
    """Genetic algorithm settings."""

    population: int = 30
    max_generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob: float = 0.1
    mutation_scale: float = 0.1
    tournament_size: int = 3
    elitism: int = 1
    tolerance: float = -0.05
    seed: int = 0
    k_fixed: int = 3
    p_fixed: int = 2
    workers: int = 1

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.k_fixed < 1 or self.p_fixed < 1:
            raise ValueError("k_fixed and p_fixed must be >= 1")


def _block_size(period: int, p_fixed: int) -> int:
    # beta, AR coeffs, optional seasonal coeff, log sigma, d gate, D gate
    return 1 + p_fixed + (1 if period > 1 else 0) + 3


def genome_length(period: int, p_fixed: int, k_fixed: int) -> int:
    return k_fixed * _block_size(period, p_fixed)


def gene_ranges(period: int, p_fixed: int, k_fixed: int) -> np.ndarray:
    """(L, 2) array of per-gene [low, high] bounds."""
    block = []
    block.append(WEIGHT_RANGE)
    block.extend([COEFF_RANGE] * p_fixed)
    if period > 1:
        block.append(COEFF_RANGE)
    block.append(LOG_SIGMA_RANGE)
    block.append(GATE_RANGE)
    block.append(GATE_RANGE)
    return np.array(block * k_fixed, dtype=float)


def decode(genome: np.ndarray, period: int, p_fixed: int, k_fixed: int) -> MARModel:
    """Total decode: any genome inside the gene-range box yields a valid model."""
    genome = np.asarray(genome, dtype=float)
    block = _block_size(period, p_fixed)
    if genome.size != block * k_fixed:
        raise ValueError(
            f"genome length {genome.size} != {block * k_fixed} for this structure"
        )
    betas = np.empty(k_fixed)
    components = []
    for k in range(k_fixed):
        g = genome[k * block : (k + 1) * block]
        pos = 0
        betas[k] = min(max(g[pos], WEIGHT_RANGE[0]), WEIGHT_RANGE[1])
        pos += 1
        ar = tuple(g[pos : pos + p_fixed])
        pos += p_fixed
        seasonal = ()
        if period > 1:
            seasonal = (float(g[pos]),)
            pos += 1
        sigma = float(np.clip(np.exp(g[pos]), *SIGMA_CLAMP))
        pos += 1
        d = int(g[pos] >= 0.5)
        pos += 1
        big_d = int(g[pos] >= 0.5) if period > 1 else 0
        components.append(
            SeasonalARComponent(
                ar_coeffs=ar,
                seasonal_ar_coeffs=seasonal if period > 1 else (),
                d=d,
                D=big_d,
                period=period,
                intercept=0.0,
                sigma=sigma,
            )
        )
    weights = betas / betas.sum()
    return MARModel(components=tuple(components), weights=tuple(weights))


def encode(model: MARModel, p_fixed: int, k_fixed: int) -> np.ndarray:
    """Right inverse of decode on the reachable set (weights up to scale)."""
    period = model.period
    if len(model.components) != k_fixed:
        raise ValueError("component count does not match the genome structure")
    genes = []
    for comp, w in zip(model.components, model.weights):
        if len(comp.ar_coeffs) > p_fixed:
            raise ValueError("AR order exceeds the genome structure")
        genes.append(w)
        ar = list(comp.ar_coeffs) + [0.0] * (p_fixed - len(comp.ar_coeffs))
        genes.extend(ar)
        if period > 1:
            genes.append(comp.seasonal_ar_coeffs[0] if comp.seasonal_ar_coeffs else 0.0)
        genes.append(np.log(comp.sigma))
        genes.append(1.0 if comp.d else 0.0)
        genes.append(1.0 if comp.D else 0.0)
    return np.array(genes, dtype=float)


@dataclass
class Evaluation:
    fitness: float
    series: Optional[TimeSeries]
    feature_values: dict


def fitness(
    genome: np.ndarray, target: TargetSpec, seed, cfg: Optional[GAConfig] = None
) -> float:
    """Negative scaled distance between simulated and target features."""
    cfg = cfg or GAConfig()
    return _evaluate(genome, target, seed, cfg.p_fixed, cfg.k_fixed).fitness


def _evaluate(genome, target: TargetSpec, seed, p_fixed: int, k_fixed: int) -> Evaluation:
    model = decode(genome, target.period, p_fixed, k_fixed)
    try:
        ts = simulate_mar(model, target.length, target.period * 10, seed)
    except NonFiniteSample:
        return Evaluation(fitness=_WORST, series=None, feature_values={})
    fv = compute_feature_vector(ts, names=target.feature_names)
    values = fv.as_dict()
    sq = 0.0
    for name, goal in zip(target.feature_names, target.target_values):
        got = values.get(name)
        if got is None:
            sq += goal * goal  # absent feature contributes its full target
        else:
            sq += (got - goal) ** 2
    norm = float(np.linalg.norm(target.target_values))
    c = norm if norm >= 1e-9 else 1.0
    return Evaluation(fitness=-np.sqrt(sq) / c, series=ts, feature_values=values)


def _tournament(rng, fits: np.ndarray, size: int) -> int:
    contenders = rng.integers(0, len(fits), size)
    return int(contenders[np.argmax(fits[contenders])])


def evolve(
    genomes: np.ndarray,
    fits: np.ndarray,
    target: TargetSpec,
    cfg: GAConfig,
    generation: int,
    evaluations: Optional[list] = None,
) -> tuple:
    """One generation: tournament selection, blend crossover, Gaussian
    mutation, elitism, and evaluation of all new individuals.

    Returns (new_genomes, new_fits, new_evaluations). Elite individuals are
    carried unmodified with their recorded fitness.
    """
    n, length = genomes.shape
    ranges = gene_ranges(target.period, cfg.p_fixed, cfg.k_fixed)
    lo, hi = ranges[:, 0], ranges[:, 1]
    span = hi - lo
    rng = stream(cfg.seed, 2, generation)

    order = np.argsort(-fits, kind="stable")
    elite_idx = order[: cfg.elitism]

    new_genomes = np.empty_like(genomes)
    for slot in range(cfg.elitism, n):
        p1 = _tournament(rng, fits, cfg.tournament_size)
        p2 = _tournament(rng, fits, cfg.tournament_size)
        if rng.random() < cfg.crossover_prob:
            u = rng.uniform(-0.25, 1.25, length)
            child = u * genomes[p1] + (1.0 - u) * genomes[p2]
        else:
            child = genomes[p1].copy()
        mutate = rng.random(length) < cfg.mutation_prob
        child = child + mutate * rng.normal(0.0, cfg.mutation_scale * span, length)
        new_genomes[slot] = np.clip(child, lo, hi)

    new_fits = np.empty(n)
    new_evals: list = [None] * n
    for rank, idx in enumerate(elite_idx):
        new_genomes[rank] = genomes[idx]
        new_fits[rank] = fits[idx]
        if evaluations is not None:
            new_evals[rank] = evaluations[idx]
    for slot in range(cfg.elitism, n):
        ev = _evaluate(
            new_genomes[slot],
            target,
            substream_id(cfg.seed, 1, generation, slot),
            cfg.p_fixed,
            cfg.k_fixed,
        )
        new_fits[slot] = ev.fitness
        new_evals[slot] = ev
    return new_genomes, new_fits, new_evals


@dataclass(frozen=True)
class TuneResult:
    """Best series found, its generating model, and the fitness trace."""

    series: TimeSeries
    model: MARModel
    trace: tuple
    fitness: float
    generations: int
    feature_values: dict
    target: TargetSpec


def tune_to_target(
    target: TargetSpec,
    cfg: Optional[GAConfig] = None,
    on_progress: Optional[Callable[[dict], None]] = None,
) -> TuneResult:
    """Run the GA until the fitness tolerance or the generation cap is hit.

    Always returns the best individual seen; the trace is the best-so-far
    fitness per generation (monotone non-decreasing by elitism).
    """
    cfg = cfg or GAConfig()
    started = time.monotonic()
    ranges = gene_ranges(target.period, cfg.p_fixed, cfg.k_fixed)
    lo, hi = ranges[:, 0], ranges[:, 1]
    init_rng = stream(cfg.seed, 0)
    n = cfg.population
    genomes = init_rng.uniform(lo, hi, size=(n, len(lo)))

    fits = np.empty(n)
    evals: list = [None] * n
    for i in range(n):
        ev = _evaluate(
            genomes[i], target, substream_id(cfg.seed, 1, 0, i), cfg.p_fixed, cfg.k_fixed
        )
        fits[i] = ev.fitness
        evals[i] = ev

    def best_of():
        idx = int(np.argmax(fits))
        return idx, fits[idx]

    best_idx, best_fit = best_of()
    best_genome = genomes[best_idx].copy()
    best_eval = evals[best_idx]
    trace = [float(best_fit)]

    def emit(generation: int):
        if on_progress is not None:
            on_progress(
                {
                    "generation": generation,
                    "best_fitness": float(best_fit),
                    "best_feature_values": dict(best_eval.feature_values)
                    if best_eval
                    else {},
                    "elapsed_ms": int((time.monotonic() - started) * 1000),
                }
            )

    emit(0)
    generation = 0
    while best_fit < cfg.tolerance and generation < cfg.max_generations:
        generation += 1
        genomes, fits, evals = evolve(genomes, fits, target, cfg, generation, evals)
        idx, fit = best_of()
        if fit > best_fit:
            best_fit = fit
            best_genome = genomes[idx].copy()
            best_eval = evals[idx]
        trace.append(float(best_fit))
        emit(generation)

    if best_eval is None or best_eval.series is None:
        # Every individual exploded; fall back to a noise-only series so the
        # contract of always returning a series holds.
        model = decode(best_genome, target.period, cfg.p_fixed, cfg.k_fixed)
        series = simulate_mar(
            MARModel(
                components=(SeasonalARComponent(period=target.period),),
                weights=(1.0,),
            ),
            target.length,
            target.period * 10,
            substream_id(cfg.seed, 3),
        )
        feature_values = {}
    else:
        model = decode(best_genome, target.period, cfg.p_fixed, cfg.k_fixed)
        series = best_eval.series
        feature_values = dict(best_eval.feature_values)

    return TuneResult(
        series=series,
        model=model,
        trace=tuple(trace),
        fitness=float(best_fit),
        generations=generation,
        feature_values=feature_values,
        target=target,
    )
