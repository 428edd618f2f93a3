import numpy as np
import pytest

from gratis.features import compute_feature_vector
from gratis.ga import (
    GAConfig,
    TargetSpec,
    decode,
    encode,
    evolve,
    fitness,
    gene_ranges,
    genome_length,
    tune_to_target,
)
from gratis.generator import GeneratorConfig, generate_batch
from gratis.rng import stream


def simple_target(period=1, length=40, names=("x.acf1",), values=(0.5,)):
    return TargetSpec(
        feature_names=names, target_values=values, period=period, length=length
    )


class TestTargetSpec:
    def test_validates_names(self):
        with pytest.raises(ValueError):
            simple_target(names=("bogus",), values=(1.0,))

    def test_seasonal_feature_needs_period(self):
        with pytest.raises(ValueError):
            TargetSpec(
                feature_names=("seasonal.strength",),
                target_values=(0.9,),
                period=1,
                length=40,
            )
        TargetSpec(
            feature_names=("seasonal.strength",),
            target_values=(0.9,),
            period=12,
            length=120,
        )


class TestDecode:
    def test_uniform_betas_give_uniform_weights(self):
        cfg = GAConfig()
        g = np.zeros(genome_length(1, cfg.p_fixed, cfg.k_fixed))
        ranges = gene_ranges(1, cfg.p_fixed, cfg.k_fixed)
        g[:] = ranges[:, 0]
        block = len(g) // cfg.k_fixed
        for k in range(cfg.k_fixed):
            g[k * block] = 0.4
        model = decode(g, 1, cfg.p_fixed, cfg.k_fixed)
        np.testing.assert_allclose(model.weights, 1.0 / cfg.k_fixed)

    def test_difference_gate_threshold(self):
        cfg = GAConfig(k_fixed=1, p_fixed=1)
        base = np.array([0.5, 0.1, 0.0, 0.49, 0.0])
        model = decode(base, 1, 1, 1)
        assert model.components[0].d == 0
        base[3] = 0.5
        model = decode(base, 1, 1, 1)
        assert model.components[0].d == 1

    def test_round_trip_weights(self):
        rng = np.random.default_rng(0)
        cfg = GAConfig()
        for _ in range(20):
            ranges = gene_ranges(12, cfg.p_fixed, cfg.k_fixed)
            g = rng.uniform(ranges[:, 0], ranges[:, 1])
            model = decode(g, 12, cfg.p_fixed, cfg.k_fixed)
            again = decode(
                encode(model, cfg.p_fixed, cfg.k_fixed), 12, cfg.p_fixed, cfg.k_fixed
            )
            np.testing.assert_allclose(again.weights, model.weights, atol=1e-12)
            for c1, c2 in zip(model.components, again.components):
                assert c1.ar_coeffs == c2.ar_coeffs
                assert c1.d == c2.d and c1.D == c2.D
                assert c1.sigma == pytest.approx(c2.sigma, rel=1e-12)

    def test_fuzz_decode_always_valid(self):
        rng = np.random.default_rng(1)
        cfg = GAConfig()
        for period in (1, 12):
            ranges = gene_ranges(period, cfg.p_fixed, cfg.k_fixed)
            for _ in range(2000):
                g = rng.uniform(ranges[:, 0], ranges[:, 1])
                model = decode(g, period, cfg.p_fixed, cfg.k_fixed)
                assert abs(sum(model.weights) - 1.0) <= 1e-12
                assert all(c.sigma > 0 for c in model.components)


class TestFitness:
    def test_zero_distance_reachable(self):
        # Fitness of a target equal to the (computable) simulated features is 0
        # only when the same seed regenerates the identical series; here we
        # check the analytic property: fitness <= 0 always.
        cfg = GAConfig(k_fixed=2, p_fixed=2)
        rng = stream(3)
        ranges = gene_ranges(1, cfg.p_fixed, cfg.k_fixed)
        for i in range(10):
            g = rng.uniform(ranges[:, 0], ranges[:, 1])
            f = fitness(g, simple_target(), seed=(100, i), cfg=cfg)
            assert f <= 0.0

    def test_zero_norm_target_uses_unit_scale(self):
        cfg = GAConfig(k_fixed=1, p_fixed=1)
        target = TargetSpec(
            feature_names=("x.acf1",), target_values=(0.0,), period=1, length=40
        )
        g = np.array([0.5, 0.3, 0.0, 0.0, 0.0])
        f = fitness(g, target, seed=5, cfg=cfg)
        assert -1.0 < f <= 0.0


class TestEvolve:
    def test_elite_survives_exactly(self):
        cfg = GAConfig(population=10, mutation_prob=0.0, crossover_prob=0.0, seed=4)
        target = simple_target()
        ranges = gene_ranges(1, cfg.p_fixed, cfg.k_fixed)
        rng = stream(7)
        genomes = rng.uniform(ranges[:, 0], ranges[:, 1], size=(10, len(ranges)))
        fits = rng.normal(-1.0, 0.3, 10)
        best = genomes[np.argmax(fits)].copy()
        new_genomes, new_fits, _ = evolve(genomes, fits, target, cfg, 1)
        assert np.array_equal(new_genomes[0], best)
        assert new_fits[0] == fits.max()

    def test_genes_stay_in_range(self):
        cfg = GAConfig(population=12, seed=5, mutation_prob=0.5)
        target = simple_target(period=12, length=60)
        ranges = gene_ranges(12, cfg.p_fixed, cfg.k_fixed)
        rng = stream(8)
        genomes = rng.uniform(ranges[:, 0], ranges[:, 1], size=(12, len(ranges)))
        fits = rng.normal(-1, 0.1, 12)
        new_genomes, _, _ = evolve(genomes, fits, target, cfg, 3)
        assert np.all(new_genomes >= ranges[:, 0] - 1e-12)
        assert np.all(new_genomes <= ranges[:, 1] + 1e-12)


class TestTune:
    def test_trace_monotone_and_deterministic(self):
        target = simple_target(length=30)
        cfg = GAConfig(population=8, max_generations=6, tolerance=0.0, seed=11)
        r1 = tune_to_target(target, cfg)
        r2 = tune_to_target(target, cfg)
        assert r1.trace == r2.trace
        assert np.array_equal(r1.series.values, r2.series.values)
        assert all(b >= a for a, b in zip(r1.trace, r1.trace[1:]))

    def test_infinite_tolerance_stops_immediately(self):
        target = simple_target(length=30)
        cfg = GAConfig(population=8, max_generations=50, tolerance=-np.inf, seed=12)
        res = tune_to_target(target, cfg)
        assert res.generations == 0
        assert len(res.trace) == 1

    def test_progress_events(self):
        target = simple_target(length=30)
        cfg = GAConfig(population=8, max_generations=4, tolerance=0.0, seed=13)
        events = []
        tune_to_target(target, cfg, on_progress=events.append)
        assert events[0]["generation"] == 0
        gens = [e["generation"] for e in events]
        assert gens == sorted(gens)
        best = [e["best_fitness"] for e in events]
        assert all(b >= a for a, b in zip(best, best[1:]))

    def test_self_target_recovery_smoke(self):
        # Single-seed version of the acceptance experiment: target the
        # features of a generated series and expect a close match quickly.
        series = generate_batch(GeneratorConfig(period=1, length=30), 1, seed=42)[0]
        names = ("ndiffs", "x.acf1", "entropy", "trend")
        fv = compute_feature_vector(series, names=names)
        target = TargetSpec(
            feature_names=names,
            target_values=tuple(fv.values),
            period=1,
            length=30,
        )
        cfg = GAConfig(population=20, max_generations=30, tolerance=-0.1, seed=21)
        res = tune_to_target(target, cfg)
        assert res.fitness >= -0.3
