import numpy as np
import pytest

from gratis.forecast import (
    METHOD_ORDER,
    averaging_weights,
    build_training_table,
    combine_forecasts,
    fit_meta_models,
    predict_and_select,
)
from gratis.generator import GeneratorConfig, generate_batch
from gratis.mar import TimeSeries


def small_corpus(count=40, seed=0):
    return generate_batch(GeneratorConfig(period=1, length=30), count, seed=seed)


class TestTrainingTable:
    def test_yearly_horizon_is_six(self):
        table = build_training_table(small_corpus())
        assert table.horizon == 6

    def test_constant_series_skipped(self):
        corpus = small_corpus(10)
        corpus.append(TimeSeries(values=np.full(30, 2.0)))
        table = build_training_table(corpus)
        assert table.features.n_rows == 10
        assert len(table.skipped) == 1
        assert "ZeroScale" in table.skipped[0][1]

    def test_row_bookkeeping(self):
        corpus = small_corpus(15)
        corpus.append(TimeSeries(values=np.arange(10.0)))  # too short for h=6
        table = build_training_table(corpus)
        assert table.features.n_rows + len(table.skipped) == 16

    def test_mase_columns_align(self):
        table = build_training_table(small_corpus(12))
        for m in METHOD_ORDER:
            assert len(table.mase[m]) == table.features.n_rows
            assert np.all(table.mase[m] >= 0)
            assert np.all(np.isfinite(table.mase[m]))


class TestMetaModel:
    def test_fit_and_predict(self):
        table = build_training_table(small_corpus(60, seed=5))
        meta = fit_meta_models(table, lambdas=(0.0, 0.1))
        row = {name: table.features.data[0, j] for j, name in enumerate(table.features.columns)}
        predicted = meta.predict(row)
        assert set(predicted) == set(METHOD_ORDER)
        assert all(v >= 1e-6 for v in predicted.values())

    def test_selection_tie_break_uses_bank_order(self):
        table = build_training_table(small_corpus(60, seed=6))
        meta = fit_meta_models(table, lambdas=(1e9,))  # all coefficients -> 0
        # With identical-as-possible predictions the argmin must respect
        # METHOD_ORDER on exact ties.
        row = {n: None for n in meta.feature_names}
        predicted = meta.predict(row)
        selected, _ = predict_and_select(meta, row)
        best = min(predicted.values())
        ties = [m for m in meta.methods if predicted[m] == best]
        assert selected == ties[0]

    def test_absent_features_impute(self):
        table = build_training_table(small_corpus(60, seed=7))
        meta = fit_meta_models(table, lambdas=(0.1,))
        predicted = meta.predict({n: None for n in meta.feature_names})
        assert all(np.isfinite(v) for v in predicted.values())


class TestAveragingWeights:
    def test_hand_example(self):
        w = averaging_weights([1.0, 2.0])
        np.testing.assert_allclose(w, [0.705, 0.295], atol=1e-3)

    def test_uniform_for_equal_predictions(self):
        w = averaging_weights([0.7, 0.7, 0.7])
        np.testing.assert_allclose(w, 1 / 3)

    def test_sum_to_one_and_rank_order(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            preds = rng.uniform(0.05, 5.0, 6)
            w = averaging_weights(preds)
            assert w.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(np.argsort(-w) == np.argsort(preds, kind="stable"))

    def test_monotone_in_single_prediction(self):
        base = np.array([1.0, 1.5, 2.0])
        w0 = averaging_weights(base)
        better = base.copy()
        better[1] = 1.2
        w1 = averaging_weights(better)
        assert w1[1] > w0[1]

    def test_extreme_values_stay_finite(self):
        w = averaging_weights([1e-9, 1e9])
        assert np.all(np.isfinite(w))
        assert w.sum() == pytest.approx(1.0)
        assert w[0] > w[1]


class TestCombination:
    def test_convex_combination_bounds(self):
        forecasts = {
            "naive": np.array([1.0, 1.0]),
            "mean": np.array([3.0, 2.0]),
            "rw_drift": np.array([2.0, 5.0]),
        }
        weights = dict(zip(forecasts, averaging_weights([1.0, 0.8, 1.3])))
        combined = combine_forecasts(forecasts, weights)
        stack = np.vstack(list(forecasts.values()))
        assert np.all(combined >= stack.min(axis=0) - 1e-12)
        assert np.all(combined <= stack.max(axis=0) + 1e-12)
