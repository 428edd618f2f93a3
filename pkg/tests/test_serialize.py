import json

import numpy as np

from gratis.features import compute_feature_vector
from gratis.forecast import build_training_table, fit_meta_models
from gratis.generator import GeneratorConfig, generate_batch
from gratis.mar import TimeSeries
from gratis.serialize import (
    meta_model_from_dict,
    meta_model_to_dict,
    model_from_dict,
    model_to_dict,
    read_feature_csv,
    read_series_csv,
    read_series_jsonl,
    write_feature_csv,
    write_series_csv,
    write_series_jsonl,
)


def batch(count=5, seed=0, period=4, length=60):
    return generate_batch(GeneratorConfig(period=period, length=length), count, seed=seed)


class TestSeriesRoundTrip:
    def test_jsonl(self, tmp_path):
        series = batch()
        path = tmp_path / "series.jsonl"
        write_series_jsonl(series, path)
        back = read_series_jsonl(path)
        assert len(back) == len(series)
        for a, b in zip(series, back):
            np.testing.assert_array_equal(a.values, b.values)
            assert a.periods == b.periods

    def test_jsonl_preserves_model_metadata(self, tmp_path):
        series = batch(count=2)
        path = tmp_path / "series.jsonl"
        write_series_jsonl(series, path)
        rec = json.loads(path.read_text().splitlines()[0])
        model = model_from_dict(rec["meta"]["model"])
        assert model.period == 4

    def test_long_csv(self, tmp_path):
        series = batch(count=3, period=12, length=48)
        path = tmp_path / "series.csv"
        write_series_csv(series, path)
        back = read_series_csv(path)
        assert len(back) == 3
        for a, b in zip(series, back):
            np.testing.assert_allclose(a.values, b.values, rtol=0, atol=0)
            assert b.periods == (12,)

    def test_deterministic_bytes(self, tmp_path):
        series = batch(count=4, seed=9)
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_series_jsonl(series, p1)
        write_series_jsonl(series, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestModelRoundTrip:
    def test_model_dict(self):
        model = batch(count=1)[0].origin_meta["model"]
        again = model_from_dict(model_to_dict(model))
        assert again.weights == model.weights
        for a, b in zip(again.components, model.components):
            assert a == b


class TestFeatureCsv:
    def test_round_trip_with_absent_cells(self, tmp_path):
        series = [
            TimeSeries(values=np.random.default_rng(0).normal(0, 1, 20)),  # short
            batch(count=1, period=1, length=60)[0],
        ]
        vectors = [compute_feature_vector(ts) for ts in series]
        path = tmp_path / "features.csv"
        write_feature_csv(vectors, path)
        fm = read_feature_csv(path)
        assert fm.n_rows == 2
        assert np.isnan(fm.data[0, fm.columns.index("arch.r2")])
        assert np.isfinite(fm.data[1, fm.columns.index("x.acf1")])

    def test_column_count_single_period(self, tmp_path):
        vectors = [compute_feature_vector(batch(count=1, period=12, length=120)[0])]
        path = tmp_path / "features.csv"
        write_feature_csv(vectors, path)
        header = path.read_text().splitlines()[0].split(",")
        assert len(header) == 43  # id + 42 canonical columns
        assert header[0] == "id"


class TestMetaModelJson:
    def test_round_trip_predictions_identical(self):
        corpus = generate_batch(GeneratorConfig(period=1, length=30), 60, seed=3)
        table = build_training_table(corpus)
        meta = fit_meta_models(table, lambdas=(0.1,))
        again = meta_model_from_dict(meta_model_to_dict(meta))
        row = {n: table.features.data[0, j] for j, n in enumerate(table.features.columns)}
        assert meta.predict(row) == again.predict(row)
