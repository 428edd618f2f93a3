"""Stable file formats: series JSONL / long CSV, feature CSV, embedding CSV,
coverage and meta-model JSON.

JSONL is the canonical series format (one object per line: id, periods,
values, meta); long CSV (id,t,value plus a periods sidecar JSON) exists for
spreadsheet interoperability. All writers are deterministic: fixed key
order, no timestamps, repr-stable floats.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .features import FeatureVector, canonical_names
from .forecast.meta import MetaModel, RobustScaler
from .forecast.quantile import QuantileFit
from .instance_space import CoverageGrid, Embedding2D, FeatureMatrix
from .mar import MARModel, SeasonalARComponent, TimeSeries


def model_to_dict(model: MARModel) -> dict:
    return {
        "weights": [float(w) for w in model.weights],
        "components": [
            {
                "ar_coeffs": list(c.ar_coeffs),
                "seasonal_ar_coeffs": list(c.seasonal_ar_coeffs),
                "d": c.d,
                "D": c.D,
                "period": c.period,
                "intercept": c.intercept,
                "sigma": c.sigma,
            }
            for c in model.components
        ],
    }


def model_from_dict(payload: dict) -> MARModel:
    comps = tuple(
        SeasonalARComponent(
            ar_coeffs=tuple(c.get("ar_coeffs", ())),
            seasonal_ar_coeffs=tuple(c.get("seasonal_ar_coeffs", ())),
            d=int(c.get("d", 0)),
            D=int(c.get("D", 0)),
            period=int(c.get("period", 1)),
            intercept=float(c.get("intercept", 0.0)),
            sigma=float(c.get("sigma", 1.0)),
        )
        for c in payload["components"]
    )
    return MARModel(components=comps, weights=tuple(payload["weights"]))


def _series_record(ts: TimeSeries, sid: str) -> dict:
    meta = {}
    if ts.origin_meta:
        for key, value in ts.origin_meta.items():
            if isinstance(value, MARModel):
                meta[key] = model_to_dict(value)
            elif key == "models":
                meta[key] = [model_to_dict(m) for m in value]
            elif isinstance(value, tuple):
                meta[key] = list(value)
            else:
                meta[key] = value
    return {
        "id": sid,
        "periods": list(ts.periods),
        "values": [float(v) for v in ts.values],
        "meta": meta,
    }


def write_series_jsonl(series: Sequence[TimeSeries], path, ids=None) -> None:
    path = Path(path)
    with path.open("w") as fh:
        for i, ts in enumerate(series):
            sid = str(ids[i]) if ids is not None else str(i)
            fh.write(json.dumps(_series_record(ts, sid), sort_keys=True))
            fh.write("\n")


def read_series_jsonl(path) -> list:
    out = []
    with Path(path).open() as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            meta = dict(rec.get("meta", {}))
            meta["id"] = rec["id"]
            out.append(
                TimeSeries(
                    values=np.asarray(rec["values"], dtype=float),
                    periods=tuple(rec["periods"]),
                    origin_meta=meta,
                )
            )
    return out


def write_series_csv(series: Sequence[TimeSeries], path, ids=None) -> None:
    """Long CSV (id,t,value) plus a `<path>.periods.json` sidecar."""
    path = Path(path)
    sidecar = {}
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "t", "value"])
        for i, ts in enumerate(series):
            sid = str(ids[i]) if ids is not None else str(i)
            sidecar[sid] = list(ts.periods)
            for t, v in enumerate(ts.values, start=1):
                writer.writerow([sid, t, repr(float(v))])
    with path.with_suffix(path.suffix + ".periods.json").open("w") as fh:
        json.dump(sidecar, fh, sort_keys=True)


def read_series_csv(path) -> list:
    path = Path(path)
    sidecar_path = path.with_suffix(path.suffix + ".periods.json")
    periods_map = {}
    if sidecar_path.exists():
        with sidecar_path.open() as fh:
            periods_map = json.load(fh)
    rows: dict = {}
    order: list = []
    with path.open(newline="") as fh:
        for rec in csv.DictReader(fh):
            sid = rec["id"]
            if sid not in rows:
                rows[sid] = []
                order.append(sid)
            rows[sid].append((int(rec["t"]), float(rec["value"])))
    out = []
    for sid in order:
        vals = [v for _, v in sorted(rows[sid])]
        periods = tuple(periods_map.get(sid, [1]))
        out.append(
            TimeSeries(
                values=np.asarray(vals), periods=periods, origin_meta={"id": sid}
            )
        )
    return out


def read_series_file(path) -> list:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_series_csv(path)
    return read_series_jsonl(path)


def _format_cell(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_feature_csv(
    vectors: Sequence[FeatureVector], path, ids=None
) -> None:
    """Feature matrix CSV: canonical header, one series per row, absent
    values as empty cells. The column set follows the widest row."""
    max_periods = max(len(fv.periods) for fv in vectors)
    columns = canonical_names(max_periods)
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *columns])
        for i, fv in enumerate(vectors):
            sid = str(ids[i]) if ids is not None else str(i)
            mapping = fv.as_dict()
            writer.writerow([sid, *(_format_cell(mapping.get(c)) for c in columns)])


def read_feature_csv(path) -> FeatureMatrix:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        columns = tuple(header[1:])
        ids, rows = [], []
        for rec in reader:
            ids.append(rec[0])
            rows.append([np.nan if cell == "" else float(cell) for cell in rec[1:]])
    return FeatureMatrix(ids=tuple(ids), columns=columns, data=np.asarray(rows, dtype=float))


def write_embedding_csv(emb: Embedding2D, path, ids=None) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "comp1", "comp2", "method", "seed"])
        for i, (c1, c2) in enumerate(emb.points):
            sid = str(ids[i]) if ids is not None else str(i)
            writer.writerow(
                [sid, repr(float(c1)), repr(float(c2)), emb.method,
                 "" if emb.seed is None else emb.seed]
            )


def read_embedding_csv(path) -> Embedding2D:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        pts, method, seed = [], "pca", None
        for rec in reader:
            pts.append((float(rec["comp1"]), float(rec["comp2"])))
            method = rec.get("method", method)
            seed = int(rec["seed"]) if rec.get("seed") else None
    return Embedding2D(points=np.asarray(pts), method=method, seed=seed)


def coverage_report(grid: CoverageGrid) -> dict:
    return {
        "nb": grid.nb,
        "x_range": list(grid.x_range),
        "y_range": list(grid.y_range),
        "miscoverage_ab": grid.miscoverage_a_over_b(),
        "miscoverage_ba": grid.miscoverage_b_over_a(),
        "occupied_a": int(grid.occupied_a.sum()),
        "occupied_b": int(grid.occupied_b.sum()),
    }


def meta_model_to_dict(meta: MetaModel) -> dict:
    return {
        "feature_names": list(meta.feature_names),
        "methods": list(meta.methods),
        "tau": meta.tau,
        "scaler": {
            "medians": [float(v) for v in meta.scaler.medians],
            "divisors": [float(v) for v in meta.scaler.divisors],
        },
        "fits": {
            m: {
                "intercept": fit.intercept,
                "coefficients": [float(v) for v in fit.coefficients],
                "lambda": fit.lam,
                "adaptive_weights": [float(v) for v in fit.adaptive_weights],
                "dropped_columns": list(fit.dropped_columns),
            }
            for m, fit in meta.fits.items()
        },
    }


def meta_model_from_dict(payload: dict) -> MetaModel:
    fits = {
        m: QuantileFit(
            intercept=float(rec["intercept"]),
            coefficients=np.asarray(rec["coefficients"], dtype=float),
            tau=float(payload["tau"]),
            lam=float(rec["lambda"]),
            adaptive_weights=np.asarray(rec["adaptive_weights"], dtype=float),
            dropped_columns=tuple(rec["dropped_columns"]),
            objective=float(rec.get("objective", 0.0)),
        )
        for m, rec in payload["fits"].items()
    }
    scaler = RobustScaler(
        medians=np.asarray(payload["scaler"]["medians"], dtype=float),
        divisors=np.asarray(payload["scaler"]["divisors"], dtype=float),
    )
    return MetaModel(
        feature_names=tuple(payload["feature_names"]),
        methods=tuple(payload["methods"]),
        fits=fits,
        scaler=scaler,
        tau=float(payload["tau"]),
    )


def dump_json(payload: dict, path) -> None:
    with Path(path).open("w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def dumps_json(payload: dict) -> str:
    buf = io.StringIO()
    json.dump(payload, buf, sort_keys=True, indent=2)
    return buf.getvalue() + "\n"


def load_json(path) -> dict:
    with Path(path).open() as fh:
        return json.load(fh)
