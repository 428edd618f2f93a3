"""Feature-based forecast selection: training table, meta-models, selection
and averaging.

Each generated series is split into train/test at the period's horizon; the
train part yields a feature vector and the test part a MASE per method. One
penalized quantile regression per method then maps features to expected
MASE. At prediction time the method with the smallest predicted MASE is
selected, or all methods are combined with weights exp(1/MASE^3),
normalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import GratisError, TooShort, ZeroScale
from ..features import compute_feature_vector
from ..instance_space import FeatureMatrix, build_feature_matrix
from ..mar import TimeSeries
from .methods import METHOD_ORDER, forecast, horizon_for_period, mase
from .quantile import DEFAULT_LAMBDAS, QuantileFit, fit_quantile_lasso

MASE_FLOOR = 1e-6
_EXP_CAP = 700.0
MIN_TRAIN_LENGTH = 8


@dataclass(frozen=True)
class TrainingTable:
    """Feature matrix of truncated series plus per-method MASE columns."""

    features: FeatureMatrix
    mase: dict
    horizon: int
    skipped: tuple


def build_training_table(
    corpus: Sequence[TimeSeries],
    horizons: Optional[dict] = None,
    bank: Sequence[str] = METHOD_ORDER,
    min_train: int = MIN_TRAIN_LENGTH,
) -> TrainingTable:
    """Split each series into train/test, extract features, score methods.

    Series that are too short, constant, or yield a non-finite MASE are
    skipped and logged in ``skipped``.
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    h = horizon_for_period(corpus[0].period, horizons)
    vectors, ids, skipped = [], [], []
    scores = {m: [] for m in bank}
    for i, ts in enumerate(corpus):
        sid = str(ts.origin_meta.get("index", i)) if ts.origin_meta else str(i)
        hi = horizon_for_period(ts.period, horizons)
        if len(ts) <= hi + min_train:
            skipped.append((sid, "too short for horizon"))
            continue
        train = TimeSeries(values=ts.values[:-hi], periods=ts.periods)
        actual = ts.values[-hi:]
        try:
            row = {m: mase(actual, forecast(m, train, hi), train) for m in bank}
        except (ZeroScale, TooShort) as exc:
            skipped.append((sid, f"{type(exc).__name__}: {exc}"))
            continue
        if not all(np.isfinite(v) for v in row.values()):
            skipped.append((sid, "non-finite MASE"))
            continue
        vectors.append(compute_feature_vector(train))
        ids.append(sid)
        for m in bank:
            scores[m].append(row[m])
    if not vectors:
        raise GratisError("every series was skipped; nothing to train on")
    features = build_feature_matrix(vectors, ids=ids)
    return TrainingTable(
        features=features,
        mase={m: np.asarray(v) for m, v in scores.items()},
        horizon=h,
        skipped=tuple(skipped),
    )


@dataclass(frozen=True)
class RobustScaler:
    """Median/IQR column scaler with NaN-to-median imputation."""

    medians: np.ndarray
    divisors: np.ndarray

    @classmethod
    def fit(cls, data: np.ndarray) -> "RobustScaler":
        meds = np.empty(data.shape[1])
        divs = np.empty(data.shape[1])
        for j in range(data.shape[1]):
            col = data[:, j]
            present = col[~np.isnan(col)]
            if present.size == 0:
                meds[j], divs[j] = 0.0, 1.0
                continue
            meds[j] = float(np.median(present))
            q75, q25 = np.percentile(present, [75.0, 25.0])
            divs[j] = float(q75 - q25) or 1.0
        return cls(medians=meds, divisors=divs)

    def transform(self, data: np.ndarray) -> np.ndarray:
        data = np.atleast_2d(np.asarray(data, dtype=float))
        out = (np.where(np.isnan(data), self.medians, data) - self.medians) / self.divisors
        return out


@dataclass(frozen=True)
class MetaModel:
    """Per-method quantile regressions over robust-scaled features."""

    feature_names: tuple
    methods: tuple
    fits: dict
    scaler: RobustScaler
    tau: float

    def predict(self, features) -> dict:
        """Predicted MASE per method, floored at MASE_FLOOR.

        ``features`` is a FeatureVector, a name->value dict, or an aligned
        row; absent entries impute at the training median.
        """
        row = self._row(features)
        x = self.scaler.transform(row)[0]
        out = {}
        for m in self.methods:
            fit: QuantileFit = self.fits[m]
            out[m] = float(max(fit.intercept + x @ fit.coefficients, MASE_FLOOR))
        return out

    def _row(self, features) -> np.ndarray:
        if hasattr(features, "as_dict"):
            mapping = features.as_dict()
        elif isinstance(features, dict):
            mapping = features
        else:
            arr = np.asarray(features, dtype=float)
            if arr.shape[-1] != len(self.feature_names):
                raise ValueError("feature row does not match the trained columns")
            return arr
        return np.array(
            [
                np.nan if mapping.get(name) is None else float(mapping[name])
                for name in self.feature_names
            ]
        )


def fit_meta_models(
    table: TrainingTable,
    tau: float = 0.5,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    folds: int = 5,
) -> MetaModel:
    """Fit one penalized quantile regression per forecasting method."""
    scaler = RobustScaler.fit(table.features.data)
    X = scaler.transform(table.features.data)
    fits = {}
    for m, y in table.mase.items():
        fits[m] = fit_quantile_lasso(X, y, tau=tau, lambdas=lambdas, folds=folds)
    return MetaModel(
        feature_names=table.features.columns,
        methods=tuple(table.mase.keys()),
        fits=fits,
        scaler=scaler,
        tau=tau,
    )


def predict_and_select(meta: MetaModel, features) -> tuple:
    """(selected method, predicted MASE per method); ties break by bank order."""
    predicted = meta.predict(features)
    selected = min(predicted, key=lambda m: (predicted[m], meta.methods.index(m)))
    return selected, predicted


def averaging_weights(predicted: Sequence[float]) -> np.ndarray:
    """Softmax-style weights exp(1/MASE^3), normalized; smaller predicted
    MASE means strictly larger weight (within the clamp range)."""
    preds = np.maximum(np.asarray(predicted, dtype=float), MASE_FLOOR)
    args = np.minimum(1.0 / preds**3, _EXP_CAP)
    # Shift before exponentiation: invariant to the shift, avoids overflow.
    w = np.exp(args - args.max())
    return w / w.sum()


def combine_forecasts(forecasts: dict, weights: dict) -> np.ndarray:
    """Pointwise convex combination of the per-method forecasts."""
    methods = list(forecasts.keys())
    stack = np.vstack([np.asarray(forecasts[m], dtype=float) for m in methods])
    w = np.array([weights[m] for m in methods], dtype=float)
    return w @ stack
