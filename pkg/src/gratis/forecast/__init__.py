"""Forecast lab: method bank, MASE scoring, and feature-based selection."""

from .meta import (
    MetaModel,
    RobustScaler,
    TrainingTable,
    averaging_weights,
    build_training_table,
    combine_forecasts,
    fit_meta_models,
    predict_and_select,
)
from .methods import (
    DEFAULT_HORIZONS,
    METHOD_ORDER,
    forecast,
    horizon_for_period,
    mase,
)
from .quantile import QuantileFit, check_loss, fit_quantile_lasso

__all__ = [
    "DEFAULT_HORIZONS",
    "METHOD_ORDER",
    "MetaModel",
    "QuantileFit",
    "RobustScaler",
    "TrainingTable",
    "averaging_weights",
    "build_training_table",
    "check_loss",
    "combine_forecasts",
    "fit_meta_models",
    "fit_quantile_lasso",
    "forecast",
    "horizon_for_period",
    "mase",
    "predict_and_select",
]
