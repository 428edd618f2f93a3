"""Synthetic time series workbench.

Generates diverse series from mixture autoregressive models, characterizes
them with a canonical feature vector, measures instance-space coverage,
tunes generators toward target features with a genetic algorithm, and trains
feature-based forecasting-method selectors on the generated corpus.
"""

__version__ = "0.1.0"

from .generator import (
    GeneratorConfig,
    MultiSeasonalSpec,
    generate_batch,
    generate_multiseasonal,
    sample_mar_parameters,
    standardize_series,
)
from .mar import (
    MARModel,
    SeasonalARComponent,
    TimeSeries,
    conditional_central_moment,
    conditional_moments,
    expand_component_to_ar,
    simulate_mar,
)

__all__ = [
    "GeneratorConfig",
    "MARModel",
    "MultiSeasonalSpec",
    "SeasonalARComponent",
    "TimeSeries",
    "conditional_central_moment",
    "conditional_moments",
    "expand_component_to_ar",
    "generate_batch",
    "generate_multiseasonal",
    "sample_mar_parameters",
    "simulate_mar",
    "standardize_series",
    "__version__",
]
