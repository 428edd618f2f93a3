"""Time series feature catalog: scale-independent summary statistics."""

from .catalog import (
    FEATURE_INFO,
    FeatureInfo,
    FeatureVector,
    canonical_names,
    compute_feature_vector,
    feature_info,
    seasonal_strength_names,
    validate_ranges,
)
from .correlation import acf_feature_set, pacf_feature_set
from .heterogeneity import fit_garch11, heterogeneity_features, prewhiten
from .nonlinearity import nonlinearity
from .spectral import hurst, spectral_entropy
from .stl import STLDecomposition, stl_decompose_multi, stl_feature_set
from .unitroot import (
    kpss_stat,
    ndiffs,
    nsdiffs,
    ocsb_crit,
    ocsb_stat,
    pp_zalpha,
    unit_root_stats,
)
from .windows import sliding_shift_features, tiled_window_features

__all__ = [
    "FEATURE_INFO",
    "FeatureInfo",
    "FeatureVector",
    "STLDecomposition",
    "acf_feature_set",
    "canonical_names",
    "compute_feature_vector",
    "feature_info",
    "fit_garch11",
    "heterogeneity_features",
    "hurst",
    "kpss_stat",
    "ndiffs",
    "nonlinearity",
    "nsdiffs",
    "ocsb_crit",
    "ocsb_stat",
    "pacf_feature_set",
    "pp_zalpha",
    "prewhiten",
    "seasonal_strength_names",
    "sliding_shift_features",
    "spectral_entropy",
    "stl_decompose_multi",
    "stl_feature_set",
    "tiled_window_features",
    "unit_root_stats",
    "validate_ranges",
]
