"""Canonical feature vector: fixed-order assembly of all features.

The canonical order and names form a stable interface consumed by the CSV
serialization, the meta-learner, and the web UI. A single-period series
yields 42 entries; each additional seasonal period adds one
seasonal.strength entry. Entries that cannot be computed (short series,
failed fits) are recorded as absent (None) rather than failing the vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import GratisError
from ..mar import TimeSeries
from .correlation import acf_feature_set, pacf_feature_set
from .heterogeneity import heterogeneity_features
from .nonlinearity import nonlinearity
from .spectral import hurst, spectral_entropy
from .stl import stl_feature_set
from .unitroot import ndiffs, nsdiffs, unit_root_stats
from .windows import sliding_shift_features, tiled_window_features

_ACF_NAMES = (
    "x.acf1", "x.acf10", "diff1.acf1", "diff1.acf10",
    "diff2.acf1", "diff2.acf10", "seas.acf1",
)
_PACF_NAMES = ("x.pacf5", "diff1.pacf5", "diff2.pacf5", "seas.pacf")
_SHIFT_NAMES = (
    "max.level.shift", "time.level.shift",
    "max.var.shift", "time.var.shift",
    "max.kl.shift", "time.kl.shift",
)
_HET_NAMES = ("arch.acf", "garch.acf", "arch.r2", "garch.r2")


def seasonal_strength_names(n_periods: int) -> tuple:
    names = ["seasonal.strength"]
    names += [f"seasonal.strength.{i}" for i in range(2, n_periods + 1)]
    return tuple(names)


def canonical_names(n_periods: int = 1) -> tuple:
    """Feature names in canonical order for a series with n_periods periods."""
    return (
        ("length", "nPeriods", "periods", "ndiffs", "nsdiffs")
        + _ACF_NAMES
        + _PACF_NAMES
        + ("entropy", "nonlinearity", "hurst", "stability", "lumpiness",
           "unitroot.kpss", "unitroot.pp")
        + _SHIFT_NAMES
        + ("trend",)
        + seasonal_strength_names(n_periods)
        + ("peak", "trough", "spike", "linearity", "curvature",
           "e.acf1", "e.acf10")
        + _HET_NAMES
    )


@dataclass(frozen=True)
class FeatureInfo:
    """Metadata for one canonical feature: range and applicability."""

    lower: float = -math.inf
    upper: float = math.inf
    lower_open: bool = False
    upper_open: bool = False
    seasonal_only: bool = False
    integer: bool = False

    def contains(self, v: float) -> bool:
        if self.lower_open:
            if v <= self.lower:
                return False
        elif v < self.lower:
            return False
        if self.upper_open:
            if v >= self.upper:
                return False
        elif v > self.upper:
            return False
        return not self.integer or float(v).is_integer()


_CORR = FeatureInfo(lower=-1.0, upper=1.0, lower_open=True, upper_open=True)
_SUMSQ = FeatureInfo(lower=0.0)
_UNIT = FeatureInfo(lower=0.0, upper=1.0)

FEATURE_INFO = {
    "length": FeatureInfo(lower=1.0, integer=True),
    "nPeriods": FeatureInfo(lower=1.0, integer=True),
    "periods": FeatureInfo(lower=1.0, integer=True),
    "ndiffs": FeatureInfo(lower=0.0, upper=2.0, integer=True),
    "nsdiffs": FeatureInfo(lower=0.0, upper=1.0, integer=True, seasonal_only=True),
    "x.acf1": _CORR, "diff1.acf1": _CORR, "diff2.acf1": _CORR,
    "seas.acf1": FeatureInfo(lower=-1.0, upper=1.0, lower_open=True,
                             upper_open=True, seasonal_only=True),
    "x.acf10": _SUMSQ, "diff1.acf10": _SUMSQ, "diff2.acf10": _SUMSQ,
    "x.pacf5": _SUMSQ, "diff1.pacf5": _SUMSQ, "diff2.pacf5": _SUMSQ,
    "seas.pacf": FeatureInfo(lower=-1.0, upper=1.0, lower_open=True,
                             upper_open=True, seasonal_only=True),
    "entropy": FeatureInfo(lower=0.0, upper=1.0, lower_open=True),
    "nonlinearity": _SUMSQ,
    "hurst": FeatureInfo(lower=0.5, upper=1.0),
    "stability": _SUMSQ,
    "lumpiness": _SUMSQ,
    "unitroot.kpss": _SUMSQ,
    "unitroot.pp": FeatureInfo(),
    "max.level.shift": _SUMSQ,
    "time.level.shift": FeatureInfo(lower=1.0, integer=True),
    "max.var.shift": _SUMSQ,
    "time.var.shift": FeatureInfo(lower=1.0, integer=True),
    "max.kl.shift": FeatureInfo(),
    "time.kl.shift": FeatureInfo(lower=1.0, integer=True),
    "trend": _UNIT,
    "seasonal.strength": FeatureInfo(lower=0.0, upper=1.0, seasonal_only=True),
    "peak": FeatureInfo(lower=0.0, integer=True, seasonal_only=True),
    "trough": FeatureInfo(lower=0.0, integer=True, seasonal_only=True),
    "spike": _SUMSQ,
    "linearity": FeatureInfo(),
    "curvature": FeatureInfo(),
    "e.acf1": _CORR,
    "e.acf10": _SUMSQ,
    "arch.acf": _SUMSQ,
    "garch.acf": _SUMSQ,
    "arch.r2": _UNIT,
    "garch.r2": _UNIT,
}


def feature_info(name: str) -> FeatureInfo:
    if name.startswith("seasonal.strength"):
        return FEATURE_INFO["seasonal.strength"]
    return FEATURE_INFO[name]


@dataclass(frozen=True)
class FeatureVector:
    """Ordered named feature values; None marks an absent entry."""

    names: tuple
    values: tuple
    periods: tuple
    flags: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, name: str) -> Optional[float]:
        return self.values[self.names.index(name)]

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))

    def present(self) -> dict:
        return {n: v for n, v in zip(self.names, self.values) if v is not None}


def validate_ranges(fv: FeatureVector) -> list:
    """Range-invariant violations (empty when all present entries conform)."""
    problems = []
    for name, value in zip(fv.names, fv.values):
        if value is None:
            continue
        if not np.isfinite(value):
            problems.append(f"{name}: non-finite value {value}")
            continue
        info = feature_info(name)
        if not info.contains(float(value)):
            problems.append(f"{name}: value {value} outside declared range")
    return problems


# Feature groups: each computes a dict of named values from the series.
# Grouping lets callers (the GA fitness in particular) request only the
# features they need without paying for the expensive fits.

def _group_of(name: str) -> str:
    if name in ("length", "nPeriods", "periods"):
        return "bookkeeping"
    if name == "ndiffs":
        return "ndiffs"
    if name == "nsdiffs":
        return "nsdiffs"
    if name in _ACF_NAMES:
        return "acf"
    if name in _PACF_NAMES:
        return "pacf"
    if name == "entropy":
        return "entropy"
    if name == "nonlinearity":
        return "nonlinearity"
    if name == "hurst":
        return "hurst"
    if name in ("stability", "lumpiness"):
        return "tiled"
    if name in ("unitroot.kpss", "unitroot.pp"):
        return "unitroot"
    if name in _SHIFT_NAMES:
        return "shifts"
    if name in _HET_NAMES:
        return "heterogeneity"
    return "stl"


def compute_feature_vector(
    ts: TimeSeries, names: Optional[Sequence[str]] = None
) -> FeatureVector:
    """Compute the canonical feature vector (or a named subset) of a series.

    Group failures mark their entries absent and record the reason in
    ``flags`` instead of failing the whole vector.
    """
    x = ts.values
    n_periods = len(ts.periods)
    period = ts.period
    all_names = canonical_names(n_periods)
    wanted = set(names) if names is not None else set(all_names)
    unknown = wanted - set(all_names)
    if unknown:
        raise ValueError(f"unknown feature names: {sorted(unknown)}")
    groups_needed = {_group_of(n) for n in wanted}

    values: dict = {}
    flags: dict = {}

    def run(group: str, fn):
        try:
            values.update(fn())
        except GratisError as exc:
            flags[group] = f"{type(exc).__name__}: {exc}"

    if "bookkeeping" in groups_needed:
        values["length"] = float(len(x))
        values["nPeriods"] = float(n_periods)
        values["periods"] = float(period)
    if "ndiffs" in groups_needed:
        run("ndiffs", lambda: {"ndiffs": float(ndiffs(x))})
    if "nsdiffs" in groups_needed:
        run("nsdiffs", lambda: {"nsdiffs": float(nsdiffs(x, period))})
    if "acf" in groups_needed:
        run("acf", lambda: acf_feature_set(x, period))
    if "pacf" in groups_needed:
        run("pacf", lambda: pacf_feature_set(x, period))
    if "entropy" in groups_needed:
        run("entropy", lambda: {"entropy": spectral_entropy(x)})
    if "nonlinearity" in groups_needed:
        run("nonlinearity", lambda: {"nonlinearity": nonlinearity(x)})
    if "hurst" in groups_needed:
        run("hurst", lambda: {"hurst": hurst(x)})
    if "tiled" in groups_needed:
        run("tiled", lambda: tiled_window_features(x, period))
    if "unitroot" in groups_needed:
        run("unitroot", lambda: unit_root_stats(x))
    if "shifts" in groups_needed:
        run("shifts", lambda: sliding_shift_features(x, period))
    if "stl" in groups_needed:
        def _stl():
            out = stl_feature_set(x, ts.periods)
            strengths = out.pop("seasonal.strength")
            named = dict(out)
            for key, value in zip(seasonal_strength_names(n_periods), strengths):
                named[key] = value
            return named

        run("stl", _stl)
    if "heterogeneity" in groups_needed:
        def _het():
            out = heterogeneity_features(x)
            if out.pop("garch_failed"):
                flags["garch"] = "GarchFitFailed: zeroed garch features"
            return out

        run("heterogeneity", _het)

    ordered_names = tuple(n for n in all_names if n in wanted)
    ordered_values = tuple(
        None if values.get(n) is None else float(values[n]) for n in ordered_names
    )
    return FeatureVector(
        names=ordered_names, values=ordered_values, periods=ts.periods, flags=flags
    )
