"""Instance space: robust scaling, 2-D embeddings, and coverage analysis.

Feature matrices are robust-scaled (median/IQR) with absent cells imputed at
the column median, embedded with PCA or exact t-SNE, and compared on a
30x30 occupancy grid: the miscoverage of A over B is the fraction of all
grid cells that contain B points but no A points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyDataset
from .features import FeatureVector, canonical_names
from .tsne import tsne

DEFAULT_GRID_BINS = 30


@dataclass(frozen=True)
class FeatureMatrix:
    """Aligned feature rows; absent entries stored as NaN."""

    ids: tuple
    columns: tuple
    data: np.ndarray
    imputed: Optional[np.ndarray] = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "columns", tuple(self.columns))
        if data.ndim != 2:
            raise ValueError("data must be 2-d")
        if data.shape != (len(self.ids), len(self.columns)):
            raise ValueError("data shape must match ids x columns")

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]


def build_feature_matrix(vectors: Sequence[FeatureVector], ids=None) -> FeatureMatrix:
    """Align feature vectors on the canonical column set of the widest row."""
    if not vectors:
        raise EmptyDataset("no feature vectors")
    max_periods = max(len(fv.periods) for fv in vectors)
    columns = canonical_names(max_periods)
    if ids is None:
        ids = [str(i) for i in range(len(vectors))]
    data = np.full((len(vectors), len(columns)), np.nan)
    col_index = {name: j for j, name in enumerate(columns)}
    for i, fv in enumerate(vectors):
        for name, value in zip(fv.names, fv.values):
            if value is not None:
                data[i, col_index[name]] = value
    return FeatureMatrix(ids=tuple(ids), columns=columns, data=data)


def scale_feature_matrix(fm: FeatureMatrix) -> FeatureMatrix:
    """Per-column robust scaling: subtract median, divide by IQR (unit
    divisor when IQR is 0). Absent cells are imputed at the column median
    (scaled value 0) and flagged."""
    if fm.n_rows < 2:
        raise ValueError("scaling needs at least 2 rows")
    data = fm.data.copy()
    imputed = np.isnan(data)
    scaled = np.empty_like(data)
    for j in range(data.shape[1]):
        col = data[:, j]
        present = col[~np.isnan(col)]
        if present.size == 0:
            scaled[:, j] = 0.0
            continue
        med = float(np.median(present))
        q75, q25 = np.percentile(present, [75.0, 25.0])
        iqr = float(q75 - q25)
        divisor = iqr if iqr > 0 else 1.0
        scaled[:, j] = (np.where(np.isnan(col), med, col) - med) / divisor
    return FeatureMatrix(ids=fm.ids, columns=fm.columns, data=scaled, imputed=imputed)


@dataclass(frozen=True)
class Embedding2D:
    """Two-dimensional projection of a feature matrix."""

    points: np.ndarray
    method: str
    seed: Optional[int] = None
    hyperparameters: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must be (n, 2)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("embedding coordinates must be finite")


def pca_embed(fm: FeatureMatrix) -> Embedding2D:
    """First two principal components of the scaled matrix; deterministic,
    sign fixed by making each component's largest-magnitude loading positive.
    Rank-1 inputs embed with a zero second component."""
    if fm.n_rows < 3:
        raise ValueError("pca needs at least 3 rows")
    X = np.where(np.isnan(fm.data), 0.0, fm.data)
    X = X - X.mean(axis=0)
    u, s, vt = np.linalg.svd(X, full_matrices=False)
    flags = {}
    scores = np.zeros((fm.n_rows, 2))
    explained = []
    for comp in range(2):
        if comp >= len(s) or s[comp] <= max(s[0], 1.0) * 1e-12:
            flags["rank_deficient"] = True
            explained.append(0.0)
            continue
        loading = vt[comp]
        sign = 1.0 if loading[np.argmax(np.abs(loading))] >= 0 else -1.0
        scores[:, comp] = sign * u[:, comp] * s[comp]
        explained.append(float(s[comp] ** 2))
    return Embedding2D(
        points=scores,
        method="pca",
        hyperparameters={"explained": explained},
        flags=flags,
    )


def tsne_embed(
    fm: FeatureMatrix,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
) -> Embedding2D:
    """Exact t-SNE embedding of the scaled matrix; deterministic given seed."""
    if fm.n_rows < 4:
        raise ValueError("t-SNE needs at least 4 rows")
    X = np.where(np.isnan(fm.data), 0.0, fm.data)
    flags = {}
    cap = max((fm.n_rows - 1) / 3.0, 2.0)
    if perplexity > cap:
        flags["perplexity_capped"] = cap
        perplexity = cap
    points, kl_trace = tsne(
        X, perplexity=perplexity, iterations=iterations, seed=seed
    )
    return Embedding2D(
        points=points,
        method="tsne",
        seed=int(seed),
        hyperparameters={
            "perplexity": float(perplexity),
            "iterations": int(iterations),
            "kl_trace": [float(v) for v in kl_trace],
        },
        flags=flags,
    )


@dataclass(frozen=True)
class CoverageGrid:
    """Occupancy of two point sets over a shared nb x nb grid."""

    nb: int
    x_range: tuple
    y_range: tuple
    occupied_a: np.ndarray
    occupied_b: np.ndarray

    def miscoverage_a_over_b(self) -> float:
        return float(np.sum(~self.occupied_a & self.occupied_b)) / self.nb**2

    def miscoverage_b_over_a(self) -> float:
        return float(np.sum(~self.occupied_b & self.occupied_a)) / self.nb**2


def _axis_range(values: np.ndarray) -> tuple:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _occupancy(points: np.ndarray, x_range, y_range, nb: int) -> np.ndarray:
    occ = np.zeros((nb, nb), dtype=bool)
    ix = np.clip(
        ((points[:, 0] - x_range[0]) / (x_range[1] - x_range[0]) * nb).astype(int),
        0,
        nb - 1,
    )
    iy = np.clip(
        ((points[:, 1] - y_range[0]) / (y_range[1] - y_range[0]) * nb).astype(int),
        0,
        nb - 1,
    )
    occ[ix, iy] = True
    return occ


def coverage_grid(a: np.ndarray, b: np.ndarray, nb: int = DEFAULT_GRID_BINS) -> CoverageGrid:
    """Build the shared occupancy grid over the combined range of both sets.

    Points on the upper boundary belong to the last bin.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptyDataset("coverage needs nonempty point sets")
    if nb < 2:
        raise ValueError("nb must be >= 2")
    combined = np.vstack((a, b))
    x_range = _axis_range(combined[:, 0])
    y_range = _axis_range(combined[:, 1])
    return CoverageGrid(
        nb=nb,
        x_range=x_range,
        y_range=y_range,
        occupied_a=_occupancy(a, x_range, y_range, nb),
        occupied_b=_occupancy(b, x_range, y_range, nb),
    )


def miscoverage(a: np.ndarray, b: np.ndarray, nb: int = DEFAULT_GRID_BINS) -> float:
    """Fraction of the nb^2 grid cells occupied by B but not by A."""
    return coverage_grid(a, b, nb).miscoverage_a_over_b()
