"""Nonlinearity coefficient from a linear-vs-polynomial autoregression.

Compares the sum of squared residuals of a linear AR(1) regression against
the same regression augmented with quadratic and cubic terms of the lagged
value. The statistic log(SSE_linear / SSE_nonlinear) is nonnegative and,
unlike the raw chi-square form, does not grow with the sample size.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularDesign, TooShort
from ._util import standardize


def nonlinearity(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 20:
        raise TooShort(f"nonlinearity needs length >= 20, got {n}")
    z = standardize(x)
    y = z[1:]
    lag = z[:-1]
    ones = np.ones_like(lag)
    linear = np.column_stack((ones, lag))
    augmented = np.column_stack((ones, lag, lag**2, lag**3))
    rank = np.linalg.matrix_rank(augmented)
    if rank < augmented.shape[1]:
        raise SingularDesign("collinear polynomial regressors")
    sse = []
    for design in (linear, augmented):
        beta, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ beta
        sse.append(float(resid @ resid))
    sse_linear, sse_nonlinear = sse
    if sse_nonlinear <= 0:
        return 0.0
    return max(0.0, float(np.log(sse_linear / sse_nonlinear)))
