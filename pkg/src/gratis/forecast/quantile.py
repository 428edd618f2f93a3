"""Penalized linear quantile regression solved as a linear program.

Minimizes sum_i rho_tau(y_i - a - x_i' b) + lambda * sum_j w_j |b_j| with
adaptive weights w_j = 1/(|b_hat_j| + 1e-6) from an unpenalized pilot fit.
Splitting the residuals and coefficients into nonnegative parts turns the
problem into a standard-form LP; the intercept is never penalized. The
penalty level is chosen on a grid by cross-validated check loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

DEFAULT_LAMBDAS = (0.0, 0.01, 0.1, 1.0, 10.0)


def check_loss(residuals: np.ndarray, tau: float) -> float:
    r = np.asarray(residuals, dtype=float)
    return float(np.sum(np.where(r > 0, tau * r, (tau - 1.0) * r)))


def _solve_lp(X: np.ndarray, y: np.ndarray, tau: float, penalties: np.ndarray):
    """LP core: variables [a+, a-, b+ (p), b- (p), u (n), v (n)] >= 0."""
    n, p = X.shape
    c = np.concatenate(
        (
            [0.0, 0.0],
            penalties,
            penalties,
            np.full(n, tau),
            np.full(n, 1.0 - tau),
        )
    )
    ones = np.ones((n, 1))
    eye = sparse.identity(n, format="csr")
    A_eq = sparse.hstack(
        [
            sparse.csr_matrix(ones),
            sparse.csr_matrix(-ones),
            sparse.csr_matrix(X),
            sparse.csr_matrix(-X),
            eye,
            -eye,
        ],
        format="csr",
    )
    res = linprog(c, A_eq=A_eq, b_eq=y, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"quantile LP failed: {res.message}")
    sol = res.x
    intercept = float(sol[0] - sol[1])
    beta = sol[2 : 2 + p] - sol[2 + p : 2 + 2 * p]
    return intercept, beta, float(res.fun)


@dataclass(frozen=True)
class QuantileFit:
    """Fitted penalized quantile regression."""

    intercept: float
    coefficients: np.ndarray
    tau: float
    lam: float
    adaptive_weights: np.ndarray
    dropped_columns: tuple
    objective: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.intercept + X @ self.coefficients


def _cv_folds(n: int, folds: int):
    """Deterministic contiguous folds over a fixed shuffled order."""
    order = np.random.Generator(np.random.PCG64(12345)).permutation(n)
    return np.array_split(order, folds)


def fit_quantile_lasso(
    X: np.ndarray,
    y: np.ndarray,
    tau: float = 0.5,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    folds: int = 5,
) -> QuantileFit:
    """Adaptive-lasso quantile regression with grid cross-validation.

    Zero-variance columns are dropped (coefficient 0) and reported in
    ``dropped_columns`` rather than failing the fit.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise ValueError("X must be (n, p) aligned with y")
    n, p = X.shape
    if n < p + 2:
        raise ValueError(f"need at least p + 2 = {p + 2} rows, got {n}")
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must be in (0, 1)")

    variances = X.var(axis=0)
    dropped = tuple(int(j) for j in np.flatnonzero(variances == 0.0))
    keep = np.flatnonzero(variances > 0.0)
    Xk = X[:, keep]
    pk = Xk.shape[1]

    _, pilot_beta, _ = _solve_lp(Xk, y, tau, np.zeros(pk))
    weights = 1.0 / (np.abs(pilot_beta) + 1e-6)

    lambdas = sorted(float(v) for v in lambdas)
    if pk == 0:
        lambdas = [lambdas[0]]  # intercept-only: the penalty is irrelevant
    if len(lambdas) > 1 and n > folds:
        fold_idx = _cv_folds(n, folds)
        cv_loss = []
        for lam in lambdas:
            loss = 0.0
            for hold in fold_idx:
                mask = np.ones(n, dtype=bool)
                mask[hold] = False
                a, b, _ = _solve_lp(Xk[mask], y[mask], tau, lam * weights)
                loss += check_loss(y[hold] - (a + Xk[hold] @ b), tau)
            cv_loss.append(loss)
        lam = lambdas[int(np.argmin(cv_loss))]
    else:
        lam = lambdas[0]

    intercept, beta_k, objective = _solve_lp(Xk, y, tau, lam * weights)
    beta = np.zeros(p)
    beta[keep] = beta_k
    full_weights = np.zeros(p)
    full_weights[keep] = weights
    return QuantileFit(
        intercept=intercept,
        coefficients=beta,
        tau=tau,
        lam=lam,
        adaptive_weights=full_weights,
        dropped_columns=dropped,
        objective=objective,
    )
