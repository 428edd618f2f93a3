"""Exact (dense) t-SNE with seeded, reproducible gradient descent.

Affinities come from per-point Gaussian kernels calibrated by bisection to a
target perplexity; the embedding is optimized with early exaggeration,
momentum switching, and per-parameter gain adaptation. Everything is
deterministic given the seed.

Complexity is O(n^2) per iteration. Pairwise buffers are preallocated and
reused, and float32 storage kicks in for large inputs so corpora around 10^4
points stay within desk-scale memory.
"""

from __future__ import annotations

import numpy as np

from .rng import stream

EARLY_EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_SWITCH_ITER = 250
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
_ENTROPY_TOL = 1e-5
_BLOCK = 512
_FLOAT32_THRESHOLD = 2048


def _calibrated_affinities(X: np.ndarray, perplexity: float, dtype) -> np.ndarray:
    """Row-stochastic conditional affinities hitting the target perplexity.

    Bisects each row's precision until the Gaussian kernel entropy matches
    log(perplexity) within 1e-5, processing rows in blocks to bound memory.
    """
    n = X.shape[0]
    target = np.log(perplexity)
    Xd = X.astype(dtype)
    sq = np.einsum("ij,ij->i", Xd, Xd)
    P = np.empty((n, n), dtype=dtype)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        rows = hi - lo
        block = (sq[lo:hi, None] + sq[None, :] - 2.0 * (Xd[lo:hi] @ Xd.T)).astype(
            np.float64
        )
        np.maximum(block, 0.0, out=block)
        row_idx = np.arange(rows)
        self_idx = np.arange(lo, hi)
        block[row_idx, self_idx] = 0.0  # self-weight is zeroed after exp
        self_col = self_idx - 0  # absolute column of each row's self entry

        def kernel(rows_sel, beta_sel):
            W = np.exp(-block[rows_sel] * beta_sel[:, None])
            W[np.arange(len(rows_sel)), self_col[rows_sel]] = 0.0
            return W

        beta = np.ones(rows)
        beta_min = np.full(rows, -np.inf)
        beta_max = np.full(rows, np.inf)
        active = np.arange(rows)
        for _ in range(100):
            W = kernel(active, beta[active])
            sumW = np.maximum(W.sum(axis=1), 1e-300)
            H = np.log(sumW) + beta[active] * (block[active] * W).sum(axis=1) / sumW
            diff = H - target
            still = np.abs(diff) >= _ENTROPY_TOL
            remaining = active[still]
            if remaining.size == 0:
                break
            too_high = diff[still] > 0  # entropy too large -> sharpen the kernel
            up = remaining[too_high]
            down = remaining[~too_high]
            beta_min[up] = beta[up]
            beta_max[down] = beta[down]
            beta[up] = np.where(
                np.isinf(beta_max[up]), beta[up] * 2.0, (beta[up] + beta_max[up]) / 2.0
            )
            beta[down] = np.where(
                np.isinf(beta_min[down]),
                beta[down] / 2.0,
                (beta[down] + beta_min[down]) / 2.0,
            )
            active = remaining
        W = kernel(np.arange(rows), beta)
        P[lo:hi] = (W / np.maximum(W.sum(axis=1, keepdims=True), 1e-300)).astype(dtype)
    return P


def conditional_affinities(X: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-stochastic affinity matrix (each row sums to 1)."""
    return _calibrated_affinities(np.asarray(X, dtype=float), perplexity, np.float64)


def _kl_divergence(P: np.ndarray, num: np.ndarray, z: float) -> float:
    """KL(P || Q) with Q = num / z, accumulated in row blocks."""
    total = 0.0
    n = P.shape[0]
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        p = P[lo:hi].astype(np.float64)
        q = np.maximum(num[lo:hi].astype(np.float64) / z, 1e-12)
        total += float(np.sum(p * (np.log(np.maximum(p, 1e-300)) - np.log(q))))
    return total


def tsne(
    X: np.ndarray,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    learning_rate: float = None,
):
    """Embed rows of X into 2 dimensions.

    Returns (Y, kl_trace); kl_trace holds the KL divergence at every
    iteration after early exaggeration ends.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 4:
        raise ValueError("t-SNE needs at least 4 rows")
    perplexity = float(min(perplexity, max((n - 1) / 3.0, 2.0)))
    if learning_rate is None:
        learning_rate = max(50.0, n / 12.0)
    dtype = np.float32 if n > _FLOAT32_THRESHOLD else np.float64

    cond = _calibrated_affinities(X, perplexity, dtype)
    P = cond + cond.T
    del cond
    P /= P.sum()
    np.maximum(P, 1e-12, out=P)

    rng = stream(seed)
    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    velocity = np.zeros_like(Y)
    gains = np.ones_like(Y)
    kl_trace = []

    num = np.empty((n, n), dtype=dtype)
    scratch = np.empty((n, n), dtype=dtype)
    P_run = P * dtype(EARLY_EXAGGERATION) if iterations > 0 else P

    for it in range(iterations):
        if it == EXAGGERATION_ITERS:
            P_run = P
        momentum = MOMENTUM_EARLY if it < MOMENTUM_SWITCH_ITER else MOMENTUM_LATE

        Yd = Y.astype(dtype)
        sq = np.einsum("ij,ij->i", Yd, Yd)
        np.matmul(Yd, Yd.T, out=num)
        num *= dtype(-2.0)
        num += sq[:, None]
        num += sq[None, :]
        np.maximum(num, 0.0, out=num)
        num += dtype(1.0)
        np.reciprocal(num, out=num)
        np.fill_diagonal(num, 0.0)
        z = max(float(num.sum(dtype=np.float64)), 1e-300)

        # scratch = (P_run - num/z) * num, the gradient weight matrix
        np.divide(num, dtype(z), out=scratch)
        np.subtract(P_run, scratch, out=scratch)
        scratch *= num

        row = scratch.sum(axis=1, dtype=np.float64)
        grad = 4.0 * (row[:, None] * Y - (scratch @ Yd).astype(np.float64))

        sign_agree = np.sign(grad) == np.sign(velocity)
        gains = np.where(sign_agree, gains * 0.8, gains + 0.2)
        np.maximum(gains, 0.01, out=gains)
        velocity = momentum * velocity - learning_rate * gains * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)

        if it >= EXAGGERATION_ITERS:
            kl_trace.append(_kl_divergence(P, num, z))

    return Y, np.asarray(kl_trace)
