"""Shared test oracles: finite-difference gradients and naive metrics.

Both are deliberately independent re-derivations (plain loops, stdlib math)
of what the package computes vectorized, so agreement is meaningful.
"""

from __future__ import annotations

import math

import numpy as np


def finite_difference_grads(loss_fn, arrays, eps: float = 1e-5):
    """Central finite differences of loss_fn w.r.t. each array, in place."""
    grads = []
    for arr in arrays:
        grad = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            hi = loss_fn()
            flat[i] = orig - eps
            lo = loss_fn()
            flat[i] = orig
            gflat[i] = (hi - lo) / (2.0 * eps)
        grads.append(grad)
    return grads


def relative_grad_error(analytic, numeric) -> float:
    """max over arrays of ||ga - gn|| / max(||ga|| + ||gn||, tiny)."""
    worst = 0.0
    for ga, gn in zip(analytic, numeric):
        num = float(np.linalg.norm(ga - gn))
        den = max(float(np.linalg.norm(ga)) + float(np.linalg.norm(gn)), 1e-12)
        worst = max(worst, num / den)
    return worst


def naive_metrics(
    actual,
    predicted,
    zero_tol: float = 1e-8,
    keep_fraction: float = 0.95,
    rank_by_abs_error: bool = False,
):
    """Loop-and-stdlib reimplementation of all eight metrics.

    Returns a dict with the same keys as EvalReport's metric names, or None
    for a percentage metric whose every point was zero-guarded.
    """
    pct, pct_rank = [], []
    sq_pct = []
    abs_err, sq_err = [], []
    for a, p in zip(actual, predicted):
        e = a - p
        abs_err.append(abs(e))
        sq_err.append(e * e)
        if abs(a) >= zero_tol:
            pct.append(abs(e / a))
            sq_pct.append((e / a) ** 2)
            pct_rank.append(abs(e))

    def trim(terms, ranks):
        n = len(terms)
        drop = math.floor((1.0 - keep_fraction) * n + 1e-9)
        if drop >= n:
            return None
        if drop == 0:
            return list(terms)
        if rank_by_abs_error:
            order = sorted(range(n), key=lambda i: ranks[i])
            keep = sorted(order[: n - drop])
            return [terms[i] for i in keep]
        return sorted(terms)[: n - drop]

    def mean(terms):
        return sum(terms) / len(terms)

    out = {}
    if pct:
        out["mape"] = mean(pct)
        out["rmspe"] = math.sqrt(mean(sq_pct))
        kept = trim(pct, pct_rank)
        out["mape95"] = None if kept is None else mean(kept)
        kept = trim(sq_pct, pct_rank)
        out["rmspe95"] = None if kept is None else math.sqrt(mean(kept))
    else:
        out["mape"] = out["mape95"] = out["rmspe"] = out["rmspe95"] = None
    out["rmse"] = math.sqrt(mean(sq_err))
    out["mae"] = mean(abs_err)
    kept = trim(sq_err, abs_err)
    out["rmse95"] = None if kept is None else math.sqrt(mean(kept))
    kept = trim(abs_err, abs_err)
    out["mae95"] = None if kept is None else mean(kept)
    return out
