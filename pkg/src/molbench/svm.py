"""Soft-margin RBF SVM trained by sequential minimal optimization.

Numeric core only: kernel evaluation, the SMO dual solver with an error
cache, and sigmoid (Platt) calibration fitted by a damped Newton iteration.
Everything is deterministic; working-set scan order uses a rolling offset
instead of random restarts.
"""

from __future__ import annotations

import math

import numpy as np


class SvmConvergenceError(RuntimeError):
    """Raised when SMO exhausts its kernel-evaluation budget."""


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * squared euclidean distance) for all row pairs."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sq = (
        np.sum(x * x, axis=1)[:, None]
        + np.sum(y * y, axis=1)[None, :]
        - 2.0 * (x @ y.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def smo_solve(kernel: np.ndarray, y: np.ndarray, c_per_sample: np.ndarray,
              tol: float = 1e-3,
              max_kernel_evals: int = 10_000_000) -> tuple[np.ndarray, float]:
    """Solve the dual SVM problem; returns (alpha, bias).

    ``kernel`` is the precomputed Gram matrix, ``y`` the +/-1 labels,
    ``c_per_sample`` the per-sample box constraints.  Raises
    SvmConvergenceError when the evaluation budget runs out before the KKT
    conditions hold within ``tol``.
    """
    n = len(y)
    y = np.asarray(y, dtype=np.float64)
    c = np.asarray(c_per_sample, dtype=np.float64)
    alpha = np.zeros(n)
    bias = 0.0
    errors = -y.copy()  # f(x_i) - y_i with all-zero alpha
    evals = 0
    scan_offset = 0
    eps = 1e-12

    def take_step(i1: int, i2: int) -> bool:
        nonlocal bias, evals, errors
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = errors[i1], errors[i2]
        s = y1 * y2
        if s > 0:
            zeta = a1 + a2
            lo, hi = max(0.0, zeta - c[i1]), min(c[i2], zeta)
        else:
            zeta = a1 - a2
            lo, hi = max(0.0, -zeta), min(c[i2], c[i1] - zeta)
        if hi - lo < eps:
            return False
        k11, k12, k22 = kernel[i1, i1], kernel[i1, i2], kernel[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > eps:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, lo), hi)
        else:
            # flat direction: evaluate the dual objective at both clip ends
            f1 = y1 * (e1 + bias) - a1 * k11 - s * a2 * k12
            f2 = y2 * (e2 + bias) - s * a1 * k12 - a2 * k22
            lo1 = a1 + s * (a2 - lo)
            hi1 = a1 + s * (a2 - hi)
            obj_lo = (lo1 * f1 + lo * f2 + 0.5 * lo1 * lo1 * k11
                      + 0.5 * lo * lo * k22 + s * lo * lo1 * k12)
            obj_hi = (hi1 * f1 + hi * f2 + 0.5 * hi1 * hi1 * k11
                      + 0.5 * hi * hi * k22 + s * hi * hi1 * k12)
            if obj_lo < obj_hi - eps:
                a2_new = lo
            elif obj_hi < obj_lo - eps:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < eps * (a2_new + a2 + eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        if a1_new < eps:
            a1_new = 0.0
        elif a1_new > c[i1] - eps:
            a1_new = c[i1]
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = bias - e1 - d1 * k11 - d2 * k12
        b2 = bias - e2 - d1 * k12 - d2 * k22
        if eps < a1_new < c[i1] - eps:
            new_bias = b1
        elif eps < a2_new < c[i2] - eps:
            new_bias = b2
        else:
            new_bias = 0.5 * (b1 + b2)
        errors += d1 * kernel[i1] + d2 * kernel[i2] + (new_bias - bias)
        alpha[i1], alpha[i2] = a1_new, a2_new
        bias = new_bias
        evals += 2 * n
        return True

    def examine(i2: int) -> int:
        nonlocal scan_offset
        r2 = errors[i2] * y[i2]
        if not ((r2 < -tol and alpha[i2] < c[i2] - eps)
                or (r2 > tol and alpha[i2] > eps)):
            return 0
        non_bound = np.flatnonzero((alpha > eps) & (alpha < c - eps))
        if len(non_bound) > 1:
            i1 = int(non_bound[np.argmax(np.abs(errors[non_bound] - errors[i2]))])
            if take_step(i1, i2):
                return 1
        scan_offset += 1
        for idx in range(len(non_bound)):
            i1 = int(non_bound[(idx + scan_offset) % len(non_bound)])
            if take_step(i1, i2):
                return 1
        for idx in range(n):
            i1 = (idx + scan_offset) % n
            if take_step(i1, i2):
                return 1
        return 0

    examine_all = True
    changed = 1
    while changed > 0 or examine_all:
        changed = 0
        if examine_all:
            targets = range(n)
        else:
            targets = [int(i) for i in
                       np.flatnonzero((alpha > eps) & (alpha < c - eps))]
        for i2 in targets:
            changed += examine(i2)
            if evals > max_kernel_evals:
                raise SvmConvergenceError(
                    f"SMO did not converge within {max_kernel_evals} kernel evaluations")
        if examine_all:
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alpha, bias


def decision_values(support: np.ndarray, coef: np.ndarray, bias: float,
                    gamma: float, x: np.ndarray) -> np.ndarray:
    """Sum of coef_i * K(sv_i, x) + bias for each row of x."""
    return rbf_kernel(x, support, gamma) @ coef + bias


def fit_sigmoid(decisions: np.ndarray, labels: np.ndarray,
                max_iter: int = 100, min_step: float = 1e-10,
                ridge: float = 1e-12) -> tuple[float, float]:
    """Platt's probability calibration: fit (A, B) of 1/(1+exp(A*f+B)).

    Damped Newton iteration on the regularized maximum-likelihood target,
    following the numerically stable formulation in common use.
    """
    decisions = np.asarray(decisions, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    prior1 = int(labels.sum())
    prior0 = len(labels) - prior1
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    target = np.where(labels, hi, lo)

    def objective(a: float, b: float) -> float:
        fapb = decisions * a + b
        pos = fapb >= 0
        vals = np.empty_like(fapb)
        vals[pos] = target[pos] * fapb[pos] + np.log1p(np.exp(-fapb[pos]))
        vals[~pos] = (target[~pos] - 1.0) * fapb[~pos] + np.log1p(np.exp(fapb[~pos]))
        return float(np.sum(vals))

    a, b = 0.0, math.log((prior0 + 1.0) / (prior1 + 1.0))
    fval = objective(a, b)
    for _ in range(max_iter):
        fapb = decisions * a + b
        pos = fapb >= 0
        p = np.empty_like(fapb)
        q = np.empty_like(fapb)
        ex = np.exp(-np.abs(fapb))
        p[pos] = ex[pos] / (1.0 + ex[pos])
        q[pos] = 1.0 / (1.0 + ex[pos])
        p[~pos] = 1.0 / (1.0 + ex[~pos])
        q[~pos] = ex[~pos] / (1.0 + ex[~pos])
        d2 = p * q
        h11 = float(np.dot(decisions * decisions, d2)) + ridge
        h22 = float(np.sum(d2)) + ridge
        h21 = float(np.dot(decisions, d2))
        d1 = target - p
        g1 = float(np.dot(decisions, d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * da + g2 * db
        step = 1.0
        while step >= min_step:
            new_a, new_b = a + step * da, b + step * db
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * step * gd:
                a, b, fval = new_a, new_b, new_f
                break
            step /= 2.0
        else:
            break
    return a, b


def sigmoid_probability(decision, a: float, b: float):
    """Calibrated probability, computed stably; always inside (0, 1)."""
    fapb = np.asarray(decision, dtype=np.float64) * a + b
    out = np.where(fapb >= 0,
                   np.exp(-np.clip(fapb, 0, None)) / (1.0 + np.exp(-np.clip(fapb, 0, None))),
                   1.0 / (1.0 + np.exp(np.clip(fapb, None, 0))))
    tiny = np.finfo(np.float64).tiny
    out = np.clip(out, tiny, 1.0 - np.finfo(np.float64).epsneg)
    return out if out.ndim else float(out)
