"""JIT-compiled inner loops with an interpreted fallback.

The per-example subgradient loop of SVM training dominates experiment
runtime (a full grid trains over a thousand binary models), so it is
compiled with numba when available. Set MAILCLASS_BACKEND=numpy to force
the interpreted path, or MAILCLASS_BACKEND=numba to require the compiled
one. Both paths run the same function source, so they agree bit for bit.
"""
from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "MAILCLASS_BACKEND"


def svm_subgradient_loop(indptr, indices, values, y, order, dim, lam, t0,
                         cost, tol, max_epochs):
    """Primal subgradient descent for the linear soft-margin objective
    0.5*||w||^2 + cost * sum_i max(0, 1 - y_i*(w.x_i + b)).

    Documents are CSR arrays (indptr/indices/values); `order` is the
    fixed visiting order for each epoch. Step size at global step t is
    1/(lam*(t + t0)); w is kept as s*v so the shrink step is O(1). The
    epoch-end objective drives the stopping rule (relative change below
    tol) and best-objective iterate tracking.

    Returns (w, b, objective, epochs_run, converged) for the best
    iterate seen at any epoch end.
    """
    n = y.shape[0]
    v = np.zeros(dim)
    s = 1.0
    b = 0.0
    t = 0
    best_obj = np.inf
    best_w = np.zeros(dim)
    best_b = 0.0
    prev_obj = np.inf
    converged = False
    epochs_run = 0
    for _epoch in range(max_epochs):
        for k in range(n):
            i = order[k]
            t += 1
            eta = 1.0 / (lam * (t + t0))
            dot = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                dot += values[j] * v[indices[j]]
            margin = y[i] * (s * dot + b)
            s *= 1.0 - 1.0 / (t + t0)
            if s < 1e-9:  # re-absorb the scale before it underflows
                for j in range(dim):
                    v[j] *= s
                s = 1.0
            if margin < 1.0:
                coef = eta * y[i] / s
                for j in range(indptr[i], indptr[i + 1]):
                    v[indices[j]] += coef * values[j]
                b += eta * y[i]
        wsq = 0.0
        for j in range(dim):
            wsq += v[j] * v[j]
        wsq *= s * s
        hinge_sum = 0.0
        for i in range(n):
            dot = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                dot += values[j] * v[indices[j]]
            h = 1.0 - y[i] * (s * dot + b)
            if h > 0.0:
                hinge_sum += h
        obj = 0.5 * wsq + cost * hinge_sum
        epochs_run += 1
        if obj < best_obj:
            best_obj = obj
            for j in range(dim):
                best_w[j] = s * v[j]
            best_b = b
        if abs(obj - prev_obj) <= tol * (1.0 + obj):
            converged = True
            break
        prev_obj = obj
    return best_w, best_b, best_obj, epochs_run, converged


svm_subgradient_loop_py = svm_subgradient_loop

_requested = os.environ.get(_ENV_VAR, "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    BACKEND = "numpy"
    svm_subgradient_loop_njit = None
else:
    try:
        import numba
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"
        svm_subgradient_loop_njit = None
    else:
        svm_subgradient_loop_njit = numba.njit(cache=True)(svm_subgradient_loop)
        svm_subgradient_loop = svm_subgradient_loop_njit
        BACKEND = "numba"
