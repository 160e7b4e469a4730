"""Compiled inner loop for per-entry SGD.

Kept separate from the orchestration code so the hot path stays small and
auditable.  The kernel mutates the parameter matrix in place and contains
no projection or clipping of any kind: factor nonnegativity comes entirely
from the mapping.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["sgd_pass"]

_SIGMOID = 0
_ABSOLUTE = 1
_RELU = 2


@njit(cache=True)
def _f(code, a):
    if code == _SIGMOID:
        # Stable two-branch form; exp never sees a positive argument.
        if a >= 0.0:
            return 1.0 / (1.0 + math.exp(-a))
        ea = math.exp(a)
        return ea / (1.0 + ea)
    elif code == _ABSOLUTE:
        return abs(a)
    else:
        return a if a > 0.0 else 0.0


@njit(cache=True)
def _fprime(code, a, fa):
    if code == _SIGMOID:
        return fa * (1.0 - fa)
    elif code == _ABSOLUTE:
        return 1.0 if a > 0.0 else -1.0
    else:
        return 1.0 if a > 0.0 else 0.0


@njit(cache=True)
def sgd_pass(y, ii, jj, vv, order, eta, lam, code):
    """Visit the entries listed in ``order`` once each, updating ``y`` in place.

    For each entry (i, j, r): the residual e = r - f(y_i) . f(y_j) and all
    mapped values are computed from pre-update parameters, then both rows
    step along the negative per-entry gradient:

        y[i, k] += eta * f'(y_ik) * (f(y_jk) * e - lam * f(y_ik))

    and the mirrored rule for row j.  A diagonal entry (i == j) applies the
    rule once.
    """
    d = y.shape[1]
    fi = np.empty(d, dtype=np.float64)
    fj = np.empty(d, dtype=np.float64)
    fpi = np.empty(d, dtype=np.float64)
    fpj = np.empty(d, dtype=np.float64)
    for t in range(order.shape[0]):
        p = order[t]
        i = ii[p]
        j = jj[p]
        e = vv[p]
        for k in range(d):
            a = y[i, k]
            b = y[j, k]
            fa = _f(code, a)
            fb = _f(code, b)
            fi[k] = fa
            fj[k] = fb
            fpi[k] = _fprime(code, a, fa)
            fpj[k] = _fprime(code, b, fb)
            e -= fa * fb
        if i == j:
            for k in range(d):
                y[i, k] += eta * fpi[k] * (fj[k] * e - lam * fi[k])
        else:
            for k in range(d):
                y[i, k] += eta * fpi[k] * (fj[k] * e - lam * fi[k])
                y[j, k] += eta * fpj[k] * (fi[k] * e - lam * fj[k])
