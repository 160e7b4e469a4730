"""Independent reference implementations used as test oracles.

Everything here is deliberately scalar Python (math module, explicit
loops): it shares no code with the library's vectorized/compiled paths,
so agreement between the two is meaningful evidence.
"""

import math

from symlat import Mapping


def ref_apply(kind: Mapping, a: float) -> float:
    if kind is Mapping.SIGMOID:
        if a >= 0.0:
            return 1.0 / (1.0 + math.exp(-a))
        ea = math.exp(a)
        return ea / (1.0 + ea)
    if kind is Mapping.ABSOLUTE:
        return abs(a)
    return a if a > 0.0 else 0.0


def ref_derivative(kind: Mapping, a: float) -> float:
    if kind is Mapping.SIGMOID:
        fa = ref_apply(kind, a)
        return fa * (1.0 - fa)
    if kind is Mapping.ABSOLUTE:
        return 1.0 if a > 0.0 else -1.0
    return 1.0 if a > 0.0 else 0.0


def ref_predict(kind: Mapping, y, i: int, j: int) -> float:
    d = y.shape[1]
    total = 0.0
    for k in range(d):
        total += ref_apply(kind, float(y[i, k])) * ref_apply(kind, float(y[j, k]))
    return total


def ref_instance_loss(kind: Mapping, y, lam: float, i: int, j: int, r: float) -> float:
    d = y.shape[1]
    err = r - ref_predict(kind, y, i, j)
    penalty = 0.0
    for k in range(d):
        penalty += ref_apply(kind, float(y[i, k])) ** 2
        penalty += ref_apply(kind, float(y[j, k])) ** 2
    return 0.5 * (err * err + lam * penalty)


def ref_sgd_visit(kind: Mapping, y, lam: float, eta: float, i: int, j: int, r: float):
    """Apply one per-entry SGD step in place, all from pre-update values."""
    d = y.shape[1]
    ai = [float(y[i, k]) for k in range(d)]
    aj = [float(y[j, k]) for k in range(d)]
    fi = [ref_apply(kind, a) for a in ai]
    fj = [ref_apply(kind, a) for a in aj]
    fpi = [ref_derivative(kind, a) for a in ai]
    fpj = [ref_derivative(kind, a) for a in aj]
    e = r
    for k in range(d):
        e -= fi[k] * fj[k]
    if i == j:
        for k in range(d):
            y[i, k] = ai[k] + eta * fpi[k] * (fj[k] * e - lam * fi[k])
    else:
        for k in range(d):
            y[i, k] = ai[k] + eta * fpi[k] * (fj[k] * e - lam * fi[k])
            y[j, k] = aj[k] + eta * fpj[k] * (fi[k] * e - lam * fj[k])


def ref_sgd_pass(kind: Mapping, y, lam: float, eta: float, ii, jj, vv, order):
    """Visit the listed entries once each, in the given order."""
    for p in order:
        ref_sgd_visit(kind, y, lam, eta, int(ii[p]), int(jj[p]), float(vv[p]))


def central_difference(func, x: float, h: float = 1e-6) -> float:
    return (func(x + h) - func(x - h)) / (2.0 * h)


def rel_err(a: float, b: float, floor: float = 1e-12) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)
