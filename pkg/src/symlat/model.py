"""Factor state, predictions, and the regularized squared loss.

The model keeps an n-by-d matrix ``y`` of unconstrained parameters.  The
nonnegative factor matrix is the mapped view ``x = f(y)``; a matrix cell is
predicted as the dot product of two mapped rows, so predictions are >= 0 by
construction.  The per-entry loss is

    0.5 * [ (r - x_i . x_j)^2 + lam * (|x_i|^2 + |x_j|^2) ]

summed over whichever entries are in play.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import TripleStore
from .mapping import Mapping, apply, derivative

__all__ = [
    "FactorState",
    "init",
    "predict",
    "predict_many",
    "instance_loss",
    "instance_gradient",
    "total_loss",
    "save_checkpoint",
    "load_checkpoint",
]

# Raw-parameter initialization ranges.  Identity-like mappings (abs, relu)
# start at small positive values so every unit has a live gradient; the
# sigmoid starts well into its lower tail so that d=20 predictions stay
# near the [0, 1] data scale.
_POSITIVE_INIT = (0.001, 0.1)
_SIGMOID_INIT = (-3.0, -1.0)


@dataclass
class FactorState:
    """Trainable parameters ``y`` plus the mapping and regularization weight.

    ``y`` is mutated in place by training; everything else is fixed.
    """

    y: np.ndarray
    kind: Mapping
    lam: float

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def d(self) -> int:
        return self.y.shape[1]

    def factors(self) -> np.ndarray:
        """The nonnegative factor matrix ``x = f(y)`` (computed, never stored)."""
        return apply(self.kind, self.y)

    def copy(self) -> "FactorState":
        return FactorState(y=self.y.copy(), kind=self.kind, lam=self.lam)


def init(n: int, d: int, kind: Mapping, lam: float, seed) -> FactorState:
    """Draw a fresh random state; deterministic for a fixed seed."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if lam < 0:
        raise ValueError(f"regularization weight must be >= 0, got {lam}")
    rng = np.random.default_rng(seed)
    low, high = _SIGMOID_INIT if kind is Mapping.SIGMOID else _POSITIVE_INIT
    y = rng.uniform(low, high, size=(n, d))
    return FactorState(y=y, kind=kind, lam=float(lam))


def predict(state: FactorState, i: int, j: int) -> float:
    """Predicted weight for the pair ``(i, j)``: ``f(y_i) . f(y_j)``, always >= 0."""
    n = state.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
    xi = apply(state.kind, state.y[i])
    xj = apply(state.kind, state.y[j])
    return float(xi @ xj)


def predict_many(state: FactorState, store: TripleStore, positions) -> np.ndarray:
    """Predictions for the stored entries at ``positions``, as one array."""
    positions = np.asarray(positions, dtype=np.int64)
    x = state.factors()
    return np.einsum("pk,pk->p", x[store.ii[positions]], x[store.jj[positions]])


def instance_loss(state: FactorState, i: int, j: int, r: float) -> float:
    """Regularized squared error of one known cell ``(i, j, r)``."""
    xi = apply(state.kind, state.y[i])
    xj = apply(state.kind, state.y[j])
    err = r - float(xi @ xj)
    penalty = state.lam * (float(xi @ xi) + float(xj @ xj))
    return 0.5 * (err * err + penalty)


def instance_gradient(state: FactorState, i: int, j: int, r: float):
    """Analytic gradient of :func:`instance_loss` w.r.t. rows ``y_i`` and ``y_j``.

    Returns ``(g_i, g_j)``.  Both use the shared residual
    ``e = r - f(y_i) . f(y_j)``:

        g_i[k] = f'(y_ik) * (lam * f(y_ik) - e * f(y_jk))

    and symmetrically for ``g_j``.  For a diagonal cell (``i == j``) the
    same single-row rule is applied once, treating the second occurrence of
    the row as constant, so the trainer never special-cases the diagonal.
    """
    yi = state.y[i]
    yj = state.y[j]
    fi = apply(state.kind, yi)
    fj = apply(state.kind, yj)
    e = r - float(fi @ fj)
    gi = derivative(state.kind, yi) * (state.lam * fi - e * fj)
    gj = derivative(state.kind, yj) * (state.lam * fj - e * fi)
    return gi, gj


def total_loss(state: FactorState, store: TripleStore, positions) -> float:
    """Sum of the per-entry losses over the given entry positions."""
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size == 0:
        return 0.0
    x = state.factors()
    xi = x[store.ii[positions]]
    xj = x[store.jj[positions]]
    err = store.vv[positions] - np.einsum("pk,pk->p", xi, xj)
    penalty = state.lam * (
        np.einsum("pk,pk->p", xi, xi) + np.einsum("pk,pk->p", xj, xj)
    )
    return float(0.5 * np.sum(err * err + penalty))


def save_checkpoint(state: FactorState, path, scale: float = 1.0) -> None:
    """Write the raw parameters as text: ``n d kind lam scale`` then n rows of d values.

    Only ``y`` is persisted; the factor matrix is recomputable from it.
    Values use repr-precision so the round trip is exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{state.n} {state.d} {state.kind.value} "
            f"{float(state.lam)!r} {float(scale)!r}\n"
        )
        for row in state.y:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_checkpoint(path):
    """Read a checkpoint written by :func:`save_checkpoint`.

    Returns ``(state, scale)``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 5:
            raise ValueError(f"malformed checkpoint header in {path}")
        n, d = int(header[0]), int(header[1])
        kind = Mapping.from_name(header[2])
        lam, scale = float(header[3]), float(header[4])
        y = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if y.shape != (n, d):
        raise ValueError(
            f"checkpoint body shape {y.shape} does not match header ({n}, {d})"
        )
    return FactorState(y=y, kind=kind, lam=lam), scale
