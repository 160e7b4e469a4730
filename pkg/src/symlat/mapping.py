"""Nonnegative mapping functions and their derivatives.

A mapping turns an unconstrained real parameter ``a`` into a nonnegative
factor value ``f(a)``.  Training updates the raw parameters freely; the
mapping guarantees that the factors read out of the model are >= 0 without
any projection or clipping step.  Three mappings are supported:

========  ==========================  =====================================
name      f(a)                        f'(a)
========  ==========================  =====================================
sigmoid   1 / (1 + exp(-a))           f(a) * (1 - f(a))
abs       |a|                         1 if a > 0 else -1
relu      a if a > 0 else 0           1 if a > 0 else 0
========  ==========================  =====================================

The ``a <= 0`` branches of the abs/relu derivatives (including ``a == 0``)
are fixed so that independent implementations agree bit for bit.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = ["Mapping", "apply", "derivative"]


class Mapping(enum.Enum):
    """The closed set of supported nonnegative mappings.

    Enum values double as the command-line spellings.
    """

    SIGMOID = "sigmoid"
    ABSOLUTE = "abs"
    RELU = "relu"

    @classmethod
    def from_name(cls, name: str) -> "Mapping":
        """Look up a mapping by its CLI spelling (``sigmoid``/``abs``/``relu``)."""
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(
            f"unknown mapping {name!r}; expected one of "
            + ", ".join(k.value for k in cls)
        )

    @property
    def code(self) -> int:
        """Small integer tag used by the compiled training kernel."""
        return _CODES[self]


_CODES = {Mapping.SIGMOID: 0, Mapping.ABSOLUTE: 1, Mapping.RELU: 2}


def _sigmoid(a: np.ndarray) -> np.ndarray:
    # Two-branch form: never evaluates exp on a positive argument, so it
    # cannot overflow for any finite input.
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    ea = np.exp(a[~pos])
    out[~pos] = ea / (1.0 + ea)
    return out


def apply(kind: Mapping, a):
    """Evaluate ``f(a)`` elementwise.  Accepts scalars or arrays; total on the reals."""
    arr = np.asarray(a, dtype=np.float64)
    if kind is Mapping.SIGMOID:
        out = _sigmoid(arr)
    elif kind is Mapping.ABSOLUTE:
        out = np.abs(arr)
    else:
        out = np.where(arr > 0.0, arr, 0.0)
    return float(out) if np.isscalar(a) or arr.ndim == 0 else out


def derivative(kind: Mapping, a):
    """Evaluate ``f'(a)`` elementwise, with the fixed ``a <= 0`` branch conventions."""
    arr = np.asarray(a, dtype=np.float64)
    if kind is Mapping.SIGMOID:
        fa = _sigmoid(arr)
        out = fa * (1.0 - fa)
    elif kind is Mapping.ABSOLUTE:
        out = np.where(arr > 0.0, 1.0, -1.0)
    else:
        out = np.where(arr > 0.0, 1.0, 0.0)
    return float(out) if np.isscalar(a) or arr.ndim == 0 else out
