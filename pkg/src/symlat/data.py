"""Sparse storage for symmetric nonnegative matrices and the fold machinery.

A symmetric weighted network is kept as a triple store: each undirected pair
``(i, j)`` with a known weight is stored exactly once in canonical
orientation ``i <= j``.  Because the matrix is symmetric, an off-diagonal
stored entry stands for the two known cells ``(i, j)`` and ``(j, i)``;
size and density reports account for both.

Cross-validation splits the stored entries into ten folds.  A rotation
assigns roles: one fold validates, the next two (cyclically) test, and the
remaining seven train.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Entry",
    "TripleStore",
    "FoldPlan",
    "NUM_FOLDS",
    "build_store",
    "density",
    "make_folds",
    "split",
]

logger = logging.getLogger(__name__)

NUM_FOLDS = 10


@dataclass(frozen=True)
class Entry:
    """One stored cell of the matrix, in canonical orientation ``i <= j``."""

    i: int
    j: int
    value: float


@dataclass(frozen=True)
class TripleStore:
    """Immutable canonical storage of the known entries of an n-by-n matrix.

    ``ii``, ``jj``, ``vv`` are parallel arrays: entry ``p`` is the pair
    ``(ii[p], jj[p])`` with weight ``vv[p]``.  ``scale`` is the divisor that
    was applied at ingestion; ``scale * vv`` recovers raw weights.
    """

    n: int
    ii: np.ndarray
    jj: np.ndarray
    vv: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        for name in ("ii", "jj", "vv"):
            getattr(self, name).flags.writeable = False

    def __len__(self) -> int:
        return self.ii.shape[0]

    def entry(self, pos: int) -> Entry:
        return Entry(int(self.ii[pos]), int(self.jj[pos]), float(self.vv[pos]))

    def __iter__(self):
        for p in range(len(self)):
            yield self.entry(p)

    @property
    def diagonal_count(self) -> int:
        return int(np.count_nonzero(self.ii == self.jj))

    @property
    def known_count(self) -> int:
        """Number of known cells of the full symmetric matrix.

        Off-diagonal stored entries count twice (once per orientation),
        diagonal entries once.
        """
        return 2 * len(self) - self.diagonal_count


def _store_from_canonical(n, ii, jj, vv, scale=1.0) -> TripleStore:
    """Build a store from arrays that are already canonical and deduplicated.

    Validates every store invariant; raises ValueError on the first violation.
    """
    ii = np.ascontiguousarray(ii, dtype=np.int64)
    jj = np.ascontiguousarray(jj, dtype=np.int64)
    vv = np.ascontiguousarray(vv, dtype=np.float64)
    if not (ii.shape == jj.shape == vv.shape) or ii.ndim != 1:
        raise ValueError("entry arrays must be 1-D and of equal length")
    if n < 1:
        raise ValueError(f"entity count must be >= 1, got {n}")
    if ii.size:
        if ii.min() < 0 or jj.max() >= n:
            raise ValueError(f"entry index out of range for n={n}")
        if np.any(ii > jj):
            raise ValueError("entries must be in canonical orientation i <= j")
        if vv.min() < 0:
            p = int(np.argmin(vv))
            raise ValueError(
                f"negative weight {vv[p]} at entry ({ii[p]}, {jj[p]})"
            )
        keys = ii * np.int64(n) + jj
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate (i, j) pairs in entry arrays")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return TripleStore(n=int(n), ii=ii, jj=jj, vv=vv, scale=float(scale))


def build_store(raw_entries, n: int) -> TripleStore:
    """Canonicalize raw ``(i, j, value)`` triples into a TripleStore.

    Pairs are reoriented to ``i <= j``; when the same undirected pair occurs
    more than once the last occurrence wins and a warning is logged.
    Rejects negative values and out-of-range indices, naming the offending
    triple.
    """
    if n < 1:
        raise ValueError(f"entity count must be >= 1, got {n}")
    merged: dict[tuple[int, int], float] = {}
    duplicates = 0
    for i, j, value in raw_entries:
        i, j, value = int(i), int(j), float(value)
        if value < 0:
            raise ValueError(f"negative value in triple ({i}, {j}, {value})")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"index out of range in triple ({i}, {j}, {value}): n={n}")
        key = (i, j) if i <= j else (j, i)
        if key in merged:
            duplicates += 1
        merged[key] = value
    if duplicates:
        logger.warning(
            "merged %d duplicate pair(s); kept the last occurrence of each", duplicates
        )
    ii = np.fromiter((k[0] for k in merged), dtype=np.int64, count=len(merged))
    jj = np.fromiter((k[1] for k in merged), dtype=np.int64, count=len(merged))
    vv = np.fromiter(merged.values(), dtype=np.float64, count=len(merged))
    return _store_from_canonical(n, ii, jj, vv)


def density(store: TripleStore) -> float:
    """Fraction of the n*n cells that are known.

    The numerator is the symmetric known count (off-diagonal entries twice),
    so an entirely known matrix has density 1.
    """
    return store.known_count / (store.n * store.n)


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every stored entry position to one of ten folds."""

    fold_of: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.fold_of.flags.writeable = False

    def __len__(self) -> int:
        return self.fold_of.shape[0]

    def fold_size(self, fold: int) -> int:
        return int(np.count_nonzero(self.fold_of == fold))


def make_folds(store: TripleStore, seed) -> FoldPlan:
    """Deal the store's entry positions into ten folds of near-equal size.

    Positions are shuffled with the seeded generator and then dealt
    round-robin, so fold sizes differ by at most one.  Deterministic for a
    fixed seed.
    """
    m = len(store)
    if m < NUM_FOLDS:
        raise ValueError(f"need at least {NUM_FOLDS} entries to fold, got {m}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    fold_of = np.empty(m, dtype=np.int64)
    fold_of[perm] = np.arange(m, dtype=np.int64) % NUM_FOLDS
    return FoldPlan(fold_of=fold_of)


def split(plan: FoldPlan, rotation: int):
    """Return (train, validation, test) position arrays for one rotation.

    Fold ``rotation`` validates, folds ``rotation+1`` and ``rotation+2``
    (mod 10) are pooled as the test set, and the remaining seven folds
    train.  The three sets are disjoint and cover every position.
    """
    if not 0 <= rotation < NUM_FOLDS:
        raise ValueError(f"rotation must be in 0..{NUM_FOLDS - 1}, got {rotation}")
    fold_of = plan.fold_of
    validation_fold = rotation
    test_folds = ((rotation + 1) % NUM_FOLDS, (rotation + 2) % NUM_FOLDS)
    validation = np.flatnonzero(fold_of == validation_fold)
    test = np.flatnonzero((fold_of == test_folds[0]) | (fold_of == test_folds[1]))
    train = np.flatnonzero(
        (fold_of != validation_fold)
        & (fold_of != test_folds[0])
        & (fold_of != test_folds[1])
    )
    return train, validation, test
