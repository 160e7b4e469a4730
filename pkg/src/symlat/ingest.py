"""Parsers that turn network files into triple stores, plus store round-trip I/O.

Two input formats are supported:

* whitespace-separated edge lists (``node_a node_b weight``) with arbitrary
  string labels, such as protein-association exports;
* Matrix Market coordinate files of symmetric kind.

Weights are divided by the global maximum so stored values land in [0, 1];
the divisor is recorded as the store's scale so raw weights stay
recoverable.  Pass ``normalize=False`` to keep raw weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import TripleStore, _store_from_canonical, density

__all__ = [
    "IngestReport",
    "parse_edge_list",
    "parse_matrix_market",
    "export_store",
    "import_store",
]


@dataclass(frozen=True)
class IngestReport:
    """Dataset statistics gathered while parsing.

    ``known_count`` is the symmetric known-cell count (off-diagonal entries
    counted in both orientations), the figure usually quoted for symmetric
    datasets.
    """

    n: int
    known_count: int
    density: float
    diagonal_count: int
    raw_max: float
    scale: float

    def describe(self) -> str:
        return (
            f"entities:        {self.n}\n"
            f"known entries:   {self.known_count}\n"
            f"density:         {100.0 * self.density:.2f}%\n"
            f"diagonal count:  {self.diagonal_count}\n"
            f"raw max weight:  {self.raw_max:.6g}\n"
            f"scale divisor:   {self.scale:.6g}"
        )


def _report_for(store: TripleStore, raw_max: float) -> IngestReport:
    return IngestReport(
        n=store.n,
        known_count=store.known_count,
        density=density(store),
        diagonal_count=store.diagonal_count,
        raw_max=raw_max,
        scale=store.scale,
    )


def _normalize(values: np.ndarray, normalize: bool):
    """Return (scaled values, raw_max, scale).  A zero max leaves values as-is."""
    raw_max = float(values.max()) if values.size else 0.0
    if normalize and raw_max > 0:
        return values / raw_max, raw_max, raw_max
    return values, raw_max, 1.0


def parse_edge_list(path, normalize: bool = True):
    """Parse ``node_a node_b weight`` lines into a store.

    Labels may be arbitrary strings; they are assigned dense 0-based indices
    in order of first appearance.  A first line whose third token is not a
    number is treated as a header and skipped.  Mirrored or repeated pairs
    merge (last occurrence wins).  Returns ``(store, report, labels)``.
    """
    index_of: dict[str, int] = {}
    merged: dict[tuple[int, int], float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) != 3:
                raise ValueError(
                    f"{path}:{lineno}: expected 'node_a node_b weight', got {line.rstrip()!r}"
                )
            try:
                weight = float(tokens[2])
            except ValueError:
                if lineno == 1:
                    continue  # header line
                raise ValueError(
                    f"{path}:{lineno}: weight {tokens[2]!r} is not a number"
                ) from None
            if weight < 0:
                raise ValueError(f"{path}:{lineno}: negative weight {weight}")
            a = index_of.setdefault(tokens[0], len(index_of))
            b = index_of.setdefault(tokens[1], len(index_of))
            key = (a, b) if a <= b else (b, a)
            merged[key] = weight
    if not merged:
        raise ValueError(f"{path}: no edges found")
    labels = list(index_of)
    ii = np.fromiter((k[0] for k in merged), dtype=np.int64, count=len(merged))
    jj = np.fromiter((k[1] for k in merged), dtype=np.int64, count=len(merged))
    vv = np.fromiter(merged.values(), dtype=np.float64, count=len(merged))
    vv, raw_max, scale = _normalize(vv, normalize)
    store = _store_from_canonical(len(labels), ii, jj, vv, scale=scale)
    return store, _report_for(store, raw_max), labels


def parse_matrix_market(path, normalize: bool = True):
    """Parse a symmetric Matrix Market coordinate file into a store.

    Only the stored triangle is read (the symmetric convention), indices are
    converted from 1-based to 0-based, and pattern files get weight 1.0 per
    stored entry.  Non-symmetric kinds, non-square headers, and entry-count
    mismatches are rejected.  Returns ``(store, report)``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[0] != "%%MatrixMarket" or header[1] != "matrix":
            raise ValueError(f"{path}: not a Matrix Market file")
        layout, field, symmetry = header[2], header[3].lower(), header[4].lower()
        if layout != "coordinate":
            raise ValueError(f"{path}: only coordinate layout is supported, got {layout}")
        if symmetry != "symmetric":
            raise ValueError(
                f"{path}: matrix kind must be symmetric, got {symmetry}"
            )
        if field not in ("real", "integer", "pattern"):
            raise ValueError(f"{path}: unsupported field type {field}")
        pattern = field == "pattern"

        size_line = None
        lineno = 1
        for lineno, line in enumerate(fh, start=2):
            if line.startswith("%") or not line.strip():
                continue
            size_line = line.split()
            break
        if size_line is None:
            raise ValueError(f"{path}: missing size line")
        if len(size_line) != 3:
            raise ValueError(f"{path}:{lineno}: malformed size line")
        rows, cols, declared = (int(tok) for tok in size_line)
        if rows != cols:
            raise ValueError(f"{path}: matrix is {rows}x{cols}, not square")

        ii = np.empty(declared, dtype=np.int64)
        jj = np.empty(declared, dtype=np.int64)
        vv = np.empty(declared, dtype=np.float64)
        count = 0
        for lineno, line in enumerate(fh, start=lineno + 1):
            if line.startswith("%") or not line.strip():
                continue
            tokens = line.split()
            if len(tokens) != (2 if pattern else 3):
                raise ValueError(f"{path}:{lineno}: malformed entry line")
            if count >= declared:
                raise ValueError(
                    f"{path}: more entries than the declared {declared}"
                )
            try:
                a, b = int(tokens[0]) - 1, int(tokens[1]) - 1
                w = 1.0 if pattern else float(tokens[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed entry line") from None
            if not (0 <= a < rows and 0 <= b < rows):
                raise ValueError(
                    f"{path}:{lineno}: entry ({a + 1}, {b + 1}) exceeds header size {rows}"
                )
            if w < 0:
                raise ValueError(f"{path}:{lineno}: negative weight {w}")
            ii[count] = min(a, b)
            jj[count] = max(a, b)
            vv[count] = w
            count += 1
        if count != declared:
            raise ValueError(
                f"{path}: header declares {declared} entries but file has {count}"
            )
    vv, raw_max, scale = _normalize(vv, normalize)
    store = _store_from_canonical(rows, ii, jj, vv, scale=scale)
    return store, _report_for(store, raw_max)


def export_store(store: TripleStore, path) -> None:
    """Write a store as text: header ``n |entries| scale`` then one entry per line.

    Values use repr precision, so :func:`import_store` reproduces the store
    exactly.  Empty stores are rejected.
    """
    if len(store) == 0:
        raise ValueError("refusing to export a store with no entries")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{store.n} {len(store)} {store.scale!r}\n")
        for i, j, v in zip(store.ii, store.jj, store.vv):
            fh.write(f"{i} {j} {float(v)!r}\n")


def import_store(path) -> TripleStore:
    """Read a store written by :func:`export_store`, verifying the entry count."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}: malformed store header")
        n, declared, scale = int(header[0]), int(header[1]), float(header[2])
        if declared < 1:
            raise ValueError(f"{path}: store declares no entries")
        ii = np.empty(declared, dtype=np.int64)
        jj = np.empty(declared, dtype=np.int64)
        vv = np.empty(declared, dtype=np.float64)
        count = 0
        for lineno, line in enumerate(fh, start=2):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) != 3:
                raise ValueError(f"{path}:{lineno}: malformed entry line")
            if count >= declared:
                raise ValueError(f"{path}: more entries than the declared {declared}")
            ii[count] = int(tokens[0])
            jj[count] = int(tokens[1])
            vv[count] = float(tokens[2])
            count += 1
        if count != declared:
            raise ValueError(
                f"{path}: header declares {declared} entries but file has {count}"
            )
    return _store_from_canonical(n, ii, jj, vv, scale=scale)
