"""Held-out RMSE, the tenfold cross-validation driver, and synthetic data.

The experiment protocol: fold the known entries once, then for each of the
ten rotations train ``restarts`` times and score each run on that
rotation's pooled two-fold test set.  Summaries report mean and standard
deviation over all completed (rotation x restart) runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import NUM_FOLDS, TripleStore, _store_from_canonical, make_folds
from .model import FactorState, predict_many
from .training import RestartSummary, TrainConfig, multi_restart

__all__ = [
    "EvalResult",
    "CrossValResult",
    "CSV_COLUMNS",
    "rmse",
    "cross_validate",
    "make_synthetic",
    "format_mean_std",
    "summary_table",
]

CSV_COLUMNS = (
    "dataset,mapping,d,eta,lambda,"
    "rmse_mean,rmse_std,iters_mean,iters_std,time_mean,time_std"
)


@dataclass(frozen=True)
class EvalResult:
    """RMSE over a set of held-out entry positions."""

    rmse: float
    count: int
    per_rotation: list | None = None


def rmse(state: FactorState, store: TripleStore, positions) -> EvalResult:
    """Root mean square error of the state's predictions at ``positions``."""
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size == 0:
        raise ValueError("cannot compute RMSE over an empty position set")
    residuals = store.vv[positions] - predict_many(state, store, positions)
    return EvalResult(
        rmse=float(np.sqrt(np.mean(residuals * residuals))),
        count=int(positions.size),
    )


@dataclass
class CrossValResult:
    """Everything produced by one tenfold cross-validation experiment."""

    cfg: TrainConfig
    per_rotation: list[RestartSummary]

    def _all_runs(self):
        return [run for summary in self.per_rotation for run in summary.runs]

    @property
    def completed_count(self) -> int:
        return len(self._all_runs())

    @property
    def diverged_count(self) -> int:
        return sum(s.diverged_count for s in self.per_rotation)

    def _agg(self, key):
        values = [getattr(run, key) for run in self._all_runs()]
        if not values:
            return math.nan, math.nan
        arr = np.asarray(values, dtype=np.float64)
        return float(arr.mean()), float(arr.std())

    @property
    def rmse_mean(self):
        return self._agg("test_rmse")[0]

    @property
    def rmse_std(self):
        return self._agg("test_rmse")[1]

    @property
    def iters_mean(self):
        return self._agg("converged_at")[0]

    @property
    def iters_std(self):
        return self._agg("converged_at")[1]

    @property
    def time_mean(self):
        return self._agg("wall_time")[0]

    @property
    def time_std(self):
        return self._agg("wall_time")[1]

    def csv_row(self, dataset: str, with_times: bool = False) -> str:
        """One CSV data row under :data:`CSV_COLUMNS`.

        Wall-clock statistics are environment noise, so their cells stay
        empty unless ``with_times`` is set; everything else is a pure
        function of the inputs and seeds, which keeps default output
        byte-reproducible.
        """
        fields = [
            dataset,
            self.cfg.kind.value,
            str(self.cfg.d),
            _fmt(self.cfg.eta),
            _fmt(self.cfg.lam),
            _fmt(self.rmse_mean),
            _fmt(self.rmse_std),
            _fmt(self.iters_mean),
            _fmt(self.iters_std),
        ]
        if with_times:
            fields += [_fmt(self.time_mean), _fmt(self.time_std)]
        else:
            fields += ["", ""]
        return ",".join(fields)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def cross_validate(store: TripleStore, cfg: TrainConfig, seed,
                   jobs: int = 1) -> CrossValResult:
    """Run the full tenfold protocol: every rotation, ``cfg.restarts`` runs each.

    ``seed`` controls only the fold assignment; run seeds come from
    ``cfg.seed`` as in :func:`symlat.training.multi_restart`.
    """
    plan = make_folds(store, seed)
    per_rotation = [
        multi_restart(store, plan, rotation, cfg, jobs=jobs)
        for rotation in range(NUM_FOLDS)
    ]
    return CrossValResult(cfg=cfg, per_rotation=per_rotation)


def make_synthetic(n: int, true_rank: int, density: float, noise: float, seed):
    """Generate a store with a known exact factorization, plus that factor matrix.

    A ground-truth factor matrix with Uniform(0, 1) entries defines the full
    product matrix; each upper-triangle cell (diagonal included) is kept
    independently with probability ``density``.  Gaussian noise of the given
    standard deviation is added, negatives are clipped to zero, and weights
    are scaled by the maximum into [0, 1].

    Returns ``(store, truth)`` where ``truth`` is rescaled to match the
    normalized store: with zero noise, ``truth @ truth.T`` reproduces the
    stored values.
    """
    if not 0 < density <= 1:
        raise ValueError(f"density must be in (0, 1], got {density}")
    if true_rank < 1 or n < 1:
        raise ValueError(f"need n >= 1 and true_rank >= 1, got {n}, {true_rank}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    xstar = rng.uniform(0.0, 1.0, size=(n, true_rank))
    full = xstar @ xstar.T
    iu, ju = np.triu_indices(n)
    keep = rng.random(iu.size) < density
    ii, jj = iu[keep], ju[keep]
    values = full[ii, jj]
    if noise > 0:
        values = values + rng.normal(0.0, noise, size=values.size)
        values = np.maximum(values, 0.0)
    raw_max = float(values.max()) if values.size else 1.0
    scale = raw_max if raw_max > 0 else 1.0
    store = _store_from_canonical(n, ii, jj, values / scale, scale=scale)
    return store, xstar / math.sqrt(scale)


def format_mean_std(mean: float, std: float, decimals: int = 4) -> str:
    """Render ``mean +/- std`` in report style, e.g. ``0.1298 ± 6.2E-5``."""
    sci = f"{std:.1E}".replace("E-0", "E-").replace("E+0", "E+")
    return f"{mean:.{decimals}f} ± {sci}"


def summary_table(dataset: str, result: CrossValResult) -> str:
    """Human-readable experiment summary: accuracy, iterations, and time cost."""
    lines = [
        f"{'dataset':<12}{'mapping':<10}{'RMSE':<22}{'iterations':<20}{'time (s)':<20}",
        "-" * 84,
        (
            f"{dataset:<12}{result.cfg.kind.value:<10}"
            f"{format_mean_std(result.rmse_mean, result.rmse_std):<22}"
            f"{result.iters_mean:>8.1f} ± {result.iters_std:<8.2f}  "
            f"{result.time_mean:>8.2f} ± {result.time_std:<8.2f}"
        ),
    ]
    if result.diverged_count:
        lines.append(
            f"diverged runs excluded from the averages: {result.diverged_count}"
        )
    return "\n".join(lines)
