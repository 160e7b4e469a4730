"""Per-entry SGD training, termination rules, restarts, and grid search.

One *iteration* is a full pass over the training entries in a freshly
shuffled order.  After every iteration the monitored RMSE is recorded;
training stops when the absolute change between two consecutive values
drops below the tolerance, or when the iteration cap is reached.

Restarts and grid points are independent runs that share the read-only
store; they can execute in worker processes (``jobs > 1``) without
changing any result.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .data import FoldPlan, TripleStore, split
from .mapping import Mapping
from .model import FactorState, init, predict_many

__all__ = [
    "TrainConfig",
    "TrainReport",
    "RunResult",
    "DivergedRun",
    "RestartSummary",
    "GridPoint",
    "GridResult",
    "DivergedError",
    "sgd_epoch",
    "train",
    "multi_restart",
    "grid_search",
]


class DivergedError(RuntimeError):
    """Raised when training produces a non-finite parameter (overflow/NaN)."""

    def __init__(self, message, iteration=None, rmse_history=None):
        super().__init__(message)
        self.iteration = iteration
        self.rmse_history = rmse_history if rmse_history is not None else []


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters and termination rules for one training run."""

    d: int = 20
    eta: float = 0.01
    lam: float = 0.03
    kind: Mapping = Mapping.RELU
    max_iters: int = 1000
    tol: float = 1e-5
    seed: int = 1
    restarts: int = 20
    monitor: str = "validation"  # which split the termination RMSE tracks

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.eta}")
        if self.lam < 0:
            raise ValueError(f"regularization weight must be >= 0, got {self.lam}")
        if self.tol <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.monitor not in ("validation", "train"):
            raise ValueError(f"monitor must be 'validation' or 'train', got {self.monitor!r}")


@dataclass
class TrainReport:
    """Outcome of a single run: monitored RMSE per iteration plus the final state."""

    rmse_history: list[float]
    converged_at: int
    wall_time: float
    final_state: FactorState
    stop_reason: str  # "delta" or "max_iters"


def _rmse_of(state: FactorState, store: TripleStore, positions) -> float:
    residuals = store.vv[positions] - predict_many(state, store, positions)
    return float(np.sqrt(np.mean(residuals * residuals)))


def sgd_epoch(state, store, train_positions, eta, rng) -> FactorState:
    """One shuffled pass over ``train_positions``, updating ``state.y`` in place.

    Every entry is visited exactly once; the visit order is drawn from
    ``rng`` so repeated epochs differ.  Raises :class:`DivergedError` if the
    pass leaves any parameter non-finite.
    """
    if state.n != store.n:
        raise ValueError(
            f"state has {state.n} rows but store has {store.n} entities"
        )
    order = rng.permutation(np.asarray(train_positions, dtype=np.int64))
    _kernels.sgd_pass(
        state.y, store.ii, store.jj, store.vv, order, float(eta), state.lam,
        state.kind.code,
    )
    if not np.isfinite(state.y).all():
        raise DivergedError("non-finite parameter produced during epoch")
    return state


def train(store, train_positions, validation_positions, cfg, progress=None) -> TrainReport:
    """Run SGD until the RMSE delta drops below ``cfg.tol`` or ``cfg.max_iters`` is hit.

    ``progress``, if given, is called as ``progress(iteration, rmse, delta)``
    after every iteration.  On divergence the raised error carries the
    iteration number and the RMSE history collected so far.
    """
    train_positions = np.asarray(train_positions, dtype=np.int64)
    validation_positions = np.asarray(validation_positions, dtype=np.int64)
    if np.intersect1d(train_positions, validation_positions).size:
        raise ValueError("train and validation positions overlap")
    monitor_positions = (
        validation_positions if cfg.monitor == "validation" else train_positions
    )
    if monitor_positions.size == 0:
        raise ValueError(f"empty {cfg.monitor} set: nothing to monitor")

    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    state = init(store.n, cfg.d, cfg.kind, cfg.lam, seed=rng)
    history: list[float] = []
    stop_reason = "max_iters"
    t = 0
    for t in range(1, cfg.max_iters + 1):
        try:
            sgd_epoch(state, store, train_positions, cfg.eta, rng)
        except DivergedError as exc:
            raise DivergedError(
                f"training diverged at iteration {t}",
                iteration=t,
                rmse_history=history,
            ) from None
        history.append(_rmse_of(state, store, monitor_positions))
        delta = abs(history[-1] - history[-2]) if t >= 2 else math.nan
        if progress is not None:
            progress(t, history[-1], delta)
        if t >= 2 and delta < cfg.tol:
            stop_reason = "delta"
            break
    return TrainReport(
        rmse_history=history,
        converged_at=t,
        wall_time=time.perf_counter() - start,
        final_state=state,
        stop_reason=stop_reason,
    )


@dataclass(frozen=True)
class RunResult:
    """One completed restart."""

    seed: int
    test_rmse: float
    converged_at: int
    wall_time: float
    stop_reason: str


@dataclass(frozen=True)
class DivergedRun:
    """One restart that aborted with non-finite parameters."""

    seed: int
    iteration: int


@dataclass
class RestartSummary:
    """Aggregate over the restarts of one rotation.

    Means and standard deviations (population) cover completed runs only;
    diverged runs are listed separately.
    """

    rotation: int
    runs: list[RunResult]
    diverged: list[DivergedRun] = field(default_factory=list)

    def _agg(self, values):
        if not values:
            return math.nan, math.nan
        arr = np.asarray(values, dtype=np.float64)
        return float(arr.mean()), float(arr.std())

    @property
    def rmse_mean(self):
        return self._agg([r.test_rmse for r in self.runs])[0]

    @property
    def rmse_std(self):
        return self._agg([r.test_rmse for r in self.runs])[1]

    @property
    def iters_mean(self):
        return self._agg([r.converged_at for r in self.runs])[0]

    @property
    def iters_std(self):
        return self._agg([r.converged_at for r in self.runs])[1]

    @property
    def time_mean(self):
        return self._agg([r.wall_time for r in self.runs])[0]

    @property
    def time_std(self):
        return self._agg([r.wall_time for r in self.runs])[1]

    @property
    def diverged_count(self):
        return len(self.diverged)


def _single_run(args):
    """Train once and score the pooled test set (worker-safe, returns plain data)."""
    store, train_pos, val_pos, test_pos, cfg, seed = args
    run_cfg = replace(cfg, seed=seed, restarts=1)
    try:
        report = train(store, train_pos, val_pos, run_cfg)
    except DivergedError as exc:
        return DivergedRun(seed=seed, iteration=exc.iteration)
    return RunResult(
        seed=seed,
        test_rmse=_rmse_of(report.final_state, store, test_pos),
        converged_at=report.converged_at,
        wall_time=report.wall_time,
        stop_reason=report.stop_reason,
    )


def _map_jobs(fn, items, jobs):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def multi_restart(store, plan: FoldPlan, rotation: int, cfg: TrainConfig,
                  jobs: int = 1) -> RestartSummary:
    """Train ``cfg.restarts`` times with seeds ``cfg.seed .. cfg.seed+restarts-1``.

    Each run trains on the rotation's seven training folds, monitors its
    validation fold, and is scored on the pooled two-fold test set.
    Diverged runs are excluded from the aggregates and surfaced in the
    summary.
    """
    train_pos, val_pos, test_pos = split(plan, rotation)
    tasks = [
        (store, train_pos, val_pos, test_pos, cfg, cfg.seed + k)
        for k in range(cfg.restarts)
    ]
    outcomes = _map_jobs(_single_run, tasks, jobs)
    runs = [o for o in outcomes if isinstance(o, RunResult)]
    diverged = [o for o in outcomes if isinstance(o, DivergedRun)]
    return RestartSummary(rotation=rotation, runs=runs, diverged=diverged)


@dataclass(frozen=True)
class GridPoint:
    """Validation RMSE of one (eta, lam) candidate; rmse is None if it diverged."""

    eta: float
    lam: float
    val_rmse: float | None


@dataclass
class GridResult:
    best_eta: float
    best_lam: float
    best_rmse: float
    table: list[GridPoint]


def _grid_run(args):
    store, train_pos, val_pos, cfg = args
    try:
        report = train(store, train_pos, val_pos, cfg)
    except DivergedError:
        return None
    return _rmse_of(report.final_state, store, val_pos)


def grid_search(store, plan: FoldPlan, cfg_template: TrainConfig,
                eta_grid, lambda_grid, rotation: int = 0,
                jobs: int = 1) -> GridResult:
    """Pick the (eta, lam) pair with the lowest final validation RMSE.

    One single-restart run per grid point, all on the same rotation of the
    plan (use a reduced ``max_iters`` in the template to keep scans cheap).
    Ties break toward the smaller eta, then the smaller lam.  Raises
    :class:`DivergedError` if every point diverges.
    """
    eta_grid = list(eta_grid)
    lambda_grid = list(lambda_grid)
    if not eta_grid or not lambda_grid:
        raise ValueError("grids must be nonempty")
    train_pos, val_pos, _ = split(plan, rotation)
    pairs = [(eta, lam) for eta in eta_grid for lam in lambda_grid]
    tasks = [
        (store, train_pos, val_pos, replace(cfg_template, eta=eta, lam=lam, restarts=1))
        for eta, lam in pairs
    ]
    scores = _map_jobs(_grid_run, tasks, jobs)
    table = [
        GridPoint(eta=eta, lam=lam, val_rmse=score)
        for (eta, lam), score in zip(pairs, scores)
    ]
    survivors = [p for p in table if p.val_rmse is not None]
    if not survivors:
        raise DivergedError("all grid points diverged")
    best = min(survivors, key=lambda p: (p.val_rmse, p.eta, p.lam))
    return GridResult(
        best_eta=best.eta, best_lam=best.lam, best_rmse=best.val_rmse, table=table
    )
