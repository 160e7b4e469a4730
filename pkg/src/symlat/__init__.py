"""symlat: nonnegative latent-factor completion of symmetric weighted networks.

The library factorizes a symmetric, sparsely observed, nonnegative matrix
as ``f(Y) f(Y)^T`` where ``Y`` is unconstrained and ``f`` is a nonnegative
mapping (sigmoid, absolute value, or relu).  Plain per-entry SGD on ``Y``
then yields nonnegative factors without any constrained optimization.
"""

from .data import (
    Entry,
    FoldPlan,
    NUM_FOLDS,
    TripleStore,
    build_store,
    density,
    make_folds,
    split,
)
from .evaluate import (
    CSV_COLUMNS,
    CrossValResult,
    EvalResult,
    cross_validate,
    format_mean_std,
    make_synthetic,
    rmse,
    summary_table,
)
from .ingest import (
    IngestReport,
    export_store,
    import_store,
    parse_edge_list,
    parse_matrix_market,
)
from .mapping import Mapping, apply, derivative
from .model import (
    FactorState,
    init,
    instance_gradient,
    instance_loss,
    load_checkpoint,
    predict,
    predict_many,
    save_checkpoint,
    total_loss,
)
from .training import (
    DivergedError,
    DivergedRun,
    GridPoint,
    GridResult,
    RestartSummary,
    RunResult,
    TrainConfig,
    TrainReport,
    grid_search,
    multi_restart,
    sgd_epoch,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Entry",
    "TripleStore",
    "FoldPlan",
    "NUM_FOLDS",
    "build_store",
    "density",
    "make_folds",
    "split",
    "Mapping",
    "apply",
    "derivative",
    "FactorState",
    "init",
    "predict",
    "predict_many",
    "instance_loss",
    "instance_gradient",
    "total_loss",
    "save_checkpoint",
    "load_checkpoint",
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
    "EvalResult",
    "CrossValResult",
    "CSV_COLUMNS",
    "rmse",
    "cross_validate",
    "make_synthetic",
    "format_mean_std",
    "summary_table",
    "IngestReport",
    "parse_edge_list",
    "parse_matrix_market",
    "export_store",
    "import_store",
]
