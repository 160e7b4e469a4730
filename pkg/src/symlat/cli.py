"""Command-line pipeline: ingest, train, cross-validate, grid-search, synthesize.

Exit codes: 0 success, 2 usage error, 3 data error, 4 divergence.
All machine-readable output is CSV and byte-reproducible for fixed seeds
and inputs (wall-clock columns are opt-in via ``--emit-times``).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .data import make_folds, split
from .evaluate import (
    CSV_COLUMNS,
    cross_validate,
    make_synthetic,
    rmse,
    summary_table,
)
from .ingest import export_store, import_store, parse_edge_list, parse_matrix_market
from .mapping import Mapping
from .model import save_checkpoint
from .training import DivergedError, TrainConfig, grid_search, train

__all__ = ["main", "entry"]


def _add_hyper_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training settings")
    group.add_argument("--dim", type=int, default=20, help="latent dimension (default 20)")
    group.add_argument("--eta", type=float, default=0.01, help="learning rate (default 0.01)")
    group.add_argument("--lambda", dest="lam", type=float, default=0.03,
                       help="regularization weight (default 0.03)")
    group.add_argument("--mapping", choices=[k.value for k in Mapping],
                       default="relu", help="nonnegative mapping (default relu)")
    group.add_argument("--max-iters", type=int, default=1000,
                       help="iteration cap (default 1000)")
    group.add_argument("--tol", type=float, default=1e-5,
                       help="stop when |RMSE delta| falls below this (default 1e-5)")
    group.add_argument("--restarts", type=int, default=20,
                       help="random restarts per rotation (default 20)")
    group.add_argument("--seed", type=int, default=1, help="base RNG seed (default 1)")
    group.add_argument("--monitor", choices=["validation", "train"],
                       default="validation",
                       help="split whose RMSE drives termination (default validation)")
    group.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="parallel worker processes (default: logical cores)")
    group.add_argument("--verbose", action="store_true",
                       help="print per-iteration progress lines")


def _cfg_from(args) -> TrainConfig:
    return TrainConfig(
        d=args.dim,
        eta=args.eta,
        lam=args.lam,
        kind=Mapping.from_name(args.mapping),
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
        restarts=args.restarts,
        monitor=args.monitor,
    )


def _comma_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symlat",
        description="Nonnegative latent-factor completion of symmetric weighted networks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="parse a network file into a store")
    p.add_argument("input", help="edge list or Matrix Market file")
    p.add_argument("-o", "--output", required=True, help="store file to write")
    p.add_argument("--format", choices=["auto", "edgelist", "matrixmarket"],
                   default="auto", help="input format (default: sniff)")
    p.add_argument("--no-normalize", action="store_true",
                   help="keep raw weights instead of scaling into [0, 1]")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic store with known factors")
    p.add_argument("-o", "--output", required=True, help="store file to write")
    p.add_argument("--n", type=int, default=200, help="entity count (default 200)")
    p.add_argument("--rank", type=int, default=4, help="true factor rank (default 4)")
    p.add_argument("--density", type=float, default=0.2,
                   help="fraction of cells kept (default 0.2)")
    p.add_argument("--noise", type=float, default=0.0,
                   help="stddev of additive noise (default 0)")
    p.add_argument("--seed", type=int, default=1, help="RNG seed (default 1)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("train", help="run one training run on one rotation")
    p.add_argument("store", help="store file from ingest/synth")
    p.add_argument("-o", "--output", required=True,
                   help="per-iteration RMSE report (CSV) to write")
    p.add_argument("--checkpoint", default=None,
                   help="factor checkpoint to write (default: <output stem>_factors.txt)")
    p.add_argument("--rotation", type=int, default=0,
                   help="which fold rotation to train on (default 0)")
    _add_hyper_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("cv", help="tenfold cross-validation experiment")
    p.add_argument("store", help="store file from ingest/synth")
    p.add_argument("-o", "--output", required=True, help="summary CSV to write")
    p.add_argument("--table", default=None, help="also write the text table here")
    p.add_argument("--dataset-name", default=None,
                   help="dataset label for the CSV (default: store file stem)")
    p.add_argument("--emit-times", action="store_true",
                   help="include measured wall-clock columns in the CSV "
                        "(breaks byte-reproducibility)")
    _add_hyper_flags(p)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("grid", help="pick (eta, lambda) by validation RMSE")
    p.add_argument("store", help="store file from ingest/synth")
    p.add_argument("-o", "--output", required=True, help="grid result CSV to write")
    p.add_argument("--etas", type=_comma_floats, required=True,
                   help="comma-separated learning rates to try")
    p.add_argument("--lambdas", type=_comma_floats, required=True,
                   help="comma-separated regularization weights to try")
    p.add_argument("--grid-max-iters", type=int, default=100,
                   help="iteration cap per grid point (default 100)")
    p.add_argument("--rotation", type=int, default=0,
                   help="rotation providing the train/validation split (default 0)")
    _add_hyper_flags(p)
    p.set_defaults(func=_cmd_grid)

    return parser


def _sniff_format(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    return "matrixmarket" if first.startswith("%%MatrixMarket") else "edgelist"


def _cmd_ingest(args) -> int:
    fmt = args.format if args.format != "auto" else _sniff_format(args.input)
    normalize = not args.no_normalize
    if fmt == "edgelist":
        store, report, labels = parse_edge_list(args.input, normalize=normalize)
        labels_path = args.output + ".labels"
        with open(labels_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(labels) + "\n")
        print(f"wrote label map to {labels_path}")
    else:
        store, report = parse_matrix_market(args.input, normalize=normalize)
    export_store(store, args.output)
    print(f"wrote store to {args.output}")
    print(report.describe())
    return 0


def _cmd_synth(args) -> int:
    store, truth = make_synthetic(args.n, args.rank, args.density, args.noise, args.seed)
    export_store(store, args.output)
    truth_path = args.output + ".truth"
    np.savetxt(truth_path, truth, fmt="%.17g")
    print(f"wrote store to {args.output} ({len(store)} entries)")
    print(f"wrote ground-truth factors to {truth_path}")
    return 0


def _progress_printer(t: int, value: float, delta: float) -> None:
    print(f"iter={t} rmse={value:.6g} delta={delta:.6g}")


def _cmd_train(args) -> int:
    store = import_store(args.store)
    cfg = _cfg_from(args)
    plan = make_folds(store, args.seed)
    train_pos, val_pos, test_pos = split(plan, args.rotation)
    progress = _progress_printer if args.verbose else None
    report = train(store, train_pos, val_pos, cfg, progress=progress)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write("iter,rmse\n")
        for t, value in enumerate(report.rmse_history, start=1):
            fh.write(f"{t},{value:.10g}\n")
    checkpoint = args.checkpoint
    if checkpoint is None:
        checkpoint = str(Path(args.output).with_suffix("")) + "_factors.txt"
    save_checkpoint(report.final_state, checkpoint, scale=store.scale)
    test_rmse = rmse(report.final_state, store, test_pos).rmse
    print(f"stopped at iteration {report.converged_at} ({report.stop_reason})")
    print(f"validation rmse: {report.rmse_history[-1]:.6g}")
    print(f"test rmse:       {test_rmse:.6g}")
    print(f"wall time:       {report.wall_time:.2f}s")
    print(f"wrote report to {args.output} and factors to {checkpoint}")
    return 0


def _cmd_cv(args) -> int:
    store = import_store(args.store)
    cfg = _cfg_from(args)
    result = cross_validate(store, cfg, seed=args.seed, jobs=args.jobs)
    if result.completed_count == 0:
        print("every run diverged; no summary to report", file=sys.stderr)
        return 4
    dataset = args.dataset_name or Path(args.store).stem
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_COLUMNS + "\n")
        fh.write(result.csv_row(dataset, with_times=args.emit_times) + "\n")
    table = summary_table(dataset, result)
    print(table)
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(table + "\n")
    print(f"wrote summary to {args.output}")
    return 0


def _cmd_grid(args) -> int:
    store = import_store(args.store)
    cfg = _cfg_from(args)
    plan = make_folds(store, args.seed)
    template = TrainConfig(
        d=cfg.d, eta=cfg.eta, lam=cfg.lam, kind=cfg.kind,
        max_iters=args.grid_max_iters, tol=cfg.tol, seed=cfg.seed,
        restarts=1, monitor=cfg.monitor,
    )
    result = grid_search(store, plan, template, args.etas, args.lambdas,
                         rotation=args.rotation, jobs=args.jobs)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write("eta,lambda,val_rmse,best\n")
        for point in result.table:
            score = "" if point.val_rmse is None else f"{point.val_rmse:.10g}"
            best = int(point.eta == result.best_eta and point.lam == result.best_lam)
            fh.write(f"{point.eta:.10g},{point.lam:.10g},{score},{best}\n")
    print(f"best eta={result.best_eta:.10g} lambda={result.best_lam:.10g} "
          f"(validation rmse {result.best_rmse:.6g})")
    print(f"wrote grid table to {args.output}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except DivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
