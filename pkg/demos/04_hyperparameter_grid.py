"""Choosing the learning rate and regularization weight on the validation fold.

Neither value can be guessed from the data alone: too small a learning
rate stalls, too large a one can blow the abs mapping up entirely (the
trainer detects the overflow and reports the point as diverged rather
than returning garbage).  The grid search scans candidate pairs with
cheap truncated runs and picks the pair with the best validation RMSE.
"""

from symlat import Mapping, TrainConfig, grid_search, make_folds, make_synthetic

store, _ = make_synthetic(n=100, true_rank=3, density=0.3, noise=0.01, seed=5)
plan = make_folds(store, seed=5)

template = TrainConfig(d=6, kind=Mapping.ABSOLUTE, max_iters=50, seed=1, restarts=1)
etas = [0.01, 0.05, 0.2, 1.0, 5.0]
lams = [0.0, 0.003, 0.03]

result = grid_search(store, plan, template, etas, lams)

print("validation RMSE per grid point ('diverged' = overflow detected):")
print(f"{'eta':>8} " + "".join(f"{lam:>12.3g}" for lam in lams))
for eta in etas:
    cells = []
    for lam in lams:
        point = next(p for p in result.table if p.eta == eta and p.lam == lam)
        cells.append(f"{point.val_rmse:>12.4f}" if point.val_rmse is not None
                     else f"{'diverged':>12}")
    print(f"{eta:>8.3g} " + "".join(cells))

print(f"\nselected: eta={result.best_eta}, lambda={result.best_lam} "
      f"(validation rmse {result.best_rmse:.4f})")
