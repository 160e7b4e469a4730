"""Completing a small undirected weighted network.

Two tight communities with weak cross-links; a few within-community
weights are withheld from training.  After factorizing the observed
entries, the model's predictions for the held-out pairs should land close
to the withheld weights, and cross-community pairs should score low.
"""

import numpy as np

from symlat import (
    Mapping,
    TrainConfig,
    build_store,
    predict,
    train,
)

# Entities 0-4 form one community, 5-9 the other.
observed = []
held_out = {}
rng = np.random.default_rng(4)
for i in range(10):
    for j in range(i + 1, 10):
        same = (i < 5) == (j < 5)
        weight = rng.uniform(0.8, 1.0) if same else rng.uniform(0.0, 0.1)
        if same and len(held_out) < 4 and rng.random() < 0.25:
            held_out[(i, j)] = weight  # hide it from training
        else:
            observed.append((i, j, weight))

store = build_store(observed, n=10)
print(f"training on {len(store)} observed pairs, {len(held_out)} pairs withheld")

positions = np.arange(len(store))
validation = positions[::5]
training = np.setdiff1d(positions, validation)

cfg = TrainConfig(d=3, eta=0.1, lam=0.005, kind=Mapping.ABSOLUTE,
                  max_iters=500, tol=1e-7, seed=1, restarts=1)
report = train(store, training, validation, cfg)
state = report.final_state
print(f"stopped after {report.converged_at} iterations ({report.stop_reason}), "
      f"validation rmse {report.rmse_history[-1]:.4f}")

print("\nwithheld within-community pairs (should be high):")
for (i, j), actual in held_out.items():
    print(f"  ({i}, {j}): predicted {predict(state, i, j):.3f}, actual {actual:.3f}")

print("\nsample cross-community pairs (should be low):")
for i, j in [(0, 7), (2, 9), (4, 5)]:
    print(f"  ({i}, {j}): predicted {predict(state, i, j):.3f}")

# The factors themselves are nonnegative and interpretable as community
# affinities: each entity loads mostly on one latent direction.
x = state.factors()
assert (x >= 0).all()
print("\nfactor matrix (rows = entities):")
for i, row in enumerate(x):
    bars = " ".join(f"{v:.2f}" for v in row)
    print(f"  {i}: {bars}")
