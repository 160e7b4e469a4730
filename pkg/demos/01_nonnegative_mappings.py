"""The three nonnegative mappings and why they make constraints unnecessary.

The model never stores nonnegative factors directly.  It stores a free
parameter matrix Y and reads factors through a mapping f with f(a) >= 0
for every real a.  Whatever SGD does to Y, the factors X = f(Y) cannot
leave the nonnegative orthant, so no projection step is ever needed.
"""

import numpy as np

from symlat import Mapping, apply, derivative

probe = np.array([-1e6, -5.0, -1.0, -0.25, 0.0, 0.25, 1.0, 5.0, 1e6])

print("mapped values f(a)")
print(f"{'a':>10}" + "".join(f"{kind.value:>12}" for kind in Mapping))
for a in probe:
    row = "".join(f"{apply(kind, float(a)):>12.5g}" for kind in Mapping)
    print(f"{a:>10.3g}{row}")

print()
print("derivatives f'(a)  (note the fixed a <= 0 branches for abs/relu)")
print(f"{'a':>10}" + "".join(f"{kind.value:>12}" for kind in Mapping))
for a in probe:
    row = "".join(f"{derivative(kind, float(a)):>12.5g}" for kind in Mapping)
    print(f"{a:>10.3g}{row}")

# Nonnegativity is unconditional: sample a wide spread of raw parameters
# and confirm every mapped value is >= 0.
rng = np.random.default_rng(0)
wild = rng.normal(scale=1e3, size=100_000)
for kind in Mapping:
    mapped = apply(kind, wild)
    assert mapped.min() >= 0.0
    print(f"{kind.value:>8}: 100k wild inputs, min mapped value = {mapped.min():.3g}")

# The derivatives agree with finite differences away from the abs/relu kink.
h = 1e-6
a = rng.uniform(0.01, 3.0, size=1000) * rng.choice([-1.0, 1.0], size=1000)
for kind in Mapping:
    numeric = (apply(kind, a + h) - apply(kind, a - h)) / (2 * h)
    worst = np.max(np.abs(derivative(kind, a) - numeric))
    print(f"{kind.value:>8}: worst |analytic - finite difference| = {worst:.2e}")
