"""
The exponential mechanism over a finite output space
====================================================

Given a base measure mu on outputs, a query f, and a concentration
parameter beta, each input x gets the distribution proportional to
mu(y) * exp(-beta * dist(f(x), y)).  Larger beta concentrates mass
near the true answer; beta = 0 ignores the query entirely.
"""

import numpy as np

from metricdp import (
    ExpMechParams,
    distribution,
    grid_space,
    identity_map,
    sample_many,
    tabulate,
    uniform_measure,
)

space = grid_space(3)
base = uniform_measure(space)
query = identity_map(space)

for beta in (0.0, 1.0, 4.0, 16.0):
    params = ExpMechParams(base=base, beta=beta, query=query)
    row = distribution(params, "0")
    print(f"beta={beta:5.1f}  P(. | x='0') =", np.round(row, 4))

# tabulate() evaluates every input at once and returns a stochastic
# matrix wrapped with both spaces, ready for auditing.
params = ExpMechParams(base=base, beta=4.0, query=query)
mech = tabulate(params)
print("\nfull table at beta=4:")
for x in space.labels:
    print(f"  x={x:>3}:", np.round(mech.row(x), 4))

# Sampling is seeded and reproducible.
draws = sample_many(params, "0", seed=7, count=20)
print("\n20 draws for x='0', seed 7:", draws)
print("same seed again:          ", sample_many(params, "0", seed=7, count=20))

# Empirical frequencies approach the exact row.
big = sample_many(params, "0", seed=1, count=50_000)
freq = [big.count(lab) / len(big) for lab in space.labels]
print("\nempirical vs exact for x='0':")
print("  empirical:", np.round(freq, 4))
print("  exact:    ", np.round(distribution(params, "0"), 4))
