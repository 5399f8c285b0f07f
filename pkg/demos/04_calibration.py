"""
Calibrating beta to a utility target, and what it costs in privacy
==================================================================

A mechanism is (gamma, delta)-useful when every input's output lands
within gamma of the true answer with probability at least 1 - delta.
Given the worst-case (gamma/2)-ball mass m of the normalized base,
beta = (2/gamma) * ln(1/(delta*m)) suffices, and the privacy price is
at most 2*C*beta for a C-Lipschitz query.
"""

from metricdp import (
    ExpMechParams,
    audit_utility,
    calibrate_beta,
    covering_measure,
    grid_space,
    identity_map,
    min_database_size,
    tabulate,
    tradeoff_upper_bound,
)

space = grid_space(5)
base, _ = covering_measure(space)
query = identity_map(space)

gamma, delta = 0.5, 0.1
modulus = base.modulus(gamma / 2) / base.total_mass
beta = calibrate_beta(gamma, delta, modulus)
print(f"target: land within gamma={gamma} except with prob delta={delta}")
print(f"worst (gamma/2)-ball mass of the normalized base: {modulus}")
print(f"calibrated beta: {beta}")

# Audit the tabulated mechanism: the guarantee holds with real slack.
mech = tabulate(ExpMechParams(base=base, beta=beta, query=query))
rep = audit_utility(mech, query, gamma)
print(f"audited worst in-ball mass: {rep.min_mass:.6f}  (needs >= {1 - delta})")

# tradeoff_upper_bound wraps the same computation and reports the
# privacy level this beta can cost at worst.
bound = tradeoff_upper_bound(base, gamma, delta)
print(f"\nprivacy ceiling for a 1-Lipschitz query: epsilon <= {bound.epsilon}")

# Tightening either knob raises the price.
print("\n  gamma  delta   beta      epsilon")
for g, d in [(1.0, 0.5), (0.5, 0.1), (0.25, 0.1), (0.25, 0.01)]:
    b = tradeoff_upper_bound(base, g, d)
    print(f"  {g:5}  {d:5}  {b.beta:8.4f}  {b.epsilon:8.4f}")

# For counting-style queries the same arithmetic answers: how many
# records must a database hold before epsilon-DP and the utility
# target can coexist?
print("\nminimum database sizes at gamma=1, delta=0.5, full-mass base:")
for eps in (0.4, 0.2, 0.1, 0.05):
    print(f"  epsilon={eps:5}  ->  N >= {min_database_size(eps, 1.0, 0.5, 1.0)}")
