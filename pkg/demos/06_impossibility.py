"""
Lower bounds: when utility forces a minimum epsilon
===================================================

If a mechanism is accurate on inputs whose true answers sit in
pairwise disjoint balls (each self-ball holds more than half the
mass), its rows are provably distinguishable and no epsilon below
ln(mass_self / mass_ref) / dist can hold.  On N well-separated
points, accuracy alone forces epsilon >= ln(N/2): privacy cannot be
had for free, and the floor grows with the space.
"""

import math

from metricdp import (
    ExpMechParams,
    audit_privacy,
    discrete_space,
    identity_map,
    impossibility_lower_bound,
    propose_centers,
    grid_space,
    tabulate,
    uniform_measure,
)

# N points, all at distance 1.  beta = ln(2(N-1)) keeps every
# self-ball mass at 2/3, comfortably over the 0.5 hypothesis.
print("  N   beta      eps_lower   floor ln(N/2)   audited eps")
for n in (4, 8, 16, 32):
    space = discrete_space(n)
    beta = math.log(2 * (n - 1))
    mech = tabulate(ExpMechParams(base=uniform_measure(space), beta=beta,
                                  query=identity_map(space)))
    rep = impossibility_lower_bound(mech, identity_map(space),
                                    list(space.labels), 0.5)
    audited = audit_privacy(mech).epsilon_max
    print(f"  {n:2d}  {beta:7.4f}  {rep.eps_lower:10.4f}  {math.log(n / 2):13.4f}"
          f"  {audited:12.4f}")

# The witness says which center is cheapest to confuse with the
# reference, and the two ball masses behind the ratio.
space = discrete_space(8)
mech = tabulate(ExpMechParams(base=uniform_measure(space), beta=math.log(14),
                              query=identity_map(space)))
rep = impossibility_lower_bound(mech, identity_map(space), list(space.labels), 0.5)
w = rep.witness_index
print("\nN=8 witness center index:", w,
      " self mass:", round(rep.ball_mass_self[w], 4),
      " reference mass:", round(rep.ball_mass_ref[w], 4))

# propose_centers picks a maximal set of inputs whose images are
# 2r-separated, i.e. inputs eligible for the argument above.
g9 = grid_space(9)
centers = propose_centers(identity_map(g9), 0.25)
print("\neligible centers on grid9 at r=0.25:", centers)
