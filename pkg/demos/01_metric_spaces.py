"""
Finite metric spaces: validation, balls, and Lipschitz maps
===========================================================

Every object downstream (measures, mechanisms, audits) sits on a
finite metric space, so the library refuses to build one from a bad
matrix.  This script shows the validator's witnesses, closed balls,
and how sensitivity of a query is just its Lipschitz constant.
"""

from metricdp import (
    FiniteMetricSpace,
    LipschitzMap,
    grid_space,
    lipschitz_constant,
    validate_metric,
)

# A deliberately broken matrix: d(a,c) = 5 is longer than the detour
# through b (1 + 1 = 2), so the triangle inequality fails.
labels = ["a", "b", "c"]
bad = [
    [0.0, 1.0, 5.0],
    [1.0, 0.0, 1.0],
    [5.0, 1.0, 0.0],
]
report = validate_metric(bad)
print("broken matrix ok?", report.ok)
for v in report.violations:
    print("  violation:", v.axiom, "witness", v.witness, "-", v.detail)

# Fix the long edge and the same matrix passes.
bad[0][2] = bad[2][0] = 2.0
print("repaired matrix ok?", validate_metric(bad).ok)

space = FiniteMetricSpace(labels, bad)
print("diameter:", space.diameter())
print("closed 1-ball around 'a':", space.ball("a", 1.0))

# grid_space(n) is n evenly spaced points on [0, 1].
g5 = grid_space(5)
print("grid5 labels:", g5.labels)
print("ball of radius 0.25 around '0.5':", g5.ball("0.5", 0.25))

# The Lipschitz constant of a map between spaces is the largest ratio
# of image distance to input distance.  Rounding each grid5 point to
# an endpoint sends the neighbors 0.5 and 0.75 to opposite ends: their
# images are 4 times as far apart as they are, so the constant is 4.
rounding = {"0": "0", "0.25": "0", "0.5": "0", "0.75": "1", "1": "1"}
c = lipschitz_constant(g5, g5, rounding)
print("rounding map constant:", c)

# LipschitzMap bundles the table with its computed constant.
query = LipschitzMap(g5, g5, rounding)
print("query('0.75') =", query("0.75"), " constant =", query.constant)
