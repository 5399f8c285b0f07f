"""Shared randomized-instance generators for the test suite.

Random metrics come in two flavors so the suites exercise more than one
geometry: Euclidean point clouds (axioms exact up to sqrt rounding) and
shortest-path closures of random symmetric matrices.  Both keep points
separated, so log-ratio audits stay far from floating-point cliffs.
"""

import math
from itertools import combinations

import numpy as np

from metricdp import DiscreteMeasure, FiniteMetricSpace, LipschitzMap


def cloud_metric(rng, n: int, scale: float = 1.0) -> np.ndarray:
    """Pairwise Euclidean distances of n random points in the plane,
    resampled until no two points are closer than 0.03 * scale."""
    while True:
        pts = rng.uniform(0.0, scale, size=(n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        d = np.sqrt((diff * diff).sum(axis=2))
        off = d[~np.eye(n, dtype=bool)]
        if n == 1 or off.min() >= 0.03 * scale:
            return d


def closure_metric(rng, n: int, scale: float = 1.0) -> np.ndarray:
    """Shortest-path closure of a random symmetric matrix; entries stay
    in [0.2, 1] * scale, so distances never collapse toward 0."""
    d = rng.uniform(0.2, 1.0, size=(n, n)) * scale
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def random_space(rng, n: int, scale: float = 1.0) -> FiniteMetricSpace:
    """A random n-point space, alternating between the two metric flavors."""
    make = cloud_metric if rng.integers(2) == 0 else closure_metric
    labels = [f"p{i}" for i in range(n)]
    return FiniteMetricSpace(labels, make(rng, n, scale))


def random_map(rng, domain: FiniteMetricSpace, codomain: FiniteMetricSpace) -> LipschitzMap:
    images = rng.integers(len(codomain), size=len(domain))
    table = {x: codomain.labels[int(i)] for x, i in zip(domain.labels, images)}
    return LipschitzMap(domain, codomain, table)


def random_measure(rng, space: FiniteMetricSpace, low: float = 0.1, high: float = 2.0) -> DiscreteMeasure:
    return DiscreteMeasure(space, rng.uniform(low, high, size=len(space)))


def subset_epsilon(mech) -> float:
    """Independent oracle: the audited privacy level maximized over ALL
    nonempty output subsets, not just singletons.  Exponential in the
    output size; callers keep |Y| small."""
    space = mech.input_space
    n = len(space)
    m = mech.probs.shape[1]
    subsets = [list(c) for size in range(1, m + 1) for c in combinations(range(m), size)]
    best = 0.0
    for i in range(n):
        for j in range(n):
            if i == j or space.dist[i, j] == 0.0:
                continue
            rho = float(space.dist[i, j])
            for T in subsets:
                a = float(mech.probs[i, T].sum())
                b = float(mech.probs[j, T].sum())
                if a <= 1e-300:
                    continue
                if b <= 1e-300:
                    return math.inf
                best = max(best, (math.log(a) - math.log(b)) / rho)
    return best
