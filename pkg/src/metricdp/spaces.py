"""Finite metric spaces, balls, and Lipschitz function tables.

A space is a list of distinct labels plus a full pairwise distance matrix.
All four metric axioms are checked with an absolute slack of
``METRIC_TOL`` (pure floating-point guard; desk-scale distances are exact
or nearly so).  Distinct points at distance zero are tolerated everywhere
except where they would force an infinite Lipschitz constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidMetricError,
    NotLipschitzError,
    StructuralError,
    UnknownLabelError,
)

# Absolute slack for all metric-axiom and Lipschitz checks.
METRIC_TOL = 1e-12


@dataclass(frozen=True)
class AxiomViolation:
    """One violated metric axiom with its witnessing indices.

    ``witness`` follows the convention: nonnegativity/symmetry -> (i, j),
    zero_diagonal -> (i,), triangle -> (i, k, j) meaning
    dist[i][k] > dist[i][j] + dist[j][k].
    """

    axiom: str
    witness: tuple
    detail: str


@dataclass(frozen=True)
class MetricValidationReport:
    ok: bool
    violations: tuple = field(default_factory=tuple)

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v.axiom, "witness": list(v.witness), "detail": v.detail}
                for v in self.violations
            ],
        }


def validate_metric(dist) -> MetricValidationReport:
    """Check a square matrix against the four metric axioms.

    Returns a report listing every violation (nonnegativity, zero diagonal,
    symmetry, triangle inequality) with witnessing index tuples.  Distinct
    points at distance zero are allowed: definiteness is not an axiom here.

    Raises
    ------
    StructuralError
        If the input is not a square matrix of finite reals.  This is a
        different failure mode from an axiom violation.
    """
    try:
        mat = np.asarray(dist, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"not a numeric matrix: {exc}") from exc
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise StructuralError(f"matrix must be square, got shape {mat.shape}")
    if mat.size and not np.isfinite(mat).all():
        raise StructuralError("matrix entries must be finite")

    n = mat.shape[0]
    violations = []
    for i in range(n):
        if abs(mat[i, i]) > METRIC_TOL:
            violations.append(
                AxiomViolation("zero_diagonal", (i,), f"dist[{i}][{i}] = {mat[i, i]}")
            )
    for i in range(n):
        for j in range(n):
            if i != j and mat[i, j] < -METRIC_TOL:
                violations.append(
                    AxiomViolation("nonnegativity", (i, j), f"dist[{i}][{j}] = {mat[i, j]}")
                )
    for i in range(n):
        for j in range(i + 1, n):
            if abs(mat[i, j] - mat[j, i]) > METRIC_TOL:
                violations.append(
                    AxiomViolation(
                        "symmetry", (i, j), f"dist[{i}][{j}] = {mat[i, j]} != {mat[j, i]}"
                    )
                )
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            for j in range(n):
                if j == i or j == k:
                    continue
                if mat[i, k] > mat[i, j] + mat[j, k] + METRIC_TOL:
                    violations.append(
                        AxiomViolation(
                            "triangle",
                            (i, k, j),
                            f"dist[{i}][{k}] = {mat[i, k]} > "
                            f"{mat[i, j]} + {mat[j, k]} via {j}",
                        )
                    )
    return MetricValidationReport(ok=not violations, violations=tuple(violations))


class FiniteMetricSpace:
    """A finite metric space: distinct labels plus a distance matrix.

    The matrix is validated on construction and frozen afterwards; all
    operations on the space are pure, so instances are safe to share
    between threads.  Label order is significant: greedy scans and
    sampling both iterate points in this order.
    """

    __slots__ = ("labels", "dist", "_index")

    def __init__(self, labels, dist, _trusted=False):
        labels = list(labels)
        if not labels:
            raise StructuralError("a metric space needs at least one point")
        if len(set(labels)) != len(labels):
            raise StructuralError("labels must be distinct")
        if _trusted:
            mat = np.asarray(dist, dtype=float)
        else:
            report = validate_metric(dist)
            if not report.ok:
                first = report.violations[0]
                raise InvalidMetricError(
                    f"metric axioms violated ({first.axiom} at {first.witness}; "
                    f"{len(report.violations)} violation(s) total)",
                    report=report,
                )
            mat = np.asarray(dist, dtype=float)
        if mat.shape != (len(labels), len(labels)):
            raise StructuralError(
                f"distance matrix shape {mat.shape} does not match {len(labels)} labels"
            )
        mat = mat.copy()
        mat.flags.writeable = False
        self.labels = labels
        self.dist = mat
        self._index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self):
        return hash((tuple(self.labels), self.dist.tobytes()))

    def __repr__(self):
        return f"FiniteMetricSpace({len(self)} points, diameter={self.diameter():g})"

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown label {label!r}") from None

    def distance(self, a, b) -> float:
        return float(self.dist[self.index_of(a), self.index_of(b)])

    def ball(self, center, radius) -> list:
        """Closed ball: every label within distance ``radius`` of ``center``.

        Returned in label order (deterministic).  Closed means the boundary
        is included, so a zero-radius ball holds the center itself plus any
        distance-zero twins.
        """
        if radius < 0:
            raise ValueError(f"radius must be nonnegative, got {radius}")
        i = self.index_of(center)
        mask = self.dist[i] <= radius
        return [lab for lab, inside in zip(self.labels, mask) if inside]

    def ball_mask(self, center_index: int, radius) -> np.ndarray:
        """Boolean membership mask of the closed ball around the point at
        ``center_index``; the array index twin of :meth:`ball`."""
        return self.dist[center_index] <= radius

    def diameter(self) -> float:
        """Largest pairwise distance; 0 for a singleton."""
        return float(self.dist.max())

    def rescale(self, factor) -> "FiniteMetricSpace":
        """Multiply every distance by ``factor`` (> 0).

        Scaling preserves the metric axioms exactly, so the result skips
        re-validation (which could trip on ulp noise at large factors).
        """
        if not factor > 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        return FiniteMetricSpace(self.labels, self.dist * float(factor), _trusted=True)

    def min_positive_distance(self) -> float:
        """Smallest nonzero pairwise distance; 0.0 if there is none
        (singleton space or all points coincident)."""
        off = self.dist[self.dist > 0]
        return float(off.min()) if off.size else 0.0


def grid_space(n: int) -> FiniteMetricSpace:
    """``n`` equally spaced points on [0, 1] under absolute difference.

    Labels are the coordinate strings ("0", "0.5", "1" for n=3).  n=1
    yields the singleton at 0.
    """
    if n < 1:
        raise ValueError(f"grid size must be >= 1, got {n}")
    if n == 1:
        coords = np.array([0.0])
    else:
        coords = np.arange(n) / (n - 1)
    labels = [f"{c:g}" for c in coords]
    dist = np.abs(coords[:, None] - coords[None, :])
    return FiniteMetricSpace(labels, dist, _trusted=True)


def discrete_space(n: int) -> FiniteMetricSpace:
    """``n`` points with every off-diagonal distance equal to 1."""
    if n < 1:
        raise ValueError(f"discrete size must be >= 1, got {n}")
    dist = np.ones((n, n)) - np.eye(n)
    return FiniteMetricSpace([str(i) for i in range(n)], dist, _trusted=True)


def lipschitz_constant(domain: FiniteMetricSpace, codomain: FiniteMetricSpace, table) -> float:
    """Smallest C with codomain_dist(f(x1), f(x2)) <= C * domain_dist(x1, x2).

    ``table`` maps every domain label to a codomain label.  Constant maps
    (and singleton domains) give 0.  A pair at domain distance zero whose
    images are separated has no finite constant.

    Raises
    ------
    StructuralError
        If the table is not total on the domain.
    NotLipschitzError
        If a zero-distance pair maps to separated points.
    """
    images = _image_indices(domain, codomain, table)
    best = 0.0
    for i in range(len(domain)):
        for j in range(i + 1, len(domain)):
            rho = domain.dist[i, j]
            sigma = codomain.dist[images[i], images[j]]
            if rho == 0.0:
                if sigma > METRIC_TOL:
                    raise NotLipschitzError(
                        f"points {domain.labels[i]!r} and {domain.labels[j]!r} are at "
                        f"distance 0 but their images are {sigma:g} apart"
                    )
                continue
            best = max(best, float(sigma / rho))
    return best


def _image_indices(domain, codomain, table):
    images = []
    for lab in domain.labels:
        if lab not in table:
            raise StructuralError(f"function table missing domain label {lab!r}")
        images.append(codomain.index_of(table[lab]))
    return images


class LipschitzMap:
    """A total function table between two finite metric spaces.

    The Lipschitz constant is always computed from the table, never
    trusted from a file; a declared constant that disagrees beyond 1e-9
    is rejected, because every privacy bound downstream multiplies by it.
    """

    __slots__ = ("domain", "codomain", "table", "constant", "_image_idx")

    def __init__(self, domain: FiniteMetricSpace, codomain: FiniteMetricSpace, table,
                 declared_constant=None):
        self.domain = domain
        self.codomain = codomain
        self.table = dict(table)
        extra = set(self.table) - set(domain.labels)
        if extra:
            raise StructuralError(f"table has labels outside the domain: {sorted(map(repr, extra))}")
        self._image_idx = np.array(_image_indices(domain, codomain, self.table))
        self.constant = lipschitz_constant(domain, codomain, self.table)
        if declared_constant is not None and abs(declared_constant - self.constant) > 1e-9:
            raise StructuralError(
                f"declared Lipschitz constant {declared_constant} does not match "
                f"the computed value {self.constant}"
            )

    def __call__(self, x):
        """Image of the domain label ``x``."""
        if x not in self.table:
            raise UnknownLabelError(f"unknown label {x!r}")
        return self.table[x]

    def image_index(self, x) -> int:
        """Codomain index of f(x)."""
        return int(self._image_idx[self.domain.index_of(x)])

    def __repr__(self):
        return (f"LipschitzMap({len(self.domain)} -> {len(self.codomain)} points, "
                f"constant={self.constant:g})")


def identity_map(space: FiniteMetricSpace) -> LipschitzMap:
    """The identity on ``space`` (constant 1 for any space with two
    separated points)."""
    return LipschitzMap(space, space, {lab: lab for lab in space.labels})
