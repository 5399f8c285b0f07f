"""The conventional exponential mechanism and its closed-form bounds.

Given a Lipschitz query f between finite metric spaces and a base measure
on the output space, each input x induces the distribution with weight
proportional to base_weight(y) * exp(-beta * output_dist(f(x), y)).
Exact distributions, deterministic seeded sampling, the 2*C*beta privacy
bound, and the temperature calibration that turns a positivity modulus
into a (gamma, delta) utility guarantee all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateMeasureError,
    NotUniformlyPositiveError,
    StructuralError,
)
from .measures import DiscreteMeasure
from .spaces import FiniteMetricSpace, LipschitzMap

# Row sums of a mechanism table must match 1 to this absolute slack.
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ExpMechParams:
    """Everything that pins down one exponential mechanism.

    ``base`` lives on the query's codomain; ``beta`` >= 0 is the
    concentration temperature (0 reproduces the normalized base,
    ignoring the input entirely).
    """

    base: DiscreteMeasure
    beta: float
    query: LipschitzMap

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be finite and nonnegative, got {self.beta}")
        if self.base.total_mass <= 0:
            raise DegenerateMeasureError("base measure has zero total mass")
        if self.base.space != self.query.codomain:
            raise StructuralError("base measure must live on the query's codomain")

    @property
    def input_space(self) -> FiniteMetricSpace:
        return self.query.domain

    @property
    def output_space(self) -> FiniteMetricSpace:
        return self.query.codomain


def distribution(params: ExpMechParams, x) -> np.ndarray:
    """Exact output distribution for input ``x``, over output labels in
    label order.

    The largest exponent over the base's support is subtracted before
    exponentiating, so calibrated betas (which grow like log(1/delta))
    cannot underflow the normalizer.
    """
    xi = params.query.image_index(x)
    exponents = -params.beta * params.output_space.dist[xi]
    support = params.base.values > 0
    if not support.any():
        raise DegenerateMeasureError("base measure has empty support")
    shift = exponents[support].max()
    weights = params.base.values * np.exp(exponents - shift)
    total = weights.sum()
    if not total > 0:
        raise DegenerateMeasureError(f"normalizer vanished for input {x!r}")
    return weights / total


class MechanismTable:
    """One exact output distribution per input point.

    Rows are validated on construction: entrywise nonnegative and summing
    to 1 within ROW_SUM_TOL.  This is both the audit subject and the
    interchange object for externally produced mechanisms.
    """

    __slots__ = ("input_space", "output_space", "probs")

    def __init__(self, input_space: FiniteMetricSpace, output_space: FiniteMetricSpace, rows):
        if isinstance(rows, dict):
            missing = [lab for lab in input_space.labels if lab not in rows]
            if missing:
                raise StructuralError(f"rows missing for inputs {missing}")
            mat = np.array([np.asarray(rows[lab], dtype=float) for lab in input_space.labels])
        else:
            mat = np.asarray(rows, dtype=float)
        if mat.shape != (len(input_space), len(output_space)):
            raise StructuralError(
                f"row matrix shape {mat.shape} does not match "
                f"{len(input_space)}x{len(output_space)} spaces"
            )
        if not np.isfinite(mat).all():
            raise StructuralError("row entries must be finite")
        if (mat < 0).any():
            raise StructuralError("row entries must be nonnegative")
        sums = mat.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_SUM_TOL
        if bad.any():
            k = int(np.argmax(bad))
            raise StructuralError(
                f"row for input {input_space.labels[k]!r} sums to {float(sums[k])}, not 1"
            )
        mat = mat.copy()
        mat.flags.writeable = False
        self.input_space = input_space
        self.output_space = output_space
        self.probs = mat

    def row(self, x) -> np.ndarray:
        return self.probs[self.input_space.index_of(x)]

    def __repr__(self):
        return f"MechanismTable({len(self.input_space)}x{len(self.output_space)})"


def tabulate(params: ExpMechParams) -> MechanismTable:
    """Materialize the mechanism as a full row-stochastic table."""
    rows = []
    for x in params.input_space.labels:
        try:
            rows.append(distribution(params, x))
        except DegenerateMeasureError as exc:
            raise DegenerateMeasureError(f"input {x!r}: {exc}") from exc
    return MechanismTable(params.input_space, params.output_space, np.array(rows))


def sample(params: ExpMechParams, x, seed: int):
    """One output label drawn from the exact distribution for ``x``.

    Inverse-CDF over label order, driven by a single uniform from a
    PCG64 generator seeded with ``seed``.  Same (params, x, seed) always
    returns the same label; there is no implicit global randomness.
    """
    return sample_many(params, x, seed, 1)[0]


def sample_many(params: ExpMechParams, x, seed: int, count: int) -> list:
    """``count`` draws from one seeded generator, as a list of labels."""
    if not (isinstance(count, int) and count >= 1):
        raise ValueError(f"count must be a positive integer, got {count}")
    probs = distribution(params, x)
    cum = np.cumsum(probs)
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    idx = np.minimum(np.searchsorted(cum, u, side="left"), len(cum) - 1)
    labels = params.output_space.labels
    return [labels[i] for i in idx]


def calibrate_beta(gamma, delta, modulus) -> float:
    """Temperature that guarantees mass >= 1 - delta within radius gamma.

    ``modulus`` is the smallest (gamma/2)-ball mass of the *probability*
    base measure.  Returns max(0, (2/gamma) * ln(1/(delta*modulus))): once
    delta*modulus >= 1 the raw base already meets the target and beta 0
    suffices (a negative temperature would invert preferences).
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if not modulus > 0:
        raise NotUniformlyPositiveError(
            f"base measure is not uniformly positive at radius gamma/2 "
            f"(modulus {modulus}); no finite temperature can meet the target"
        )
    return max(0.0, (2.0 / gamma) * math.log(1.0 / (delta * modulus)))


def privacy_bound(beta, lipschitz_c) -> float:
    """Closed-form privacy level of the mechanism: 2 * C * beta.

    Holds for every base measure; a constant query (C = 0) leaks nothing
    at any temperature.
    """
    if beta < 0 or lipschitz_c < 0:
        raise ValueError("beta and the Lipschitz constant must be nonnegative")
    return 2.0 * lipschitz_c * beta


@dataclass(frozen=True)
class TradeoffBound:
    """Constructive upper bound on the achievable privacy level at a
    utility target, with the calibration that realizes it."""

    epsilon: float
    beta: float
    modulus: float


def tradeoff_upper_bound(base: DiscreteMeasure, gamma, delta) -> TradeoffBound:
    """Best privacy level this base certifies at the (gamma, delta) target.

    Normalizes the base (the guarantee is stated for probability
    measures), reads off the modulus at gamma/2, calibrates beta, and
    applies the Lipschitz-1 privacy bound epsilon = 2 * beta.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    modulus = base.modulus(gamma / 2.0) / base.total_mass
    if not modulus > 0:
        raise NotUniformlyPositiveError(
            f"base measure is not uniformly positive at radius {gamma / 2.0:g}; "
            "no finite tradeoff bound is available from this base"
        )
    beta = calibrate_beta(gamma, delta, modulus)
    return TradeoffBound(epsilon=privacy_bound(beta, 1.0), beta=beta, modulus=modulus)


def min_database_size(eps_target, gamma, delta, modulus) -> int:
    """Smallest database size meeting a per-record budget ``eps_target``.

    Under the model where query sensitivity scales as 1/N, a database of
    N records turns a per-record budget eps into an effective budget
    N * eps, so N must be at least (tradeoff epsilon) / eps_target.
    Returns that ratio rounded up, never below 1.
    """
    if not eps_target > 0:
        raise ValueError(f"eps_target must be positive, got {eps_target}")
    eps_star = privacy_bound(calibrate_beta(gamma, delta, modulus), 1.0)
    return max(1, math.ceil(eps_star / eps_target))
