import math
from bisect import bisect_left

import numpy as np
import pytest

from conftest import random_map, random_measure, random_space
from metricdp import (
    DegenerateMeasureError,
    DiscreteMeasure,
    ExpMechParams,
    LipschitzMap,
    MechanismTable,
    NotUniformlyPositiveError,
    StructuralError,
    calibrate_beta,
    discrete_space,
    distribution,
    grid_space,
    identity_map,
    min_database_size,
    privacy_bound,
    sample,
    sample_many,
    tabulate,
    tradeoff_upper_bound,
    uniform_measure,
)

# Exact rows of the 3-point grid mechanism with uniform base and beta=1,
# frozen from an independent evaluation of exp(-|x-y|) normalized per row.
X3_ROW_0 = [0.506480391055654, 0.3071958857184984, 0.1863237232258476]
X3_ROW_HALF = [0.274068619061197, 0.45186276187760605, 0.274068619061197]


def x3_params(beta=1.0):
    s = grid_space(3)
    return ExpMechParams(base=uniform_measure(s), beta=beta, query=identity_map(s))


class TestParams:
    def test_beta_must_be_finite_nonnegative(self):
        with pytest.raises(ValueError):
            x3_params(beta=-0.5)
        with pytest.raises(ValueError):
            x3_params(beta=math.nan)

    def test_zero_mass_base_rejected(self):
        s = grid_space(3)
        base = DiscreteMeasure(s, [0.0, 0.0, 0.0])
        with pytest.raises(DegenerateMeasureError):
            ExpMechParams(base=base, beta=1.0, query=identity_map(s))

    def test_base_must_live_on_codomain(self):
        with pytest.raises(StructuralError):
            ExpMechParams(base=uniform_measure(grid_space(4)), beta=1.0,
                          query=identity_map(grid_space(3)))

    def test_space_properties(self):
        p = x3_params()
        assert p.input_space == grid_space(3)
        assert p.output_space == grid_space(3)


class TestDistribution:
    def test_x3_frozen_rows(self):
        p = x3_params()
        assert distribution(p, "0") == pytest.approx(X3_ROW_0, abs=1e-15)
        assert distribution(p, "0.5") == pytest.approx(X3_ROW_HALF, abs=1e-15)
        assert distribution(p, "1") == pytest.approx(X3_ROW_0[::-1], abs=1e-15)

    def test_beta_zero_reproduces_the_base(self):
        s = grid_space(4)
        base = DiscreteMeasure(s, [1.0, 2.0, 3.0, 4.0])
        p = ExpMechParams(base=base, beta=0.0, query=identity_map(s))
        for x in s.labels:
            assert distribution(p, x) == pytest.approx(base.values / 10.0)

    def test_rows_are_distributions(self):
        rng = np.random.default_rng(61)
        for _ in range(30):
            dom = random_space(rng, int(rng.integers(2, 9)))
            cod = random_space(rng, int(rng.integers(2, 9)))
            p = ExpMechParams(base=random_measure(rng, cod),
                              beta=float(rng.uniform(0, 20)),
                              query=random_map(rng, dom, cod))
            for x in dom.labels:
                row = distribution(p, x)
                assert (row >= 0).all()
                assert row.sum() == pytest.approx(1.0, abs=1e-12)

    def test_huge_beta_does_not_underflow(self):
        p = x3_params(beta=800.0)
        row = distribution(p, "0")
        assert np.isfinite(row).all()
        assert row[0] == pytest.approx(1.0)

    def test_zero_weight_points_get_zero_probability(self):
        s = grid_space(3)
        base = DiscreteMeasure(s, [0.0, 1.0, 1.0])
        p = ExpMechParams(base=base, beta=700.0, query=identity_map(s))
        row = distribution(p, "0")
        # the shift tracks the base support, so the nearest supported
        # point wins even when the true image has weight zero
        assert row[0] == 0.0
        assert row[1] == pytest.approx(1.0)

    def test_larger_distance_never_gets_more_mass(self):
        p = x3_params(beta=2.3)
        row = distribution(p, "0")
        assert row[0] > row[1] > row[2]


class TestMechanismTable:
    def test_from_dict_rows(self):
        s = grid_space(2)
        t = MechanismTable(s, s, {"0": [0.7, 0.3], "1": [0.2, 0.8]})
        assert t.row("1") == pytest.approx([0.2, 0.8])

    def test_missing_row(self):
        s = grid_space(2)
        with pytest.raises(StructuralError, match="missing"):
            MechanismTable(s, s, {"0": [1.0, 0.0]})

    def test_row_sum_violation_names_the_input(self):
        s = grid_space(2)
        with pytest.raises(StructuralError, match="'1'"):
            MechanismTable(s, s, [[0.5, 0.5], [0.6, 0.6]])

    def test_negative_entry(self):
        s = grid_space(2)
        with pytest.raises(StructuralError):
            MechanismTable(s, s, [[1.1, -0.1], [0.5, 0.5]])

    def test_shape_mismatch(self):
        with pytest.raises(StructuralError):
            MechanismTable(grid_space(2), grid_space(3), [[0.5, 0.5], [0.5, 0.5]])

    def test_rows_frozen(self):
        t = tabulate(x3_params())
        with pytest.raises(ValueError):
            t.probs[0, 0] = 0.9

    def test_row_sum_tolerance(self):
        s = grid_space(2)
        t = MechanismTable(s, s, [[0.5, 0.5 + 1e-10], [0.5, 0.5]])
        assert t.row("0")[1] == 0.5 + 1e-10


class TestTabulate:
    def test_matches_distribution(self):
        p = x3_params(beta=3.7)
        t = tabulate(p)
        for x in p.input_space.labels:
            assert t.row(x) == pytest.approx(distribution(p, x), abs=0)

    def test_partial_support_base_tabulates(self):
        # rows normalize over the base's support even when the true image
        # carries no base weight
        s = grid_space(3)
        base = DiscreteMeasure(s, [0.0, 0.0, 1.0])
        p = ExpMechParams(base=base, beta=5.0, query=identity_map(s))
        t = tabulate(p)
        assert t.row("0")[2] == pytest.approx(1.0)


class TestSampling:
    def test_deterministic(self):
        p = x3_params()
        a = sample_many(p, "0.5", seed=7, count=50)
        b = sample_many(p, "0.5", seed=7, count=50)
        assert a == b

    def test_single_draw_is_first_of_many(self):
        p = x3_params()
        assert sample(p, "0", seed=42) == sample_many(p, "0", seed=42, count=10)[0]

    def test_different_seeds_differ(self):
        p = x3_params()
        a = sample_many(p, "0.5", seed=1, count=100)
        b = sample_many(p, "0.5", seed=2, count=100)
        assert a != b

    def test_inverse_cdf_against_manual_oracle(self):
        p = x3_params(beta=1.7)
        probs = distribution(p, "0.5")
        cum = list(np.cumsum(probs))
        u = np.random.default_rng(99).random(200)
        expected = [p.output_space.labels[min(bisect_left(cum, v), 2)] for v in u]
        assert sample_many(p, "0.5", seed=99, count=200) == expected

    def test_count_validation(self):
        p = x3_params()
        with pytest.raises(ValueError):
            sample_many(p, "0", seed=1, count=0)

    def test_point_mass_always_returns_it(self):
        s = grid_space(3)
        base = DiscreteMeasure(s, [0.0, 1.0, 0.0])
        p = ExpMechParams(base=base, beta=2.0, query=identity_map(s))
        assert set(sample_many(p, "1", seed=5, count=30)) == {"0.5"}


class TestCalibration:
    def test_two_ln_two(self):
        assert calibrate_beta(1.0, 0.5, 1.0) == pytest.approx(2 * math.log(2), abs=1e-15)

    def test_x3_anchor(self):
        # gamma 0.5, delta 0.1, modulus 1/3: beta = 4 ln 30
        beta = calibrate_beta(0.5, 0.1, 1.0 / 3.0)
        assert beta == pytest.approx(13.604789526648622, abs=1e-12)

    def test_generous_target_clamps_to_zero(self):
        # delta * modulus above 1 would invert preferences; clamp instead
        assert calibrate_beta(1.0, 0.6, 2.0) == 0.0

    def test_range_validation(self):
        with pytest.raises(ValueError):
            calibrate_beta(0.0, 0.5, 1.0)
        with pytest.raises(ValueError):
            calibrate_beta(1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            calibrate_beta(1.0, 1.0, 1.0)

    def test_zero_modulus_is_not_uniformly_positive(self):
        with pytest.raises(NotUniformlyPositiveError):
            calibrate_beta(1.0, 0.5, 0.0)

    def test_calibrated_mechanism_meets_the_target(self):
        from metricdp import audit_utility
        rng = np.random.default_rng(67)
        for _ in range(15):
            s = random_space(rng, int(rng.integers(2, 9)))
            base = random_measure(rng, s, low=0.2)
            gamma = float(rng.uniform(0.2, 1.0)) * max(s.diameter(), 0.5)
            delta = float(rng.uniform(0.05, 0.5))
            m = base.modulus(gamma / 2) / base.total_mass
            beta = calibrate_beta(gamma, delta, m)
            mech = tabulate(ExpMechParams(base=base, beta=beta, query=identity_map(s)))
            assert audit_utility(mech, identity_map(s), gamma).min_mass >= 1 - delta


class TestPrivacyBound:
    def test_formula(self):
        assert privacy_bound(3.0, 2.0) == 12.0
        assert privacy_bound(0.0, 5.0) == 0.0
        assert privacy_bound(4.0, 0.0) == 0.0

    def test_negative_arguments(self):
        with pytest.raises(ValueError):
            privacy_bound(-1.0, 1.0)
        with pytest.raises(ValueError):
            privacy_bound(1.0, -1.0)


class TestTradeoff:
    def test_x3_uniform_anchor(self):
        # modulus at 0.25 is 1/3, beta = 4 ln 30, epsilon = 8 ln 30
        bound = tradeoff_upper_bound(uniform_measure(grid_space(3)), 0.5, 0.1)
        assert bound.modulus == pytest.approx(1.0 / 3.0)
        assert bound.beta == pytest.approx(13.604789526648622, abs=1e-12)
        assert bound.epsilon == pytest.approx(27.209579053297244, abs=1e-12)

    def test_scale_invariance(self):
        s = grid_space(4)
        a = tradeoff_upper_bound(uniform_measure(s), 0.4, 0.2)
        b = tradeoff_upper_bound(DiscreteMeasure(s, [2.5] * 4), 0.4, 0.2)
        assert a.epsilon == pytest.approx(b.epsilon, abs=1e-12)

    def test_gap_in_support_has_no_finite_bound(self):
        s = grid_space(3)
        base = DiscreteMeasure(s, [1.0, 0.0, 1.0])
        with pytest.raises(NotUniformlyPositiveError):
            tradeoff_upper_bound(base, 0.2, 0.1)

    def test_epsilon_is_twice_beta(self):
        rng = np.random.default_rng(71)
        for _ in range(10):
            s = random_space(rng, int(rng.integers(2, 9)))
            base = random_measure(rng, s)
            bound = tradeoff_upper_bound(base, float(rng.uniform(0.3, 1.0)), 0.25)
            assert bound.epsilon == pytest.approx(2 * bound.beta, abs=1e-12)


class TestMinDatabaseSize:
    def test_anchor_28(self):
        assert min_database_size(0.1, 1.0, 0.5, 1.0) == 28

    def test_halving_doubles(self):
        assert min_database_size(0.05, 1.0, 0.5, 1.0) == 56

    def test_floor_at_one(self):
        assert min_database_size(100.0, 1.0, 0.5, 1.0) == 1

    def test_eps_target_validation(self):
        with pytest.raises(ValueError):
            min_database_size(0.0, 1.0, 0.5, 1.0)
