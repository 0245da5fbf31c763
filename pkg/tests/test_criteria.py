import math

import numpy as np
import pytest

from oblique import (
    ConfigurationError,
    Criterion,
    PartitionCounts,
    gini,
    gini_from_counts,
    info_gain,
    info_gain_from_counts,
    twoing,
    twoing_from_counts,
)
from oblique.criteria import SCORERS, is_better, worst_score

from oracles import exact_gini, exact_info_gain, exact_twoing


def counts(left, right):
    return PartitionCounts(left, right)


def entropy_bits(class_counts):
    total = sum(class_counts)
    h = 0.0
    for c in class_counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


class TestTwoing:
    def test_maximal_balanced_pure(self):
        assert twoing(counts([2, 0], [0, 2])) == 0.25

    def test_identical_distributions(self):
        assert twoing(counts([1, 1], [1, 1])) == 0.0

    def test_three_one_partition(self):
        assert twoing(counts([3, 1], [1, 3])) == pytest.approx(0.0625, abs=1e-15)

    def test_empty_side_is_zero(self):
        assert twoing(counts([4, 0], [0, 0])) == 0.0
        assert twoing(counts([0, 0], [1, 2])) == 0.0


class TestGini:
    def test_both_sides_pure(self):
        assert gini(counts([2, 0], [0, 2])) == 0.0

    def test_maximally_mixed(self):
        assert gini(counts([1, 1], [1, 1])) == 0.5

    def test_empty_side_convention(self):
        assert gini(counts([4, 0], [0, 0])) == 0.0

    def test_weighted_mixture(self):
        # left {A:2}, right {A:1,B:1}: 0.5*0 + 0.5*0.5
        assert gini(counts([2, 0], [1, 1])) == pytest.approx(0.25, abs=1e-15)


class TestInfoGain:
    def test_perfect_balanced_split(self):
        assert info_gain(counts([2, 0], [0, 2])) == pytest.approx(1.0, abs=1e-12)

    def test_no_information(self):
        assert info_gain(counts([1, 1], [1, 1])) == pytest.approx(0.0, abs=1e-12)

    def test_three_one_parent(self):
        assert info_gain(counts([2, 0], [1, 1])) == pytest.approx(0.31128, abs=1e-4)

    def test_empty_side(self):
        parent_entropy = info_gain(counts([3, 1], [0, 0]))
        assert parent_entropy == pytest.approx(0.0, abs=1e-12)


class TestComparison:
    def test_ties_are_not_better(self):
        assert not is_better(Criterion.TWOING, 0.2, 0.2)

    def test_gini_lower_is_better(self):
        assert is_better(Criterion.GINI, 0.1, 0.3)
        assert not is_better(Criterion.GINI, 0.3, 0.1)

    def test_info_gain_higher_is_better(self):
        assert is_better(Criterion.INFO_GAIN, 0.9, 0.5)

    def test_worst_score_sentinels(self):
        assert worst_score(Criterion.TWOING) == -math.inf
        assert worst_score(Criterion.GINI) == math.inf
        assert worst_score(Criterion.INFO_GAIN) == -math.inf

    def test_every_achievable_score_beats_sentinel(self):
        for kind in Criterion:
            scorer = SCORERS[kind]
            score = scorer([3, 1], [1, 3])
            assert is_better(kind, score, worst_score(kind))

    def test_criterion_from_name(self):
        assert Criterion.from_name("twoing") is Criterion.TWOING
        assert Criterion.from_name("gini") is Criterion.GINI
        assert Criterion.from_name("igain") is Criterion.INFO_GAIN
        with pytest.raises(ConfigurationError):
            Criterion.from_name("entropy")


class TestPartitionCounts:
    def test_mismatched_class_counts_rejected(self):
        with pytest.raises(ConfigurationError):
            PartitionCounts([1, 2], [1, 2, 3])

    def test_empty_partition_rejected(self):
        with pytest.raises(ConfigurationError):
            PartitionCounts([0, 0], [0, 0])

    def test_negative_counts_rejected(self):
        with pytest.raises(ConfigurationError):
            PartitionCounts([-1, 2], [1, 2])


class TestProperties:
    def test_ranges_symmetry_relabeling(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            k = int(rng.integers(1, 7))
            left = [int(v) for v in rng.integers(0, 101, size=k)]
            right = [int(v) for v in rng.integers(0, 101, size=k)]
            if sum(left) + sum(right) == 0:
                left[0] = 1

            t = twoing_from_counts(left, right)
            g = gini_from_counts(left, right)
            ig = info_gain_from_counts(left, right)

            assert 0.0 <= t <= 0.25
            assert 0.0 <= g < 1.0
            if sum(left) > 0 and sum(right) > 0:
                assert g <= 1.0 - 1.0 / k + 1e-12
            parent = [l + r for l, r in zip(left, right)]
            assert -1e-12 <= ig <= entropy_bits(parent) + 1e-12

            # left/right symmetry
            assert twoing_from_counts(right, left) == t
            assert gini_from_counts(right, left) == g
            assert info_gain_from_counts(right, left) == ig

            # class relabeling invariance
            perm = rng.permutation(k)
            pleft = [left[i] for i in perm]
            pright = [right[i] for i in perm]
            assert twoing_from_counts(pleft, pright) == pytest.approx(t, abs=1e-12)
            assert gini_from_counts(pleft, pright) == pytest.approx(g, abs=1e-12)
            assert info_gain_from_counts(pleft, pright) == pytest.approx(ig, abs=1e-12)

    def test_purity(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            k = int(rng.integers(2, 5))
            a, b = rng.choice(k, size=2, replace=False)
            left = [0] * k
            right = [0] * k
            left[a] = int(rng.integers(1, 50))
            right[b] = int(rng.integers(1, 50))
            assert gini_from_counts(left, right) == 0.0
            parent = [l + r for l, r in zip(left, right)]
            assert info_gain_from_counts(left, right) == pytest.approx(
                entropy_bits(parent), abs=1e-12
            )

    def test_agreement_with_exact_rational_formulas(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            k = int(rng.integers(1, 7))
            left = [int(v) for v in rng.integers(0, 30, size=k)]
            right = [int(v) for v in rng.integers(0, 30, size=k)]
            if sum(left) + sum(right) == 0:
                right[-1] = 3
            assert twoing_from_counts(left, right) == pytest.approx(
                float(exact_twoing(left, right)), rel=1e-12, abs=1e-15
            )
            assert gini_from_counts(left, right) == pytest.approx(
                float(exact_gini(left, right)), rel=1e-12, abs=1e-15
            )
            assert info_gain_from_counts(left, right) == pytest.approx(
                exact_info_gain(left, right), rel=1e-9, abs=1e-12
            )
