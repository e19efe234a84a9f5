"""Frozen oracle values and error contracts for the fairness measures."""

import math
import random

import pytest

from fairmarket import (
    CategoryDistribution,
    EmptyDistribution,
    InvalidPartition,
    NonPositiveSalary,
    SalarySample,
    ZeroTotalIncome,
    gini,
    maximin,
    normalized_share_entropy,
    shannon_entropy,
    share_entropy,
    theil_decomposition,
    theil_index,
)
from fairmarket.metrics import ShareVector

# The 800 @ $30K + 200 @ $180K benchmark used throughout.
SPLIT = CategoryDistribution([30_000_00, 180_000_00], [800, 200])
SPLIT_SAMPLE = SPLIT.to_sample()

# Oracles evaluated directly from the definitions.
H_CATEGORIES = -(0.8 * math.log(0.8) + 0.2 * math.log(0.2))
H_SHARES = -(800 * 5e-4 * math.log(5e-4) + 200 * 3e-3 * math.log(3e-3))
THEIL = 0.8 * 0.5 * math.log(0.5) + 0.2 * 3.0 * math.log(3.0)


class TestShannonEntropy:
    def test_delta_state_is_zero(self):
        assert shannon_entropy(CategoryDistribution([6_000_000], [1000])) == 0.0

    def test_benchmark_split(self):
        assert shannon_entropy(SPLIT) == pytest.approx(H_CATEGORIES, abs=1e-12)
        assert shannon_entropy(SPLIT) == pytest.approx(0.500402, abs=1e-6)

    def test_uniform_maximizes(self):
        d = CategoryDistribution([100, 200, 300, 400], [25, 25, 25, 25])
        assert shannon_entropy(d) == pytest.approx(math.log(4), abs=1e-12)

    def test_empty_distribution(self):
        with pytest.raises(EmptyDistribution):
            shannon_entropy(CategoryDistribution([100, 200], [0, 0]))

    def test_zero_counts_contribute_nothing(self):
        d = CategoryDistribution([100, 200, 300], [10, 0, 10])
        assert shannon_entropy(d) == pytest.approx(math.log(2), abs=1e-12)


class TestShareEntropy:
    def test_equal_salaries_reach_ln_n(self):
        for n in (1, 2, 10, 1000):
            s = SalarySample([5_000_00] * n)
            assert share_entropy(s) == pytest.approx(math.log(n), abs=1e-12)

    def test_benchmark_split(self):
        assert share_entropy(SPLIT_SAMPLE) == pytest.approx(H_SHARES, abs=1e-12)
        assert share_entropy(SPLIT_SAMPLE) == pytest.approx(6.525847, abs=1e-6)

    def test_single_salary(self):
        assert share_entropy(SalarySample([1])) == 0.0

    def test_zero_salary_rejected(self):
        with pytest.raises(NonPositiveSalary):
            share_entropy(SalarySample([0, 100]))

    def test_normalized_variant(self):
        assert normalized_share_entropy(SalarySample([7, 7, 7])) == pytest.approx(
            1.0, abs=1e-12
        )
        assert normalized_share_entropy(SalarySample([42])) == 1.0


class TestTheil:
    def test_equal_salaries_zero(self):
        assert theil_index(SalarySample([1234] * 50)) == 0.0

    def test_benchmark_split(self):
        assert theil_index(SPLIT_SAMPLE) == pytest.approx(THEIL, abs=1e-12)
        assert theil_index(SPLIT_SAMPLE) == pytest.approx(0.381908, abs=1e-6)

    def test_identity_with_share_entropy(self):
        rng = random.Random(99)
        for _ in range(200):
            n = rng.randint(2, 400)
            s = SalarySample(rng.randint(1, 10**7) for _ in range(n))
            assert theil_index(s) == pytest.approx(
                math.log(n) - share_entropy(s), abs=1e-12
            )

    def test_zero_salary_rejected(self):
        with pytest.raises(NonPositiveSalary):
            theil_index(SalarySample([0, 5]))


class TestTheilDecomposition:
    def test_single_group(self):
        d = theil_decomposition(SPLIT_SAMPLE, [list(range(1000))])
        assert d.between == pytest.approx(0.0, abs=1e-12)
        assert d.within[0] == pytest.approx(theil_index(SPLIT_SAMPLE), abs=1e-12)

    def test_singletons(self):
        s = SalarySample([100, 300, 600])
        d = theil_decomposition(s, [[0], [1], [2]])
        assert d.between == pytest.approx(theil_index(s), abs=1e-12)
        assert all(w == 0.0 for w in d.within)

    def test_benchmark_by_skill(self):
        groups = [list(range(800)), list(range(800, 1000))]
        d = theil_decomposition(SPLIT_SAMPLE, groups)
        reconstructed = d.between + sum(
            w * t for w, t in zip(d.weights, d.within)
        )
        assert reconstructed == pytest.approx(theil_index(SPLIT_SAMPLE), abs=1e-12)
        assert reconstructed == pytest.approx(0.381908, abs=1e-6)

    def test_random_partitions_reconstruct(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(4, 200)
            s = SalarySample(rng.randint(1, 10**6) for _ in range(n))
            indices = list(range(n))
            rng.shuffle(indices)
            cut_count = rng.randint(1, min(5, n - 1))
            cuts = sorted(rng.sample(range(1, n), cut_count))
            groups = [
                indices[a:b] for a, b in zip([0] + cuts, cuts + [n])
            ]
            d = theil_decomposition(s, groups)
            total = d.between + math.fsum(
                w * t for w, t in zip(d.weights, d.within)
            )
            assert total == pytest.approx(theil_index(s), abs=1e-12)

    def test_invalid_partitions(self):
        s = SalarySample([1, 2, 3])
        with pytest.raises(InvalidPartition):
            theil_decomposition(s, [[0, 1]])  # missing index 2
        with pytest.raises(InvalidPartition):
            theil_decomposition(s, [[0, 1], [1, 2]])  # overlap
        with pytest.raises(InvalidPartition):
            theil_decomposition(s, [[0, 1, 2], []])  # empty group


class TestGini:
    def test_equal_salaries(self):
        assert gini(SalarySample([500] * 9)) == 0.0

    def test_two_point_hand_value(self):
        assert gini(SalarySample([0, 1])) == 0.5

    def test_benchmark_split(self):
        # 2*800*200*150000 / (2*1000^2*60000)
        assert gini(SPLIT_SAMPLE) == pytest.approx(0.4, abs=1e-12)

    def test_range_upper_bound(self):
        # all income on one employee: G = 1 - 1/N
        s = SalarySample([0, 0, 0, 1000])
        assert gini(s) == pytest.approx(1 - 1 / 4, abs=1e-12)

    def test_zero_total(self):
        with pytest.raises(ZeroTotalIncome):
            gini(SalarySample([0, 0]))

    def test_matches_pairwise_bruteforce(self):
        rng = random.Random(17)
        for _ in range(30):
            n = rng.randint(2, 40)
            values = [rng.randint(0, 10**5) for _ in range(n)]
            if sum(values) == 0:
                values[0] = 1
            s = SalarySample(values)
            num = sum(abs(a - b) for a in values for b in values)
            expected = num / (2 * n * sum(values))
            assert gini(s) == pytest.approx(expected, abs=1e-12)


class TestMaximin:
    def test_benchmark(self):
        assert maximin(SPLIT_SAMPLE) == 30_000_00

    def test_equal(self):
        assert maximin(SalarySample([6_000_000] * 4)) == 6_000_000

    def test_single(self):
        assert maximin(SalarySample([1])) == 1


class TestShareVector:
    def test_from_sample(self):
        v = ShareVector.from_sample(SalarySample([100, 300]))
        assert v.shares == (0.25, 0.75)

    def test_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ShareVector([0.5, 0.6])

    def test_non_negative(self):
        with pytest.raises(ValueError):
            ShareVector([1.5, -0.5])
