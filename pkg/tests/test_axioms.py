"""Property suite for the fairness-measure axioms: continuity, exact
homogeneity of degree zero, asymptotic saturation, partition-independent
decomposition, and two-employee monotonicity, plus order invariance and the
Theil/entropy identity."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairmarket import (
    SalarySample,
    gini,
    maximin,
    normalized_share_entropy,
    share_entropy,
    theil_decomposition,
    theil_index,
)

positive_samples = st.lists(
    st.integers(min_value=1, max_value=10**8), min_size=1, max_size=120
).map(SalarySample)

multi_samples = st.lists(
    st.integers(min_value=1, max_value=10**8), min_size=2, max_size=120
).map(SalarySample)

scale_factors = st.integers(min_value=1, max_value=10**9)


class TestHomogeneityExact:
    """Degree-zero homogeneity: rescaling the money unit changes nothing,
    bit for bit."""

    @given(positive_samples, scale_factors)
    def test_share_entropy(self, sample, c):
        assert share_entropy(sample.scaled(c)) == share_entropy(sample)

    @given(positive_samples, scale_factors)
    def test_theil(self, sample, c):
        assert theil_index(sample.scaled(c)) == theil_index(sample)

    @given(positive_samples, scale_factors)
    def test_gini(self, sample, c):
        assert gini(sample.scaled(c)) == gini(sample)

    @given(positive_samples, scale_factors)
    def test_maximin_scales_linearly(self, sample, c):
        # maximin is the one measure carrying money units; it scales with c
        assert maximin(sample.scaled(c)) == c * maximin(sample)


class TestMonotonicityTwoEmployees:
    """The two-employee measure rises strictly as |1 - 2 alpha| shrinks."""

    def test_share_entropy_strictly_increasing_on_grid(self):
        total = 1_000_000
        values = []
        for k in range(1, 51):  # alpha = 0.01 .. 0.50
            a = total * k // 100
            values.append(share_entropy(SalarySample([a, total - a])))
        assert all(x < y for x, y in zip(values, values[1:]))
        assert values[-1] == pytest.approx(math.log(2), abs=1e-12)

    def test_theil_strictly_decreasing_on_grid(self):
        total = 1_000_000
        values = [
            theil_index(SalarySample([total * k // 100, total - total * k // 100]))
            for k in range(1, 51)
        ]
        assert all(x > y for x, y in zip(values, values[1:]))


class TestContinuity:
    """A one-minor-unit perturbation moves each measure by O(1 / total)."""

    @settings(max_examples=60)
    @given(multi_samples, st.integers(min_value=0, max_value=10**9), st.data())
    def test_entropy_and_theil(self, sample, _, data):
        index = data.draw(st.integers(min_value=0, max_value=sample.n - 1))
        bumped = list(sample.salaries)
        bumped[index] += 1
        other = SalarySample(bumped)

        total = sample.total
        p_min = min(min(sample.salaries), min(other.salaries)) / (total + 1)
        bound = 2.0 * (abs(math.log(p_min)) + math.log(sample.n) + 1.0) / total

        assert abs(share_entropy(other) - share_entropy(sample)) <= bound
        assert abs(theil_index(other) - theil_index(sample)) <= bound

    @settings(max_examples=60)
    @given(multi_samples, st.data())
    def test_gini(self, sample, data):
        index = data.draw(st.integers(min_value=0, max_value=sample.n - 1))
        bumped = list(sample.salaries)
        bumped[index] += 1
        other = SalarySample(bumped)
        bound = 2.01 / sample.total
        assert abs(gini(other) - gini(sample)) <= bound


class TestAsymptoticSaturation:
    """Equal allocations: the normalized measure is constant in N."""

    @pytest.mark.parametrize("n", [2, 3, 10, 100, 1000, 12345])
    def test_equal_allocations_score_one(self, n):
        sample = SalarySample([77_700] * n)
        assert normalized_share_entropy(sample) == pytest.approx(1.0, abs=1e-12)

    def test_raw_entropy_is_ln_n(self):
        for n in (2, 10, 1000):
            sample = SalarySample([123] * n)
            assert share_entropy(sample) == pytest.approx(math.log(n), abs=1e-12)


class TestOrderInvariance:
    @given(multi_samples, st.randoms(use_true_random=False))
    def test_all_measures(self, sample, rng):
        shuffled = list(sample.salaries)
        rng.shuffle(shuffled)
        other = SalarySample(shuffled)
        assert share_entropy(other) == share_entropy(sample)
        assert theil_index(other) == theil_index(sample)
        assert gini(other) == gini(sample)
        assert maximin(other) == maximin(sample)


class TestTheilEntropyIdentity:
    @given(multi_samples)
    def test_identity(self, sample):
        lhs = theil_index(sample)
        rhs = math.log(sample.n) - share_entropy(sample)
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestPartitionReconstruction:
    """Axiom (iv) realized through Theil's exact between/within split: the
    total is recovered from any partition."""

    @settings(max_examples=60)
    @given(
        st.lists(st.integers(min_value=1, max_value=10**7), min_size=4, max_size=80),
        st.randoms(use_true_random=False),
    )
    def test_total_recovered_from_any_partition(self, values, rng):
        sample = SalarySample(values)
        n = sample.n
        indices = list(range(n))
        rng.shuffle(indices)
        n_groups = rng.randint(1, min(6, n))
        cuts = sorted(rng.sample(range(1, n), n_groups - 1)) if n_groups > 1 else []
        groups = [indices[a:b] for a, b in zip([0] + cuts, cuts + [n])]

        d = theil_decomposition(sample, groups)
        total = d.between + math.fsum(w * t for w, t in zip(d.weights, d.within))
        assert total == pytest.approx(theil_index(sample), abs=1e-12)
