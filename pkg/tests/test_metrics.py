import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmfd import abs_monotonicity, rank, spearman_rho
from lmfd.errors import LengthMismatch, NonFiniteInput

from conftest import brute_force_rank, d_squared_rho, pearson_of_ranks_rho


class TestRank:
    def test_distinct_values_are_permutation_ranks(self):
        assert rank([3, 1, 2]).tolist() == [3, 1, 2]

    def test_ties_get_average_rank(self):
        assert rank([5, 5, 7]).tolist() == [1.5, 1.5, 3]

    def test_all_tied(self):
        r = rank([2, 2, 2, 2])
        assert r.tolist() == [2.5, 2.5, 2.5, 2.5]
        assert r.sum() == 10  # 4 * 5 / 2

    def test_single_value(self):
        assert rank([7.0]).tolist() == [1.0]

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteInput):
            rank([1.0, np.nan])

    def test_matches_brute_force_on_tied_data(self, rng):
        for _ in range(50):
            x = rng.integers(0, 5, size=rng.integers(1, 40)).astype(float)
            np.testing.assert_array_equal(rank(x), brute_force_rank(x))

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
    def test_rank_sum_and_bounds(self, values):
        r = rank(values)
        n = len(values)
        assert r.sum() == pytest.approx(n * (n + 1) / 2, abs=1e-9)
        assert r.min() >= 1 and r.max() <= n


class TestSpearman:
    def test_perfect_concordance(self):
        assert spearman_rho([1, 2, 3], [1, 2, 3]) == 1.0

    def test_derived_example_matches_d_squared_oracle(self):
        x, t = [3, 1, 2], [1, 2, 3]
        expected = d_squared_rho(x, t)
        assert expected == -0.5  # d = (2, -1, -1), sum d^2 = 6
        assert spearman_rho(x, t) == pytest.approx(expected, abs=1e-15)

    def test_zero_variance_convention(self):
        assert spearman_rho([7, 7, 7], [1, 2, 3]) == 0.0
        assert spearman_rho([1, 2, 3], [4, 4, 4]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            spearman_rho([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(LengthMismatch):
            spearman_rho([1.0], [1.0])

    def test_non_finite(self):
        with pytest.raises(NonFiniteInput):
            spearman_rho([1.0, np.inf], [1.0, 2.0])

    def test_tie_free_oracle_equivalence(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 51))
            x = rng.permutation(n).astype(float)
            t = rng.permutation(n).astype(float)
            assert spearman_rho(x, t) == pytest.approx(d_squared_rho(x, t), abs=1e-12)

    def test_tied_oracle_equivalence(self, rng):
        for _ in range(200):
            n = int(rng.integers(3, 51))
            x = rng.integers(0, 6, size=n).astype(float)
            t = rng.integers(0, 6, size=n).astype(float)
            if len(set(x)) < 2 or len(set(t)) < 2:
                continue
            assert spearman_rho(x, t) == pytest.approx(
                pearson_of_ranks_rho(x, t), abs=1e-12
            )

    def test_antisymmetric_under_index_reversal(self, rng):
        for _ in range(20):
            x = rng.standard_normal(30)
            t = np.arange(30.0)
            assert spearman_rho(x, t[::-1]) == -spearman_rho(x, t)

    @given(
        st.lists(st.floats(-100, 100), min_size=2, max_size=60),
        st.lists(st.floats(-100, 100), min_size=2, max_size=60),
    )
    def test_output_in_unit_interval(self, x, t):
        n = min(len(x), len(t))
        rho = spearman_rho(x[:n], t[:n])
        assert -1.0 <= rho <= 1.0

    @given(
        # values on a coarse grid: distinct inputs must stay distinct after
        # a*x + b in float64, otherwise new ties break the pure-math identity
        st.lists(st.floats(-50, 50).map(lambda v: round(v, 6)), min_size=3, max_size=60),
        st.floats(0.01, 10.0),
        st.floats(-5.0, 5.0),
    )
    @settings(max_examples=200)
    def test_monotone_transform_invariance(self, x, a, b):
        t = list(range(len(x)))
        assert spearman_rho([a * v + b for v in x], t) == spearman_rho(x, t)


class TestAbsMonotonicity:
    def test_strictly_decreasing_is_one(self):
        assert abs_monotonicity([5, 4, 3, 2, 1]) == 1.0

    def test_constant_is_zero(self):
        assert abs_monotonicity([3, 3, 3]) == 0.0

    def test_matches_spearman_against_positions(self, rng):
        x = rng.standard_normal(100)
        assert abs_monotonicity(x) == abs(spearman_rho(x, np.arange(100.0)))

    def test_sign_flip_preserves_value(self, rng):
        x = rng.standard_normal(64)
        assert abs_monotonicity(-x) == abs_monotonicity(x)

    def test_artificial_s1_is_nearly_flat(self, artificial_table):
        assert abs_monotonicity(artificial_table.columns["s1"]) == pytest.approx(
            0.0753, abs=0.03
        )
