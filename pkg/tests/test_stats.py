"""The statistical kernel against frozen scipy reference values and its
declared edge-case contracts."""

import math

import pytest
from hypothesis import given, strategies as st

from qgen import stats

# (t, df, two-sided p) frozen from scipy.stats.t.sf
T_REFERENCE = [
    (0.0, 1.0, 1.0),
    (0.5, 1.0, 0.7048327646991336),
    (1.0, 2.0, 0.42264973081037427),
    (1.5, 3.0, 0.23058386524482283),
    (2.0, 4.5, 0.10825790718112493),
    (2.5, 7.0, 0.040992218585752874),
    (3.0, 10.0, 0.013343655022569565),
    (0.13, 2.4266, 0.9065664015330811),
    (4.371, 2.1424, 0.04283013871720986),
    (43.8178046, 6.0, 9.458950026419708e-09),
]

# (a, b, x, I_x(a, b)) frozen from scipy.special.betainc
BETAINC_REFERENCE = [
    (0.5, 0.5, 0.25, 0.33333333333333337),
    (2.0, 3.0, 0.4, 0.5247999999999999),
    (5.0, 1.0, 0.9, 0.5904900000000001),
    (0.5, 3.0, 0.01, 0.18625374999999994),
    (10.0, 10.0, 0.5, 0.5),
]


class TestBetainc:
    @pytest.mark.parametrize("a,b,x,expected", BETAINC_REFERENCE)
    def test_reference_values(self, a, b, x, expected):
        assert stats.betainc(a, b, x) == pytest.approx(expected, abs=1e-10)

    def test_bounds(self):
        assert stats.betainc(2.0, 3.0, 0.0) == 0.0
        assert stats.betainc(2.0, 3.0, 1.0) == 1.0

    @given(st.floats(0.5, 20), st.floats(0.5, 20), st.floats(0.001, 0.999))
    def test_monotone_in_x(self, a, b, x):
        assert stats.betainc(a, b, x) <= stats.betainc(a, b, min(1.0, x + 0.0005)) + 1e-12


class TestStudentT:
    @pytest.mark.parametrize("t,df,expected", T_REFERENCE)
    def test_reference_table(self, t, df, expected):
        assert stats.student_t_two_sided_p(t, df) == pytest.approx(expected, abs=1e-8)

    def test_symmetric_in_t(self):
        assert stats.student_t_two_sided_p(-2.2, 5) == stats.student_t_two_sided_p(2.2, 5)

    def test_zero_gives_one(self):
        assert stats.student_t_two_sided_p(0.0, 3) == 1.0


class TestNormal:
    def test_cdf_midpoint(self):
        assert stats.normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_two_sided_reference(self):
        # 2 * scipy.stats.norm.sf(1.96)
        assert stats.normal_two_sided_p(1.96) == pytest.approx(0.04999579029644087, abs=1e-12)


class TestWelch:
    def test_separated_samples(self):
        res = stats.welch_t_test([10, 11, 12, 13], [50, 51, 52, 53])
        assert res.statistic == pytest.approx(-43.81780460041329, abs=1e-9)
        assert res.p_value == pytest.approx(9.458950025885886e-09, rel=1e-6)
        assert res.p_value < 0.001

    def test_identical_multisets(self):
        res = stats.welch_t_test([4.0, 5.0, 6.0], [6.0, 5.0, 4.0])
        assert res.statistic == 0.0
        assert res.p_value == 1.0

    def test_swap_negates_t_preserves_p(self):
        a = [1.0, 2.0, 3.5]
        b = [4.0, 8.0, 9.0, 11.0]
        r1 = stats.welch_t_test(a, b)
        r2 = stats.welch_t_test(b, a)
        assert r1.statistic == -r2.statistic
        assert r1.p_value == r2.p_value

    def test_degenerate_constant_groups(self):
        res = stats.welch_t_test([5.0, 5.0], [9.0, 9.0])
        assert res.statistic == -stats.DEGENERATE_STAT
        assert res.p_value < 1e-12

    @given(
        st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=8),
        st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=8),
    )
    def test_p_in_unit_interval(self, a, b):
        res = stats.welch_t_test(a, b)
        assert 0.0 <= res.p_value <= 1.0


class TestCohensD:
    def test_pooled_reference(self):
        # hand check: means 2 and 5, pooled var ((1)+(1))/2 = 1 -> d = -3
        assert stats.cohens_d([1, 2, 3], [4, 5, 6]) == pytest.approx(-3.0 / math.sqrt(1.0))

    def test_zero_spread_equal_means(self):
        assert stats.cohens_d([2.0, 2.0], [2.0, 2.0]) == 0.0

    def test_zero_spread_distinct_means(self):
        assert stats.cohens_d([5.0, 5.0], [1.0, 1.0]) == stats.DEGENERATE_STAT


class TestProportions:
    def test_two_proportion_reference(self):
        # 2/3 vs 0/2: z = 1.4907..., p = 0.13603... (scipy.stats.norm)
        res = stats.two_proportion_z_test(2, 3, 0, 2)
        assert res.statistic == pytest.approx(1.4907119849998598, abs=1e-12)
        assert res.p_value == pytest.approx(0.13603712811414362, abs=1e-12)

    def test_pooled_degenerate(self):
        res = stats.two_proportion_z_test(0, 4, 0, 4)
        assert res.statistic == 0.0
        assert res.p_value == 1.0

    def test_one_proportion(self):
        # 3/5 vs 0.5: z = 0.1 / sqrt(0.05) = 0.4472...
        res = stats.one_proportion_z_test(3, 5, 0.5)
        assert res.statistic == pytest.approx(0.4472135954999579, abs=1e-12)
        assert 0.6 < res.p_value < 0.7


class TestQuantiles:
    def test_matches_linear_interpolation(self):
        values = [26, 29, 29, 35, 38]
        assert stats.quartiles(values) == (29.0, 29.0, 35.0)

    def test_interpolated(self):
        assert stats.quantile([1, 2, 3, 4], 0.5) == 2.5

    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=30))
    def test_within_range(self, values):
        q1, q2, q3 = stats.quartiles(values)
        assert min(values) <= q1 <= q2 <= q3 <= max(values)
