import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embedgauge.embedspace import CategoryStats, PairCategory
from embedgauge.errors import (
    DegenerateVarianceError,
    DimensionError,
    DomainError,
)
from embedgauge.statkit import (
    P_FLOOR,
    BootstrapConfig,
    BootstrapResult,
    bootstrap_separation_ci,
    cohens_d,
    holm_adjust,
    mix_seed,
    pairwise_suite,
    pearson,
    regularized_incomplete_beta,
    student_t_sf,
    synthetic_separation_samples,
    welch_t,
)


def _stats(mean, sd, n=50, category=PairCategory.SIMILAR):
    return CategoryStats(category=category, mean=mean, sd=sd, n=n)


class TestIncompleteBeta:
    def test_boundaries(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_uniform_case_is_identity(self):
        for x in (0.1, 0.3, 0.5, 0.9):
            assert regularized_incomplete_beta(1.0, 1.0, x) == pytest.approx(x, abs=1e-12)

    def test_closed_form_polynomial_case(self):
        # I_x(2,3) = sum_{j=2..4} C(4,j) x^j (1-x)^(4-j); at x=0.5 -> 11/16
        assert regularized_incomplete_beta(2.0, 3.0, 0.5) == pytest.approx(
            0.6875, abs=1e-12
        )

    def test_accuracy_against_scipy_grid(self):
        scipy_special = pytest.importorskip("scipy.special")
        rng = np.random.Generator(np.random.PCG64(1))
        for _ in range(200):
            a = rng.uniform(0.1, 50.0)
            b = rng.uniform(0.1, 50.0)
            x = rng.uniform(0.0, 1.0)
            expected = scipy_special.betainc(a, b, x)
            assert regularized_incomplete_beta(a, b, x) == pytest.approx(
                expected, abs=1e-10
            )

    def test_reflection_identity(self):
        # I_x(a,b) + I_{1-x}(b,a) == 1
        for a, b, x in [(2.5, 7.0, 0.2), (0.4, 0.9, 0.65), (30.0, 0.5, 0.98)]:
            total = regularized_incomplete_beta(a, b, x) + regularized_incomplete_beta(
                b, a, 1.0 - x
            )
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_monotone_in_x(self):
        xs = np.linspace(0.0, 1.0, 101)
        values = [regularized_incomplete_beta(3.0, 2.0, float(x)) for x in xs]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            regularized_incomplete_beta(0.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, -1.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, 1.0, 1.5)


class TestStudentTSf:
    def test_center_is_one(self):
        assert student_t_sf(0.0, 1.0) == 1.0
        assert student_t_sf(0.0, 250.0) == 1.0

    def test_cauchy_closed_form(self):
        # df=1 is Cauchy: P(|T| >= 1) = 2*(1 - (1/2 + atan(1)/pi)) = 0.5
        assert student_t_sf(1.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_near_criterion_correlation_tail(self):
        # the r=0.458/n=10 correlation's t-statistic lands here
        assert student_t_sf(1.457, 8.0) == pytest.approx(0.1832185018184536, abs=1e-10)

    def test_symmetric_in_t(self):
        assert student_t_sf(2.3, 7.0) == student_t_sf(-2.3, 7.0)

    def test_decreasing_in_magnitude(self):
        values = [student_t_sf(t, 10.0) for t in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_floor_never_zero(self):
        assert student_t_sf(1e6, 5.0) >= P_FLOOR

    def test_invalid_df(self):
        with pytest.raises(DomainError):
            student_t_sf(1.0, 0.0)


class TestWelch:
    def test_identical_groups(self):
        res = welch_t(0.5, 0.1, 50, 0.5, 0.1, 50)
        assert res.t == 0.0
        assert res.p == 1.0

    def test_worked_example(self):
        # frozen from independent evaluation of the Welch formulas
        res = welch_t(0.510, 0.15, 50, 0.386, 0.18, 50)
        assert res.t == pytest.approx(3.742144169757433, abs=1e-9)
        assert res.df == pytest.approx(94.91358667360753, abs=1e-6)
        assert res.p == pytest.approx(3.124409349611713e-4, rel=1e-9)

    def test_doubling_sds_halves_t(self):
        base = welch_t(0.6, 0.1, 40, 0.4, 0.2, 40)
        doubled = welch_t(0.6, 0.2, 40, 0.4, 0.4, 40)
        assert doubled.t == pytest.approx(base.t / 2.0, rel=1e-12)

    def test_degenerate_variances(self):
        with pytest.raises(DegenerateVarianceError):
            welch_t(0.5, 0.0, 50, 0.4, 0.0, 50)

    def test_small_groups_rejected(self):
        with pytest.raises(DomainError):
            welch_t(0.5, 0.1, 1, 0.4, 0.1, 50)


class TestCohensD:
    def test_equal_means(self):
        assert cohens_d(0.5, 0.1, 30, 0.5, 0.2, 30).d == 0.0

    def test_worked_example(self):
        res = cohens_d(0.510, 0.15, 50, 0.386, 0.18, 50)
        assert res.sigma_pooled == pytest.approx(0.1656804152578089, abs=1e-12)
        assert res.d == pytest.approx(0.7484288339514865, abs=1e-12)
        assert res.label == "medium"

    def test_swap_negates(self):
        ab = cohens_d(0.6, 0.1, 20, 0.4, 0.15, 25)
        ba = cohens_d(0.4, 0.15, 25, 0.6, 0.1, 20)
        assert ba.d == pytest.approx(-ab.d, rel=1e-12)
        assert ba.sigma_pooled == pytest.approx(ab.sigma_pooled, rel=1e-12)

    def test_labels_at_band_edges(self):
        def d_of(diff):
            return cohens_d(diff, 1.0, 50, 0.0, 1.0, 50)

        assert d_of(0.1).label == "negligible"
        assert d_of(0.2).label == "small"
        assert d_of(0.5).label == "medium"
        assert d_of(0.8).label == "large"
        assert d_of(-0.9).label == "large"

    def test_zero_pooled_variance(self):
        with pytest.raises(DegenerateVarianceError):
            cohens_d(0.5, 0.0, 30, 0.4, 0.0, 30)


class TestHolm:
    def test_single_hypothesis_unchanged(self):
        assert holm_adjust([0.04]) == [0.04]

    def test_worked_example(self):
        adjusted = holm_adjust([0.01, 0.04, 0.02])
        assert adjusted == pytest.approx([0.03, 0.04, 0.04])

    def test_saturation(self):
        assert holm_adjust([1.0, 1.0, 1.0]) == [1.0, 1.0, 1.0]

    def test_empty(self):
        assert holm_adjust([]) == []

    def test_domain(self):
        with pytest.raises(DomainError):
            holm_adjust([0.5, 1.2])

    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12))
    @settings(max_examples=200)
    def test_dominance_and_bounds(self, ps):
        adjusted = holm_adjust(ps)
        assert all(a >= p for a, p in zip(adjusted, ps))
        assert all(0.0 <= a <= 1.0 for a in adjusted)

    @given(
        st.lists(st.floats(0.0, 1.0), min_size=2, max_size=10),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=100)
    def test_permutation_equivariance(self, ps, rnd):
        order = list(range(len(ps)))
        rnd.shuffle(order)
        direct = holm_adjust([ps[i] for i in order])
        permuted = [holm_adjust(ps)[i] for i in order]
        assert direct == pytest.approx(permuted, abs=1e-15)

    def test_preserves_sorted_order(self):
        ps = [0.32, 0.001, 0.14, 0.0499, 0.6]
        adjusted = holm_adjust(ps)
        paired = sorted(zip(ps, adjusted))
        ranks = [a for _, a in paired]
        assert ranks == sorted(ranks)


class TestPearson:
    def test_perfect_linearity(self):
        x = [1.0, 2.0, 4.0, 8.0]
        res = pearson(x, [2 * v + 1 for v in x])
        assert res.r == 1.0
        assert res.p == P_FLOOR

    def test_antilinearity(self):
        x = [1.0, 2.0, 3.0, 5.0]
        assert pearson(x, [-v for v in x]).r == -1.0

    def test_symmetry(self):
        x = [1.0, 2.0, 3.5, 4.0, 9.0]
        y = [0.3, -1.0, 2.0, 0.0, 4.0]
        assert pearson(x, y).r == pytest.approx(pearson(y, x).r, rel=1e-12)

    def test_constant_series(self):
        with pytest.raises(DegenerateVarianceError):
            pearson([1.0, 1.0, 1.0], [0.1, 0.2, 0.3])

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pearson([1.0, 2.0, 3.0], [1.0, 2.0])

    def test_too_short(self):
        with pytest.raises(DomainError):
            pearson([1.0, 2.0], [2.0, 1.0])


class TestMixSeed:
    def test_frozen_values(self):
        # splitmix64 of seed 0, first output; guards the mixing constants
        assert mix_seed(0, 0) == 16294208416658607535
        assert mix_seed(42, 7) == 14769051326987775908

    def test_no_collisions_over_contiguous_indices(self):
        seeds = {mix_seed(123, i) for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_distinct_streams_per_base(self):
        assert mix_seed(0, 5) != mix_seed(1, 5)


class TestBootstrap:
    def test_zero_variance_collapses(self):
        res = bootstrap_separation_ci(
            _stats(0.8, 0.0), _stats(0.3, 0.0, category=PairCategory.DIFFERENT),
            BootstrapConfig(resamples=100, seed=3),
        )
        assert res.lo == res.hi
        assert res.point == pytest.approx(0.5, abs=1e-12)
        assert res.width == 0.0

    def test_width_matches_normal_theory(self):
        # 2 * 1.96 * sqrt(2 * sd^2 / n) = 0.0784 for sd 0.10, n 50
        res = bootstrap_separation_ci(
            _stats(0.772, 0.10), _stats(0.263, 0.10, category=PairCategory.DIFFERENT),
            BootstrapConfig(resamples=5000, seed=0),
        )
        assert res.width == pytest.approx(0.0784, abs=0.01)
        assert res.analytic == pytest.approx(0.509)

    def test_deterministic_for_fixed_seed(self):
        cfg = BootstrapConfig(resamples=400, seed=11)
        sim, diff = _stats(0.7, 0.12), _stats(0.4, 0.15, category=PairCategory.DIFFERENT)
        assert bootstrap_separation_ci(sim, diff, cfg) == bootstrap_separation_ci(
            sim, diff, cfg
        )

    def test_parallel_is_bit_identical(self):
        cfg = BootstrapConfig(resamples=500, seed=9)
        sim, diff = _stats(0.7, 0.12), _stats(0.4, 0.15, category=PairCategory.DIFFERENT)
        serial = bootstrap_separation_ci(sim, diff, cfg, workers=1)
        parallel = bootstrap_separation_ci(sim, diff, cfg, workers=4)
        assert serial == parallel

    def test_wider_confidence_widens_interval(self):
        sim, diff = _stats(0.7, 0.12), _stats(0.4, 0.15, category=PairCategory.DIFFERENT)
        narrow = bootstrap_separation_ci(
            sim, diff, BootstrapConfig(resamples=2000, seed=5, confidence=0.80)
        )
        wide = bootstrap_separation_ci(
            sim, diff, BootstrapConfig(resamples=2000, seed=5, confidence=0.99)
        )
        assert wide.width > narrow.width
        assert wide.lo <= narrow.lo and wide.hi >= narrow.hi

    def test_samples_depend_on_index_not_history(self):
        sim, diff = _stats(0.7, 0.12), _stats(0.4, 0.15, category=PairCategory.DIFFERENT)
        full = synthetic_separation_samples(sim, diff, 50, base_seed=2, pairs_per_category=50)
        prefix = synthetic_separation_samples(sim, diff, 10, base_seed=2, pairs_per_category=50)
        assert np.array_equal(full[:10], prefix)

    def test_result_validation(self):
        with pytest.raises(ValueError):
            BootstrapResult(point=0.5, lo=0.6, hi=0.7, width=0.1, analytic=0.5)
        with pytest.raises(ValueError):
            BootstrapResult(point=0.65, lo=0.6, hi=0.7, width=0.2, analytic=0.5)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            BootstrapConfig(resamples=0)
        with pytest.raises(ValueError):
            BootstrapConfig(confidence=1.0)
        with pytest.raises(ValueError):
            BootstrapConfig(pairs_per_category=0)


class TestPairwiseSuite:
    @staticmethod
    def _summaries(count):
        out = {}
        for i in range(count):
            out[f"model-{i}"] = (
                _stats(0.5 + 0.03 * i, 0.12),
                _stats(0.3, 0.15, category=PairCategory.DIFFERENT),
            )
        return out

    def test_comparison_count_is_m_choose_2(self):
        cfg = BootstrapConfig(resamples=10, seed=0)
        assert len(pairwise_suite(self._summaries(10), cfg)) == 45
        assert len(pairwise_suite(self._summaries(3), cfg)) == 3

    def test_holm_never_below_raw(self):
        comparisons = pairwise_suite(self._summaries(5), BootstrapConfig(seed=1))
        assert all(c.p_holm >= c.p for c in comparisons)

    def test_deterministic_and_order_independent_samples(self):
        cfg = BootstrapConfig(resamples=10, seed=4)
        first = pairwise_suite(self._summaries(4), cfg)
        second = pairwise_suite(self._summaries(4), cfg)
        assert first == second
        # a model's samples are keyed by name, not by iteration order
        reordered = dict(reversed(list(self._summaries(4).items())))
        third = {
            (c.model_a, c.model_b): c.t for c in pairwise_suite(reordered, cfg)
        }
        for c in first:
            key = (c.model_a, c.model_b)
            flipped = (c.model_b, c.model_a)
            if key in third:
                assert third[key] == pytest.approx(c.t, rel=1e-12)
            else:
                assert third[flipped] == pytest.approx(-c.t, rel=1e-12)
