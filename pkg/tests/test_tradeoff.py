import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embedgauge.errors import (
    IncompleteGridError,
    MedianUndefinedError,
    RankError,
)
from embedgauge.tradeoff import (
    DATA_FRACTIONS,
    LOSSES,
    RANKS,
    TIER_BOUNDS,
    AblationCell,
    AdaptedMatrix,
    ArchClass,
    Deployment,
    GainRecord,
    LicenseInfo,
    LoraSpec,
    ModelProfile,
    Tier,
    ablation_summary,
    classify_tier,
    cohort_medians,
    gain,
    license_gate,
    lora_param_count,
    memory_efficiency,
    pareto_frontier,
    parse_params,
)


def _profile(name, separation, throughput, memory=1.0, **kw):
    defaults = dict(
        params_millions=100.0,
        emb_dim=768,
        arch_class=ArchClass.ENCODER_ONLY,
        license=LicenseInfo("MIT", True, True, False),
    )
    defaults.update(kw)
    return ModelProfile(
        name=name,
        separation=separation,
        throughput_eps=throughput,
        memory_gb=memory,
        **defaults,
    )


class TestParseParams:
    @pytest.mark.parametrize(
        "text, millions",
        [
            ("33M", 33.0),
            ("2.5B", 2500.0),
            ("4B", 4000.0),
            ("340", 340.0),
            ("500K", 0.5),
            (" 109 M ", 109.0),
            ("0.5b", 500.0),
        ],
    )
    def test_accepted_forms(self, text, millions):
        assert parse_params(text) == millions

    def test_numeric_passthrough(self):
        assert parse_params(42) == 42.0
        assert parse_params(2.5) == 2.5

    @pytest.mark.parametrize("text", ["", "large", "3,5B", "1e3M", "M"])
    def test_rejected_forms(self, text):
        with pytest.raises(ValueError):
            parse_params(text)


class TestTiers:
    def test_default_boundaries_are_inclusive_lower_bounds(self):
        assert classify_tier(0.25) is Tier.MODERATE
        assert classify_tier(0.45) is Tier.HIGH
        assert classify_tier(0.2499) is Tier.LOW
        assert classify_tier(0.4499) is Tier.MODERATE
        assert classify_tier(-0.176) is Tier.LOW

    def test_labels(self):
        assert Tier.LOW.label == "low"
        assert Tier.MODERATE.label == "moderate"
        assert Tier.HIGH.label == "high"

    def test_custom_bounds(self):
        assert classify_tier(0.25, bounds=(0.3, 0.6)) is Tier.LOW
        assert classify_tier(0.31, bounds=(0.3, 0.6)) is Tier.MODERATE

    @given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
    @settings(max_examples=200)
    def test_monotone_in_separation(self, a, b):
        lo, hi = sorted((a, b))
        assert classify_tier(lo, TIER_BOUNDS) <= classify_tier(hi, TIER_BOUNDS)


class TestGain:
    def test_improvement(self):
        rec = gain(0.057, 0.386, name="mpnet")
        assert rec.absolute_gain == pytest.approx(0.329)
        assert rec.relative_pct == pytest.approx(577.19298, abs=1e-4)
        assert rec.improved

    def test_decline(self):
        rec = gain(0.063, -0.176)
        assert rec.absolute_gain == pytest.approx(-0.239)
        assert rec.relative_pct == pytest.approx(-379.365, abs=1e-3)
        assert not rec.improved

    def test_negative_baseline_keeps_sign_of_delta(self):
        rec = gain(-0.1, 0.1)
        assert rec.improved
        assert rec.relative_pct == pytest.approx(200.0)

    def test_zero_baseline_has_no_relative(self):
        rec = gain(0.0, 0.25)
        assert rec.relative_pct is None
        assert rec.improved

    def test_record_consistency_enforced(self):
        with pytest.raises(ValueError):
            GainRecord(
                name="x",
                zero_shot=0.1,
                adapted=0.3,
                absolute_gain=0.1,
                relative_pct=100.0,
                improved=True,
            )
        with pytest.raises(ValueError):
            GainRecord(
                name="x",
                zero_shot=0.1,
                adapted=0.3,
                absolute_gain=0.2,
                relative_pct=200.0,
                improved=False,
            )


class TestCohortMedians:
    def test_even_count_takes_midpoint(self):
        gains = [gain(0.1, 0.2), gain(0.1, 0.4)]  # relatives 100, 300
        med = cohort_medians(gains)
        assert med.median_relative_pct == pytest.approx(200.0)
        assert med.improved_count == 2
        assert med.declined_count == 0

    def test_declined_models_excluded(self):
        gains = [gain(0.1, 0.3), gain(0.1, 0.5), gain(0.2, 0.1)]
        med = cohort_medians(gains)
        assert med.improved_count == 2
        assert med.declined_count == 1
        assert med.total == 3
        assert med.median_zero_shot == pytest.approx(0.1)
        assert med.median_adapted == pytest.approx(0.4)

    def test_undefined_relative_skipped_for_relative_median_only(self):
        gains = [gain(0.0, 0.2), gain(0.1, 0.3)]
        med = cohort_medians(gains)
        assert med.median_relative_pct == pytest.approx(200.0)
        assert med.improved_count == 2

    def test_errors(self):
        with pytest.raises(MedianUndefinedError):
            cohort_medians([])
        with pytest.raises(MedianUndefinedError):
            cohort_medians([gain(0.3, 0.1)])
        with pytest.raises(MedianUndefinedError):
            cohort_medians([gain(0.0, 0.2), gain(0.3, 0.1)])


class TestPareto:
    def test_singleton_is_frontier(self):
        result = pareto_frontier([_profile("only", 0.5, 100.0)])
        assert [p.name for p in result.frontier] == ["only"]
        assert result.dominated == ()

    def test_simple_dominance(self):
        strong = _profile("strong", 0.5, 200.0)
        weak = _profile("weak", 0.4, 100.0)
        result = pareto_frontier([weak, strong])
        assert [p.name for p in result.frontier] == ["strong"]
        assert [d.profile.name for d in result.dominated] == ["weak"]
        assert [m.dominator for m in result.dominated[0].dominators] == ["strong"]

    def test_margins_relative_to_dominated_value(self):
        strong = _profile("strong", 0.6, 300.0)
        weak = _profile("weak", 0.4, 100.0)
        result = pareto_frontier([strong, weak])
        margin = result.dominated[0].dominators[0]
        assert margin.separation_margin_pct == pytest.approx(50.0)
        assert margin.throughput_margin_pct == pytest.approx(200.0)

    def test_weak_dominance_needs_a_strict_edge(self):
        twin_a = _profile("twin-a", 0.5, 100.0)
        twin_b = _profile("twin-b", 0.5, 100.0)
        result = pareto_frontier([twin_a, twin_b])
        assert {p.name for p in result.frontier} == {"twin-a", "twin-b"}

    def test_tie_on_one_axis_still_dominates(self):
        better = _profile("better", 0.5, 150.0)
        tied = _profile("tied", 0.5, 100.0)
        result = pareto_frontier([tied, better])
        assert [p.name for p in result.frontier] == ["better"]
        assert [d.profile.name for d in result.dominated] == ["tied"]

    def test_all_dominators_listed(self):
        top = _profile("top", 0.7, 300.0)
        mid = _profile("mid", 0.6, 200.0)
        low = _profile("low", 0.5, 100.0)
        result = pareto_frontier([top, mid, low])
        by_name = {d.profile.name: d for d in result.dominated}
        assert [m.dominator for m in by_name["low"].dominators] == ["top", "mid"]
        assert [m.dominator for m in by_name["mid"].dominators] == ["top"]

    def test_frontier_sorted_by_throughput(self):
        profiles = [
            _profile("fast-weak", 0.2, 900.0),
            _profile("slow-strong", 0.8, 50.0),
            _profile("middle", 0.5, 400.0),
        ]
        result = pareto_frontier(profiles)
        throughputs = [p.throughput_eps for p in result.frontier]
        assert throughputs == sorted(throughputs)
        # an undominated frontier read in throughput order has descending quality
        separations = [p.separation for p in result.frontier]
        assert separations == sorted(separations, reverse=True)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pareto_frontier([])

    @given(
        st.lists(
            st.tuples(st.floats(-1.0, 1.0), st.floats(1.0, 1000.0)),
            min_size=1,
            max_size=12,
        )
    )
    @settings(max_examples=100)
    def test_partition_is_exact(self, points):
        profiles = [
            _profile(f"m{i}", sep, thr) for i, (sep, thr) in enumerate(points)
        ]
        result = pareto_frontier(profiles)
        names = {p.name for p in result.frontier} | {
            d.profile.name for d in result.dominated
        }
        assert names == {p.name for p in profiles}
        assert len(result.frontier) + len(result.dominated) == len(profiles)
        # no frontier member may dominate another frontier member
        for a in result.frontier:
            for b in result.frontier:
                dominates = (
                    a.separation >= b.separation
                    and a.throughput_eps >= b.throughput_eps
                    and (
                        a.separation > b.separation
                        or a.throughput_eps > b.throughput_eps
                    )
                )
                assert not dominates


class TestMemoryEfficiency:
    def test_ratio(self):
        assert memory_efficiency(_profile("m", 0.5, 100.0, memory=2.0)) == 50.0

    def test_zero_throughput(self):
        assert memory_efficiency(_profile("m", 0.5, 0.0, memory=2.0)) == 0.0


class TestAblation:
    @staticmethod
    def _grid(score=lambda f, l, r: 0.1):
        return [
            AblationCell(data_fraction=f, loss=l, rank=r, separation=score(f, l, r))
            for f in DATA_FRACTIONS
            for l in LOSSES
            for r in RANKS
        ]

    def test_uniform_grid(self):
        summary = ablation_summary(self._grid())
        assert set(summary.mean_by_fraction_loss) == {
            (f, l) for f in DATA_FRACTIONS for l in LOSSES
        }
        assert all(
            v == pytest.approx(0.1) for v in summary.mean_by_fraction_loss.values()
        )
        assert all(v == 0.0 for v in summary.rank_spread.values())

    def test_best_cell_per_fraction(self):
        def score(f, l, r):
            return 0.9 if (f, l, r) == (50, "triplet", 32) else 0.1

        summary = ablation_summary(self._grid(score))
        best = summary.best_by_fraction[50]
        assert (best.loss, best.rank, best.separation) == ("triplet", 32, 0.9)
        assert summary.rank_spread[(50, "triplet")] == pytest.approx(0.8)

    def test_incomplete_grid_lists_missing_cells(self):
        cells = self._grid()[:-2]
        with pytest.raises(IncompleteGridError) as exc:
            ablation_summary(cells)
        assert exc.value.missing == [(100, "triplet", 16), (100, "triplet", 32)]

    def test_duplicate_cell(self):
        cells = self._grid() + [
            AblationCell(data_fraction=25, loss="infonce", rank=8, separation=0.2)
        ]
        with pytest.raises(ValueError, match="duplicate"):
            ablation_summary(cells)

    def test_off_grid_values_rejected(self):
        with pytest.raises(ValueError):
            AblationCell(data_fraction=75, loss="infonce", rank=8, separation=0.1)
        with pytest.raises(ValueError):
            AblationCell(data_fraction=25, loss="mse", rank=8, separation=0.1)
        with pytest.raises(ValueError):
            AblationCell(data_fraction=25, loss="infonce", rank=64, separation=0.1)


class TestLora:
    def test_minimal_adapter(self):
        spec = LoraSpec(rank_r=1, alpha=1.0, adapted_matrices=(AdaptedMatrix(2, 2),))
        assert lora_param_count(spec).trainable == 4

    def test_transformer_sized_adapter(self):
        spec = LoraSpec(
            rank_r=16,
            alpha=32.0,
            adapted_matrices=(AdaptedMatrix(1024, 1024, count=48),),
        )
        counted = lora_param_count(spec)
        assert counted.trainable == 1_572_864
        assert counted.scaling == 2.0

    def test_per_matrix_breakdown_sums_to_total(self):
        spec = LoraSpec(
            rank_r=8,
            alpha=16.0,
            adapted_matrices=(
                AdaptedMatrix(768, 768, count=12),
                AdaptedMatrix(768, 3072, count=12),
            ),
        )
        counted = lora_param_count(spec)
        assert sum(c for _, c in counted.per_matrix) == counted.trainable
        assert counted.per_matrix[0][1] == 12 * 8 * (768 + 768)

    def test_count_scales_linearly(self):
        single = LoraSpec(4, 8.0, (AdaptedMatrix(64, 64, count=1),))
        double = LoraSpec(4, 8.0, (AdaptedMatrix(64, 64, count=2),))
        assert (
            lora_param_count(double).trainable
            == 2 * lora_param_count(single).trainable
        )

    def test_rank_exceeding_min_dim(self):
        with pytest.raises(RankError):
            LoraSpec(rank_r=128, alpha=1.0, adapted_matrices=(AdaptedMatrix(64, 512),))

    def test_validation(self):
        with pytest.raises(ValueError):
            LoraSpec(rank_r=0, alpha=1.0, adapted_matrices=())
        with pytest.raises(ValueError):
            LoraSpec(rank_r=1, alpha=0.0, adapted_matrices=())
        with pytest.raises(ValueError):
            AdaptedMatrix(0, 4)


class TestLicenseGate:
    @staticmethod
    def _fleet():
        permissive = LicenseInfo("MIT", True, False, False)
        service_bound = LicenseInfo("Custom-Terms", True, True, True)
        research_only = LicenseInfo("NC-1.0", False, True, False)
        return [
            _profile("open", 0.5, 100.0, license=permissive),
            _profile("tethered", 0.5, 100.0, license=service_bound),
            _profile("research", 0.5, 100.0, license=research_only),
        ]

    def test_internal_deployment_only_blocks_noncommercial(self):
        part = license_gate(self._fleet(), Deployment.INTERNAL)
        assert [p.name for p in part.allowed] == ["open", "tethered"]
        assert [p.name for p, _ in part.flagged] == ["research"]

    def test_service_deployment_also_blocks_service_restrictions(self):
        part = license_gate(self._fleet(), Deployment.EMBEDDING_SERVICE)
        assert [p.name for p in part.allowed] == ["open"]
        flagged = {p.name: reason for p, reason in part.flagged}
        assert "restricted" in flagged["tethered"]
        assert "commercial" in flagged["research"]

    def test_empty(self):
        part = license_gate([], Deployment.INTERNAL)
        assert part.allowed == () and part.flagged == ()
