import math
import sys

import pytest

from embedgauge.benchharness import (
    BenchPlan,
    BenchReport,
    LatencyStats,
    ProviderHandle,
    connect,
    latency_stats,
    run_bench,
)
from embedgauge.errors import EmptySampleError, ProtocolError, ProviderDiedError
from embedgauge.stub_provider import stub_vector

STUB = [sys.executable, "-m", "embedgauge.stub_provider"]


class TestLatencyStats:
    def test_constant_samples(self):
        stats = latency_stats([5.0, 5.0, 5.0, 5.0])
        assert stats.mean_ms == 5.0
        assert stats.sd_ms == 0.0
        assert stats.p50_ms == 5.0 and stats.p95_ms == 5.0
        assert stats.samples == 4

    def test_interpolated_percentiles(self):
        stats = latency_stats(range(1, 101))
        assert stats.mean_ms == pytest.approx(50.5)
        assert stats.p50_ms == pytest.approx(50.5)
        assert stats.p95_ms == pytest.approx(95.05)

    def test_single_sample_has_zero_sd(self):
        stats = latency_stats([7.0])
        assert stats.sd_ms == 0.0
        assert stats.samples == 1

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            latency_stats([])

    def test_validation(self):
        with pytest.raises(ValueError):
            LatencyStats(mean_ms=1.0, sd_ms=-0.1, p50_ms=1.0, p95_ms=1.0, samples=1)
        with pytest.raises(ValueError):
            LatencyStats(mean_ms=1.0, sd_ms=0.0, p50_ms=2.0, p95_ms=1.0, samples=1)


class TestPlanAndReport:
    def test_plan_defaults(self):
        plan = BenchPlan(payload=("text",))
        assert plan.batch_sizes == (1, 4, 16, 32)
        assert plan.warmup_iters == 10 and plan.timed_iters == 100

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(payload=()),
            dict(payload=("t",), timed_iters=0),
            dict(payload=("t",), warmup_iters=-1),
            dict(payload=("t",), batch_sizes=()),
            dict(payload=("t",), batch_sizes=(4, 1)),
            dict(payload=("t",), batch_sizes=(1, 1, 4)),
            dict(payload=("t",), batch_sizes=(0, 1)),
        ],
    )
    def test_plan_rejects(self, kwargs):
        with pytest.raises(ValueError):
            BenchPlan(**kwargs)

    def test_report_best_must_match_sweep(self):
        stats = latency_stats([1.0])
        with pytest.raises(ValueError):
            BenchReport(
                model_id="m",
                latency=stats,
                throughput_by_batch={1: 10.0, 4: 40.0},
                best_throughput=10.0,
                peak_memory_gb=0.1,
                emb_dim=8,
                echo_overhead=stats,
            )


class RecordingProvider:
    """In-process stand-in exposing the handle surface run_bench uses."""

    def __init__(self, dim=4, model_id="fake"):
        self.dim = dim
        self.model_id = model_id
        self.encoded: list[list[str]] = []
        self.echoes = 0

    def echo(self):
        self.echoes += 1

    def encode(self, texts):
        self.encoded.append(list(texts))
        return [[0.0] * self.dim for _ in texts]

    def status(self):
        return 256 * 1024 ** 2


class TestRunBench:
    PLAN = BenchPlan(
        payload=("alpha", "beta", "gamma", "delta"),
        warmup_iters=2,
        timed_iters=5,
        batch_sizes=(1, 3),
        seed=7,
    )

    def test_sample_counts_exclude_warmup(self):
        report = run_bench(self.PLAN, RecordingProvider())
        assert report.latency.samples == self.PLAN.timed_iters
        assert report.echo_overhead.samples == self.PLAN.timed_iters

    def test_call_accounting(self):
        provider = RecordingProvider()
        run_bench(self.PLAN, provider)
        assert provider.echoes == self.PLAN.warmup_iters + self.PLAN.timed_iters
        # warmup singles + timed singles + timed_iters batches per size
        expected_encodes = (
            self.PLAN.warmup_iters
            + self.PLAN.timed_iters
            + len(self.PLAN.batch_sizes) * self.PLAN.timed_iters
        )
        assert len(provider.encoded) == expected_encodes
        batch3 = [b for b in provider.encoded if len(b) == 3]
        assert len(batch3) == self.PLAN.timed_iters

    def test_best_throughput_is_sweep_max(self):
        report = run_bench(self.PLAN, RecordingProvider())
        assert set(report.throughput_by_batch) == {1, 3}
        assert report.best_throughput == max(report.throughput_by_batch.values())

    def test_reports_provider_identity_and_memory(self):
        report = run_bench(self.PLAN, RecordingProvider(dim=6, model_id="fake-6"))
        assert report.model_id == "fake-6"
        assert report.emb_dim == 6
        assert report.peak_memory_gb == pytest.approx(0.25)

    def test_same_seed_sends_identical_payloads(self):
        first = RecordingProvider()
        second = RecordingProvider()
        run_bench(self.PLAN, first)
        run_bench(self.PLAN, second)
        assert first.encoded == second.encoded

    def test_different_seed_changes_payloads(self):
        first = RecordingProvider()
        second = RecordingProvider()
        run_bench(self.PLAN, first)
        other = BenchPlan(
            payload=self.PLAN.payload,
            warmup_iters=2,
            timed_iters=5,
            batch_sizes=(1, 3),
            seed=8,
        )
        run_bench(other, second)
        assert first.encoded != second.encoded

    def test_requires_completed_handshake(self):
        provider = RecordingProvider()
        provider.dim = None
        with pytest.raises(ProtocolError):
            run_bench(self.PLAN, provider)


class TestStubVector:
    def test_deterministic_and_bounded(self):
        first = stub_vector("mitral valve stenosis", 32)
        second = stub_vector("mitral valve stenosis", 32)
        assert first == second
        assert len(first) == 32
        assert all(-1.0 <= v <= 1.0 for v in first)
        assert all(math.isfinite(v) for v in first)

    def test_distinct_texts_differ(self):
        assert stub_vector("aortic", 16) != stub_vector("mitral", 16)

    def test_prefix_stability_across_dims(self):
        assert stub_vector("text", 40)[:8] == stub_vector("text", 8)


class TestStubProviderProcess:
    def test_handshake_and_encode(self):
        with connect(STUB + ["--dim", "8"]) as provider:
            assert (provider.model_id, provider.dim) == ("stub-8d", 8)
            vectors = provider.encode(["one", "two", "one"])
            assert len(vectors) == 3
            assert all(len(v) == 8 for v in vectors)
            assert vectors[0] == vectors[2]  # same text, same vector
            assert vectors[0] != vectors[1]

    def test_empty_string_is_encodable(self):
        with connect(STUB) as provider:
            assert len(provider.encode([""])) == 1

    def test_echo_and_status(self):
        with connect(STUB) as provider:
            provider.echo()
            first = provider.status()
            provider.encode(["x"] * 64)
            second = provider.status()
            assert isinstance(first, int) and first > 0
            assert second >= first  # peak memory never decreases

    def test_unknown_command_is_reported_not_fatal(self):
        with connect(STUB) as provider:
            with pytest.raises(ProtocolError, match="unknown command"):
                provider.request({"cmd": "explode"})
            provider.echo()  # still serving

    def test_clean_shutdown(self):
        provider = connect(STUB)
        provider.close()
        assert provider._process.poll() == 0

    def test_custom_model_id(self):
        with connect(STUB + ["--model-id", "custom"]) as provider:
            assert provider.model_id == "custom"


class TestBrokenProviders:
    def test_immediate_exit(self):
        handle = ProviderHandle.launch([sys.executable, "-c", "pass"])
        try:
            with pytest.raises(ProviderDiedError):
                handle.hello()
        finally:
            handle.close(grace_seconds=0.5)

    def test_garbage_reply(self):
        script = (
            "import sys\n"
            "for line in sys.stdin:\n"
            "    print('not json', flush=True)\n"
        )
        handle = ProviderHandle.launch([sys.executable, "-c", script])
        try:
            with pytest.raises(ProtocolError, match="unparseable"):
                handle.hello()
        finally:
            handle.close(grace_seconds=0.2)

    def test_reply_without_ok_field(self):
        script = (
            "import sys, json\n"
            "for line in sys.stdin:\n"
            "    print(json.dumps({'pong': True}), flush=True)\n"
        )
        handle = ProviderHandle.launch([sys.executable, "-c", script])
        try:
            with pytest.raises(ProtocolError, match="ok"):
                handle.hello()
        finally:
            handle.close(grace_seconds=0.2)

    def test_dimension_drift_detected(self):
        # hello advertises dim 4 but encode returns 3-wide rows
        script = (
            "import sys, json\n"
            "for line in sys.stdin:\n"
            "    msg = json.loads(line)\n"
            "    if msg['cmd'] == 'hello':\n"
            "        print(json.dumps({'ok': True, 'model_id': 'drift', 'dim': 4}), flush=True)\n"
            "    else:\n"
            "        n = len(msg.get('texts', []))\n"
            "        print(json.dumps({'ok': True, 'vectors': [[0.0] * 3] * n}), flush=True)\n"
        )
        handle = ProviderHandle.launch([sys.executable, "-c", script])
        try:
            handle.hello()
            with pytest.raises(ProtocolError, match="drifted"):
                handle.encode(["a"])
        finally:
            handle.close(grace_seconds=0.2)

    def test_non_finite_vector_rejected(self):
        script = (
            "import sys, json\n"
            "for line in sys.stdin:\n"
            "    msg = json.loads(line)\n"
            "    if msg['cmd'] == 'hello':\n"
            "        print(json.dumps({'ok': True, 'model_id': 'nan', 'dim': 2}), flush=True)\n"
            "    else:\n"
            "        print(json.dumps({'ok': True, 'vectors': [[1.0, None]]}), flush=True)\n"
        )
        handle = ProviderHandle.launch([sys.executable, "-c", script])
        try:
            handle.hello()
            with pytest.raises(ProtocolError):
                handle.encode(["a"])
        finally:
            handle.close(grace_seconds=0.2)

    def test_short_bench_against_real_stub(self):
        plan = BenchPlan(
            payload=("aortic stenosis", "mitral stenosis"),
            warmup_iters=1,
            timed_iters=3,
            batch_sizes=(1, 2),
        )
        with connect(STUB + ["--dim", "4"]) as provider:
            report = run_bench(plan, provider)
        assert report.emb_dim == 4
        assert report.latency.samples == 3
        assert report.peak_memory_gb > 0.0
        assert report.best_throughput > 0.0
