"""
Benchmarking an embedding provider
==================================

Launches the bundled deterministic stub provider as a subprocess,
measures protocol overhead, single-sample latency, and a batch-size
throughput sweep, and prints the report.

Any process speaking the same line-delimited JSON protocol on
stdin/stdout can be benchmarked the same way; pass its launch command to
``connect`` (the CLI reads it from --provider or $EMBEDGAUGE_PROVIDER).
"""

import sys

from embedgauge import BenchPlan, connect, run_bench
from embedgauge.fixtures import demo_pairs

# 5 ms of programmed delay stands in for model inference.
command = [sys.executable, "-m", "embedgauge.stub_provider", "--dim", "32", "--delay-ms", "5"]

plan = BenchPlan(
    payload=tuple(p.text_a for p in demo_pairs()),
    warmup_iters=5,
    timed_iters=40,
    batch_sizes=(1, 4, 16),
    seed=0,
)

with connect(command) as provider:
    print(f"connected: model_id={provider.model_id!r}, dim={provider.dim}")
    report = run_bench(plan, provider)

lat = report.latency
print(f"\nsingle-sample latency over {lat.samples} requests:")
print(f"  mean {lat.mean_ms:6.2f} ms   sd {lat.sd_ms:5.2f} ms")
print(f"  p50  {lat.p50_ms:6.2f} ms   p95 {lat.p95_ms:5.2f} ms")

echo = report.echo_overhead
print(f"protocol overhead (no-op echo): mean {echo.mean_ms:.3f} ms")
print(f"=> time attributable to encoding: ~{lat.mean_ms - echo.mean_ms:.2f} ms")

print("\nthroughput sweep (first batch per size excluded as warmup):")
for batch, eps in report.throughput_by_batch.items():
    marker = "  <- best" if eps == report.best_throughput else ""
    print(f"  batch {batch:3d}: {eps:8.1f} emb/s{marker}")

print(f"\npeak provider memory: {report.peak_memory_gb:.3f} GB")
