"""Inference benchmark harness.

Drives an external embedding provider over a line-delimited JSON protocol
on its stdin/stdout and measures single-sample latency, a batch-size
throughput sweep, and provider-reported peak memory.  Timing is wall-clock
around each request/response at the harness; a separate no-op echo
measurement quantifies the protocol overhead so it can be subtracted.

Provider protocol (one JSON object per line):

    -> {"cmd": "hello"}                       <- {"ok": true, "model_id": str, "dim": int}
    -> {"cmd": "encode", "texts": [str, ...]} <- {"ok": true, "vectors": [[float, ...], ...]}
    -> {"cmd": "echo"}                        <- {"ok": true}
    -> {"cmd": "status"}                      <- {"ok": true, "peak_mem_bytes": int}
    -> {"cmd": "shutdown"}                    <- {"ok": true}
    any failure                               <- {"ok": false, "error": str}
"""

from __future__ import annotations

import json
import math
import random
import shlex
import subprocess
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySampleError, ProtocolError, ProviderDiedError

_BYTES_PER_GB = 1024 ** 3


@dataclass(frozen=True)
class BenchPlan:
    """What to run: iteration counts, batch sweep, payload, seed."""

    payload: tuple[str, ...]
    warmup_iters: int = 10
    timed_iters: int = 100
    batch_sizes: tuple[int, ...] = (1, 4, 16, 32)
    seed: int = 0

    def __post_init__(self):
        if self.timed_iters < 1:
            raise ValueError("timed_iters must be >= 1")
        if self.warmup_iters < 0:
            raise ValueError("warmup_iters must be >= 0")
        if not self.batch_sizes:
            raise ValueError("batch_sizes must be nonempty")
        if any(b < 1 for b in self.batch_sizes):
            raise ValueError("batch sizes must be positive")
        if list(self.batch_sizes) != sorted(set(self.batch_sizes)):
            raise ValueError("batch_sizes must be strictly increasing")
        if not self.payload:
            raise ValueError("payload must contain at least one text")


@dataclass(frozen=True)
class LatencyStats:
    """Latency distribution summary in milliseconds."""

    mean_ms: float
    sd_ms: float
    p50_ms: float
    p95_ms: float
    samples: int

    def __post_init__(self):
        if self.sd_ms < 0.0:
            raise ValueError("sd_ms must be >= 0")
        if self.p50_ms > self.p95_ms:
            raise ValueError("p50 cannot exceed p95")


def latency_stats(samples_ms) -> LatencyStats:
    """Mean, sample sd, and interpolated p50/p95 of latency samples."""
    values = np.asarray(list(samples_ms), dtype=np.float64)
    if values.size == 0:
        raise EmptySampleError("latency_stats needs at least one sample")
    p50, p95 = np.percentile(values, [50.0, 95.0], method="linear")
    return LatencyStats(
        mean_ms=float(values.mean()),
        sd_ms=float(values.std(ddof=1)) if values.size > 1 else 0.0,
        p50_ms=float(p50),
        p95_ms=float(p95),
        samples=int(values.size),
    )


@dataclass(frozen=True)
class BenchReport:
    """Result of one provider run."""

    model_id: str
    latency: LatencyStats
    throughput_by_batch: dict[int, float]
    best_throughput: float
    peak_memory_gb: float
    emb_dim: int
    echo_overhead: LatencyStats

    def __post_init__(self):
        best = max(self.throughput_by_batch.values())
        if self.best_throughput != best:
            raise ValueError(
                f"best_throughput {self.best_throughput} != max per-batch value {best}"
            )


class ProviderHandle:
    """A provider subprocess with strictly one request in flight at a time."""

    def __init__(self, process: subprocess.Popen):
        self._process = process
        self.model_id: str | None = None
        self.dim: int | None = None

    @classmethod
    def launch(cls, command: str | list[str]) -> "ProviderHandle":
        """Start the provider process.  Call hello() before benchmarking."""
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        process = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        return cls(process)

    def __enter__(self) -> "ProviderHandle":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def request(self, message: dict) -> dict:
        """One request/response round trip; raises on crash or bad reply."""
        proc = self._process
        if proc.poll() is not None:
            raise ProviderDiedError(f"provider exited with code {proc.returncode}")
        try:
            proc.stdin.write(json.dumps(message) + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProviderDiedError(f"provider pipe closed: {exc}") from exc
        line = proc.stdout.readline()
        if line == "":
            raise ProviderDiedError("provider closed its stdout mid-run")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"unparseable provider reply: {line!r}") from exc
        if not isinstance(reply, dict) or "ok" not in reply:
            raise ProtocolError(f"reply missing 'ok' field: {reply!r}")
        if not reply["ok"]:
            raise ProtocolError(f"provider error: {reply.get('error', 'unspecified')}")
        return reply

    def hello(self) -> tuple[str, int]:
        reply = self.request({"cmd": "hello"})
        model_id = reply.get("model_id")
        dim = reply.get("dim")
        if not isinstance(model_id, str) or not isinstance(dim, int) or dim < 1:
            raise ProtocolError(f"bad handshake reply: {reply!r}")
        self.model_id = model_id
        self.dim = dim
        return model_id, dim

    def encode(self, texts: list[str]) -> list[list[float]]:
        reply = self.request({"cmd": "encode", "texts": texts})
        vectors = reply.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProtocolError(
                f"expected {len(texts)} vectors, got {type(vectors).__name__}"
            )
        for row in vectors:
            if not isinstance(row, list) or len(row) != self.dim:
                raise ProtocolError(
                    f"vector length drifted from handshake dim {self.dim}"
                )
            if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in row):
                raise ProtocolError("non-finite value in encoded vector")
        return vectors

    def echo(self) -> None:
        self.request({"cmd": "echo"})

    def status(self) -> int:
        reply = self.request({"cmd": "status"})
        peak = reply.get("peak_mem_bytes")
        if not isinstance(peak, int) or peak < 0:
            raise ProtocolError(f"bad status reply: {reply!r}")
        return peak

    def shutdown(self) -> None:
        try:
            self.request({"cmd": "shutdown"})
        except (ProviderDiedError, ProtocolError):
            pass

    def close(self, grace_seconds: float = 5.0) -> None:
        proc = self._process
        if proc.poll() is None:
            self.shutdown()
            try:
                proc.wait(timeout=grace_seconds)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        for stream in (proc.stdin, proc.stdout):
            if stream is not None:
                stream.close()


def connect(command: str | list[str]) -> ProviderHandle:
    """Launch a provider and complete the handshake."""
    handle = ProviderHandle.launch(command)
    try:
        handle.hello()
    except Exception:
        handle.close()
        raise
    return handle


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return (time.perf_counter() - start) * 1000.0


def run_bench(plan: BenchPlan, provider: ProviderHandle) -> BenchReport:
    """Execute a benchmark plan against a connected provider.

    Phases, in order: echo overhead (warmup discarded, then timed),
    single-sample latency (warmup discarded, then one sample per timed
    iteration), and the batch-size throughput sweep where the first batch
    of each size is treated as per-size warmup and excluded from elapsed
    time.  Payload texts are drawn with replacement from the plan payload
    using the plan seed, so two runs with one seed send identical inputs.
    Peak memory comes from the provider's final status reply.  A provider
    crash aborts the run; no partial report is returned.
    """
    if provider.dim is None or provider.model_id is None:
        raise ProtocolError("handshake not completed; call hello() first")
    rng = random.Random(plan.seed)
    payload = plan.payload

    def pick(count: int) -> list[str]:
        return [payload[rng.randrange(len(payload))] for _ in range(count)]

    # protocol overhead via no-op echoes
    for _ in range(plan.warmup_iters):
        provider.echo()
    echo_samples = [_timed(provider.echo) for _ in range(plan.timed_iters)]

    # single-sample latency
    for _ in range(plan.warmup_iters):
        provider.encode(pick(1))
    lat_samples = [
        _timed(lambda: provider.encode(pick(1))) for _ in range(plan.timed_iters)
    ]

    # throughput sweep
    throughput_by_batch: dict[int, float] = {}
    for batch_size in plan.batch_sizes:
        batches = [pick(batch_size) for _ in range(plan.timed_iters)]
        provider.encode(batches[0])  # per-size warmup, excluded from elapsed
        timed_batches = batches[1:] if len(batches) > 1 else batches
        start = time.perf_counter()
        for batch in timed_batches:
            provider.encode(batch)
        elapsed = time.perf_counter() - start
        completed = len(timed_batches)
        throughput_by_batch[batch_size] = (
            batch_size * completed / elapsed if elapsed > 0 else float("inf")
        )

    peak_bytes = provider.status()
    return BenchReport(
        model_id=provider.model_id,
        latency=latency_stats(lat_samples),
        throughput_by_batch=throughput_by_batch,
        best_throughput=max(throughput_by_batch.values()),
        peak_memory_gb=peak_bytes / _BYTES_PER_GB,
        emb_dim=provider.dim,
        echo_overhead=latency_stats(echo_samples),
    )
