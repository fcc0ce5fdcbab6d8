"""Deterministic stub provider for exercising the benchmark harness.

Speaks the embedding-provider protocol on stdin/stdout without any model
stack: vectors are a pure function of the input text, and each request can
carry a programmed delay.  Run as::

    python -m embedgauge.stub_provider --dim 16 --delay-ms 10
"""

from __future__ import annotations

import argparse
import hashlib
import json
import resource
import struct
import sys
import time


def stub_vector(text: str, dim: int) -> list[float]:
    """Deterministic pseudo-embedding in [-1, 1], a pure function of text."""
    out: list[float] = []
    counter = 0
    while len(out) < dim:
        digest = hashlib.blake2b(
            text.encode("utf-8") + counter.to_bytes(4, "little"), digest_size=32
        ).digest()
        for (raw,) in struct.iter_unpack("<I", digest):
            out.append(raw / 2147483647.5 - 1.0)
            if len(out) == dim:
                break
        counter += 1
    return out


def peak_rss_bytes() -> int:
    # ru_maxrss is kilobytes on Linux and monotone over the process lifetime
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def serve(dim: int, delay_ms: float, model_id: str) -> int:
    delay_s = delay_ms / 1000.0
    out = sys.stdout

    def reply(obj: dict) -> None:
        out.write(json.dumps(obj) + "\n")
        out.flush()

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
            cmd = msg.get("cmd")
        except json.JSONDecodeError as exc:
            reply({"ok": False, "error": f"bad json: {exc}"})
            continue
        if cmd == "hello":
            reply({"ok": True, "model_id": model_id, "dim": dim})
        elif cmd == "encode":
            texts = msg.get("texts")
            if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
                reply({"ok": False, "error": "encode expects a list of strings"})
                continue
            if delay_s > 0.0:
                time.sleep(delay_s)
            reply({"ok": True, "vectors": [stub_vector(t, dim) for t in texts]})
        elif cmd == "echo":
            reply({"ok": True})
        elif cmd == "status":
            reply({"ok": True, "peak_mem_bytes": peak_rss_bytes()})
        elif cmd == "shutdown":
            reply({"ok": True})
            return 0
        else:
            reply({"ok": False, "error": f"unknown command {cmd!r}"})
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=8, help="embedding dimension")
    parser.add_argument(
        "--delay-ms", type=float, default=0.0, help="programmed delay per request"
    )
    parser.add_argument("--model-id", default=None, help="reported model id")
    args = parser.parse_args(argv)
    if args.dim < 1:
        parser.error("--dim must be >= 1")
    if args.delay_ms < 0:
        parser.error("--delay-ms must be >= 0")
    model_id = args.model_id or f"stub-{args.dim}d"
    return serve(args.dim, args.delay_ms, model_id)


if __name__ == "__main__":
    sys.exit(main())
