"""Command-line interface.

Subcommands: score, stats, pareto, ablation, bench, report, all.  Every
input file is checked for existence and parsed before any computation
starts; all randomness flows from the single --seed flag.  Exit codes:
0 success, 2 missing input file, 1 any other failure, always with a
machine-readable JSON error line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import fixtures, report as report_mod
from .benchharness import BenchPlan, connect, run_bench
from .embedspace import category_stats, separation
from .errors import EmbedGaugeError
from .formats import (
    build_pair_embeddings,
    load_ablation,
    load_embeddings,
    load_pairs,
    load_profiles,
    load_summaries,
    summaries_by_model,
)
from .statkit import BootstrapConfig, bootstrap_separation_ci, pairwise_suite, pearson
from .tradeoff import (
    TIER_BOUNDS,
    UTILITY_THRESHOLD,
    Deployment,
    ablation_summary,
    cohort_medians,
    gain,
    license_gate,
    pareto_frontier,
)

PROVIDER_ENV = "EMBEDGAUGE_PROVIDER"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING_INPUT = 2


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation."""

    command: str
    seed: int = 0
    out: Path = Path("embedgauge-out")
    formats: tuple[str, ...] = ("markdown",)
    utility_threshold: float = UTILITY_THRESHOLD
    tier_bounds: tuple[float, float] = TIER_BOUNDS
    pairs: Path | None = None
    embeddings: Path | None = None
    model_id: str = "model"
    summaries: Path | None = None
    profiles: Path | None = None
    grid: Path | None = None
    results: Path | None = None
    provider: str | None = None
    payload: Path | None = None
    warmup_iters: int = 10
    timed_iters: int = 100
    batch_sizes: tuple[int, ...] = (1, 4, 16, 32)
    resamples: int = 5000
    samples_per_model: int = 50
    workers: int = 1

    def input_paths(self) -> list[Path]:
        """Every referenced input file; all must exist before work starts."""
        return [
            p
            for p in (
                self.pairs,
                self.embeddings,
                self.summaries,
                self.profiles,
                self.grid,
                self.results,
                self.payload,
            )
            if p is not None
        ]


def _load_reference_profiles(config: RunConfig):
    if config.profiles is not None:
        return load_profiles(config.profiles)
    return fixtures.reference_profiles()


def _load_summary_map(config: RunConfig):
    path = config.summaries or fixtures.fixture_path("summaries_demo.csv")
    grouped = summaries_by_model(load_summaries(path))
    from .embedspace import PairCategory

    out = {}
    for model_id, by_cat in grouped.items():
        sim = by_cat.get(PairCategory.SIMILAR)
        diff = by_cat.get(PairCategory.DIFFERENT)
        if sim is None or diff is None:
            raise EmbedGaugeError(
                f"model {model_id!r} in {path} lacks a similar or different summary"
            )
        out[model_id] = (sim, diff)
    return out


# --- section assembly per command -----------------------------------------

def _sections_score(config: RunConfig) -> dict:
    pairs = load_pairs(config.pairs)
    embeddings = load_embeddings(config.embeddings)
    joined = build_pair_embeddings(pairs, embeddings)
    stats = category_stats(pairs, joined)
    result = separation(stats, model_id=config.model_id)
    return {
        "separation_measured": report_mod.measured_separation_section([result]),
    }


def _sections_stats(config: RunConfig) -> dict:
    summary_map = _load_summary_map(config)
    cfg = BootstrapConfig(
        resamples=config.resamples,
        seed=config.seed,
        pairs_per_category=next(iter(summary_map.values()))[0].n if summary_map else 50,
    )
    bootstrap = {
        name: bootstrap_separation_ci(sim, diff, cfg, workers=config.workers)
        for name, (sim, diff) in summary_map.items()
    }
    comparisons = pairwise_suite(
        summary_map, cfg, samples_per_model=config.samples_per_model
    )
    profiles = _load_reference_profiles(config)
    correlations = {
        "separation_vs_emb_dim": pearson(
            [p.separation for p in profiles], [p.emb_dim for p in profiles]
        ),
        "separation_vs_params": pearson(
            [p.separation for p in profiles], [p.params_millions for p in profiles]
        ),
    }
    return {
        "stats": report_mod.stats_section(
            bootstrap=bootstrap, cfg=cfg, pairwise=comparisons, correlations=correlations
        )
    }


def _sections_pareto(config: RunConfig) -> dict:
    profiles = _load_reference_profiles(config)
    result = pareto_frontier(profiles)
    partition = license_gate(profiles, Deployment.EMBEDDING_SERVICE)
    return {
        "pareto": report_mod.pareto_section(result),
        "efficiency": report_mod.efficiency_section(profiles),
        "memory_efficiency": report_mod.memory_efficiency_section(profiles),
        "tiers": report_mod.tier_section(
            profiles, config.tier_bounds, config.utility_threshold
        ),
        "licenses": report_mod.license_section(partition, Deployment.EMBEDDING_SERVICE),
    }


def _sections_ablation(config: RunConfig) -> dict:
    cells = (
        load_ablation(config.grid)
        if config.grid is not None
        else fixtures.reference_ablation()
    )
    summary = ablation_summary(cells)
    return {"ablation": report_mod.ablation_section(cells, summary)}


def _sections_bench(config: RunConfig) -> dict:
    command = config.provider or os.environ.get(PROVIDER_ENV)
    if not command:
        raise EmbedGaugeError(
            f"no provider command: pass --provider or set {PROVIDER_ENV}"
        )
    if config.payload is not None:
        payload = tuple(
            line
            for line in Path(config.payload).read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
    else:
        demo = fixtures.demo_pairs()
        payload = tuple(p.text_a for p in demo) + tuple(p.text_b for p in demo)
    plan = BenchPlan(
        payload=payload,
        warmup_iters=config.warmup_iters,
        timed_iters=config.timed_iters,
        batch_sizes=config.batch_sizes,
        seed=config.seed,
    )
    provider = connect(command)
    try:
        bench = run_bench(plan, provider)
    finally:
        provider.close()
    return {"bench": report_mod.bench_section([bench])}


def _sections_report(config: RunConfig) -> dict:
    with open(config.results, "r", encoding="utf-8") as fh:
        loaded = json.load(fh)
    if not isinstance(loaded, dict):
        raise EmbedGaugeError(f"{config.results}: expected a JSON report object")
    return loaded


def _sections_all(config: RunConfig) -> dict:
    rows = fixtures.reference_separations()
    profiles = _load_reference_profiles(config)
    published = {p.name: p.separation for p in profiles}
    sections = {
        "separation": report_mod.separation_section(
            [
                {
                    "name": r.name,
                    "params": r.params_label,
                    "sim_similar": r.sim_similar,
                    "sim_different": r.sim_different,
                    "published_separation": published.get(r.name),
                }
                for r in rows
            ],
            bounds=config.tier_bounds,
            utility_threshold=config.utility_threshold,
        ),
        "gains": report_mod.gains_section(
            gains := [
                gain(g.zero_shot, g.adapted, name=g.name)
                for g in fixtures.reference_gains()
            ],
            cohort_medians(gains),
        ),
    }
    sections.update(_sections_pareto(config))
    sections.update(_sections_ablation(config))
    sections.update(_sections_stats(config))
    return sections


_COMMANDS = {
    "score": _sections_score,
    "stats": _sections_stats,
    "pareto": _sections_pareto,
    "ablation": _sections_ablation,
    "bench": _sections_bench,
    "report": _sections_report,
    "all": _sections_all,
}


def run_pipeline(config: RunConfig) -> int:
    """Execute one command end to end; returns the process exit code."""
    try:
        for path in config.input_paths():
            if not Path(path).exists():
                raise FileNotFoundError(path)
        sections = _COMMANDS[config.command](config)
        written = report_mod.emit_report(sections, config.out, config.formats)
    except FileNotFoundError as exc:
        path = exc.args[0] if exc.args else exc.filename
        _error_line("missing_input", f"input file not found: {path}", path=str(path))
        return EXIT_MISSING_INPUT
    except EmbedGaugeError as exc:
        _error_line(type(exc).__name__, str(exc))
        return EXIT_ERROR
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        _error_line(type(exc).__name__, str(exc))
        return EXIT_ERROR
    for path in written:
        print(path)
    return EXIT_OK


def _error_line(kind: str, message: str, **extra) -> None:
    payload = {"ok": False, "error": kind, "message": message}
    payload.update(extra)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


# --- argument parsing ------------------------------------------------------

def _tier_bounds(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers")
    low, high = (float(p) for p in parts)
    if not low < high:
        raise argparse.ArgumentTypeError("tier bounds must satisfy low < high")
    return low, high


def _batch_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError("batch sizes must be positive")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument(
        "--out", type=Path, default=Path("embedgauge-out"), help="output directory"
    )
    common.add_argument(
        "--format",
        dest="formats",
        action="append",
        choices=report_mod.FORMATS,
        help="report format; repeatable (default: markdown)",
    )
    common.add_argument(
        "--threshold-utility",
        type=float,
        default=UTILITY_THRESHOLD,
        help="utility threshold used in reports",
    )
    common.add_argument(
        "--tier-bounds",
        type=_tier_bounds,
        default=TIER_BOUNDS,
        metavar="LOW,HIGH",
        help="tier band bounds, e.g. 0.25,0.45",
    )

    parser = argparse.ArgumentParser(
        prog="embedgauge",
        description="Embedding-model evaluation: separation scoring, statistics, "
        "trade-off analysis, and inference benchmarking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="score a pair set")
    p.add_argument("--pairs", type=Path, required=True, help="JSON-lines pair file")
    p.add_argument(
        "--embeddings",
        type=Path,
        required=True,
        help='binary embedding file with "<pair id>#a"/"#b" records',
    )
    p.add_argument("--model-id", default="model")

    p = sub.add_parser("stats", parents=[common], help="bootstrap + pairwise tests")
    p.add_argument("--summaries", type=Path, help="summary CSV (default: bundled demo)")
    p.add_argument("--profiles", type=Path, help="profile CSV (default: bundled)")
    p.add_argument("--resamples", type=int, default=5000)
    p.add_argument("--samples-per-model", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("pareto", parents=[common], help="frontier and efficiency")
    p.add_argument("--profiles", type=Path, help="profile CSV (default: bundled)")

    p = sub.add_parser("ablation", parents=[common], help="hyperparameter grid summary")
    p.add_argument("--grid", type=Path, help="ablation CSV (default: bundled)")

    p = sub.add_parser("bench", parents=[common], help="benchmark a provider")
    p.add_argument(
        "--provider", help=f"provider launch command (default: ${PROVIDER_ENV})"
    )
    p.add_argument("--payload", type=Path, help="text file, one sample per line")
    p.add_argument("--warmup", type=int, default=10, dest="warmup_iters")
    p.add_argument("--iters", type=int, default=100, dest="timed_iters")
    p.add_argument(
        "--batch-sizes", type=_batch_sizes, default=(1, 4, 16, 32), metavar="B1,B2,..."
    )

    p = sub.add_parser("report", parents=[common], help="re-render a saved report")
    p.add_argument("--results", type=Path, required=True, help="report.json to re-emit")

    p = sub.add_parser("all", parents=[common], help="full pipeline on bundled data")
    p.add_argument("--summaries", type=Path, help="summary CSV (default: bundled demo)")
    p.add_argument("--profiles", type=Path, help="profile CSV (default: bundled)")
    p.add_argument("--grid", type=Path, help="ablation CSV (default: bundled)")
    p.add_argument("--resamples", type=int, default=5000)
    p.add_argument("--samples-per-model", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    formats = tuple(dict.fromkeys(args.formats)) if args.formats else ("markdown",)
    config = RunConfig(
        command=args.command,
        seed=args.seed,
        out=args.out,
        formats=formats,
        utility_threshold=args.threshold_utility,
        tier_bounds=tuple(args.tier_bounds),
    )
    overrides = {
        name: getattr(args, name)
        for name in (
            "pairs",
            "embeddings",
            "model_id",
            "summaries",
            "profiles",
            "grid",
            "results",
            "provider",
            "payload",
            "warmup_iters",
            "timed_iters",
            "batch_sizes",
            "resamples",
            "samples_per_model",
            "workers",
        )
        if hasattr(args, name) and getattr(args, name) is not None
    }
    return replace(config, **overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run_pipeline(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
