"""Report assembly and emission.

A report is a plain JSON-able dict of named sections.  Section payloads
carry full unrounded precision; the markdown renderer applies the display
rounding (3 decimals for separations and means, 1 for throughput, 2 for
memory) via Python's float formatting, which rounds half-to-even.  JSON
emission is deterministic (sorted keys, stable float repr), so re-ingesting
an emitted report and emitting it again is byte-identical.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .benchharness import BenchReport
from .embedspace import SeparationResult
from .errors import IoError
from .statkit import BootstrapConfig, BootstrapResult, CorrelationResult, PairwiseComparison
from .tradeoff import (
    TIER_BOUNDS,
    UTILITY_THRESHOLD,
    AblationCell,
    AblationSummary,
    CohortMedians,
    Deployment,
    GainRecord,
    LicensePartition,
    ModelProfile,
    ParetoResult,
    classify_tier,
    memory_efficiency,
)

FORMATS = ("markdown", "csv", "json")


def jsonify(value: Any) -> Any:
    """Normalize to plain JSON types: str keys, lists, floats, no numpy."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [jsonify(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(jsonify(k)): jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    return value


# --- section builders ------------------------------------------------------

def separation_section(
    rows: Sequence[Mapping[str, Any]],
    bounds: tuple[float, float] = TIER_BOUNDS,
    utility_threshold: float = UTILITY_THRESHOLD,
) -> dict:
    """Separation table from rows with name/params/sim_similar/sim_different.

    The displayed separation is always recomputed from the two means; a
    row's own published value, when given, rides along for comparison.
    """
    out_rows = []
    for row in rows:
        recomputed = row["sim_similar"] - row["sim_different"]
        out_rows.append(
            {
                "name": row["name"],
                "params": row.get("params", ""),
                "sim_similar": row["sim_similar"],
                "sim_different": row["sim_different"],
                "separation": recomputed,
                "published_separation": row.get("published_separation"),
            }
        )
    above = sum(1 for r in out_rows if r["separation"] > utility_threshold)
    return {
        "rows": out_rows,
        "tier_bounds": list(bounds),
        "utility_threshold": utility_threshold,
        "above_utility_threshold": above,
    }


def measured_separation_section(results: Sequence[SeparationResult]) -> dict:
    """Live scoring results: per-category stats plus the separation score."""
    rows = []
    for result in results:
        stats = {
            cat.value: {"mean": s.mean, "sd": s.sd, "n": s.n}
            for cat, s in result.stats_by_category.items()
        }
        rows.append(
            {
                "model_id": result.model_id,
                "separation": result.separation,
                "categories": stats,
            }
        )
    return {"rows": rows}


def efficiency_section(profiles: Sequence[ModelProfile]) -> dict:
    return {
        "rows": [
            {
                "name": p.name,
                "throughput_eps": p.throughput_eps,
                "memory_gb": p.memory_gb,
                "emb_dim": p.emb_dim,
            }
            for p in profiles
        ]
    }


def memory_efficiency_section(profiles: Sequence[ModelProfile]) -> dict:
    rows = [
        {"name": p.name, "emb_per_sec_per_gb": memory_efficiency(p)} for p in profiles
    ]
    rows.sort(key=lambda r: -r["emb_per_sec_per_gb"])
    return {"rows": rows}


def tier_section(
    profiles: Sequence[ModelProfile],
    bounds: tuple[float, float] = TIER_BOUNDS,
    utility_threshold: float = UTILITY_THRESHOLD,
) -> dict:
    rows = [
        {
            "name": p.name,
            "separation": p.separation,
            "tier": classify_tier(p.separation, bounds).label,
        }
        for p in profiles
    ]
    return {
        "rows": rows,
        "tier_bounds": list(bounds),
        "utility_threshold": utility_threshold,
        "above_utility_threshold": sum(
            1 for p in profiles if p.separation > utility_threshold
        ),
    }


def gains_section(gains: Sequence[GainRecord], medians: CohortMedians | None) -> dict:
    section: dict[str, Any] = {
        "rows": [
            {
                "name": g.name,
                "zero_shot": g.zero_shot,
                "adapted": g.adapted,
                "absolute_gain": g.absolute_gain,
                "relative_pct": g.relative_pct,
                "improved": g.improved,
            }
            for g in gains
        ]
    }
    if medians is not None:
        section["medians_over_improved"] = {
            "relative_pct": medians.median_relative_pct,
            "zero_shot": medians.median_zero_shot,
            "adapted": medians.median_adapted,
            "improved_count": medians.improved_count,
            "declined_count": medians.declined_count,
            "total": medians.total,
        }
    return section


def pareto_section(result: ParetoResult) -> dict:
    return {
        "frontier": [
            {
                "name": p.name,
                "separation": p.separation,
                "throughput_eps": p.throughput_eps,
            }
            for p in result.frontier
        ],
        "dominated": [
            {
                "name": d.profile.name,
                "separation": d.profile.separation,
                "throughput_eps": d.profile.throughput_eps,
                "dominators": [
                    {
                        "dominator": m.dominator,
                        "separation_margin_pct": m.separation_margin_pct,
                        "throughput_margin_pct": m.throughput_margin_pct,
                    }
                    for m in d.dominators
                ],
            }
            for d in result.dominated
        ],
    }


def license_section(partition: LicensePartition, deployment: Deployment) -> dict:
    table = [
        {
            "name": p.name,
            "license_id": p.license.license_id,
            "commercial_ok": p.license.commercial_ok,
            "attribution_required": p.license.attribution_required,
            "service_restricted": p.license.service_restricted,
        }
        for p in list(partition.allowed) + [pair[0] for pair in partition.flagged]
    ]
    table.sort(key=lambda r: r["name"])
    return {
        "deployment": deployment.value,
        "allowed": [p.name for p in partition.allowed],
        "flagged": [
            {"name": p.name, "reason": reason} for p, reason in partition.flagged
        ],
        "table": table,
    }


def ablation_section(cells: Sequence[AblationCell], summary: AblationSummary) -> dict:
    return {
        "cells": [
            {
                "data_fraction": c.data_fraction,
                "loss": c.loss,
                "rank": c.rank,
                "separation": c.separation,
            }
            for c in cells
        ],
        "mean_by_fraction_loss": {
            f"{fraction}/{loss}": value
            for (fraction, loss), value in summary.mean_by_fraction_loss.items()
        },
        "rank_spread": {
            f"{fraction}/{loss}": value
            for (fraction, loss), value in summary.rank_spread.items()
        },
        "best_by_fraction": {
            str(fraction): {
                "loss": cell.loss,
                "rank": cell.rank,
                "separation": cell.separation,
            }
            for fraction, cell in summary.best_by_fraction.items()
        },
    }


def stats_section(
    bootstrap: Mapping[str, BootstrapResult] | None = None,
    cfg: BootstrapConfig | None = None,
    pairwise: Sequence[PairwiseComparison] | None = None,
    correlations: Mapping[str, CorrelationResult] | None = None,
) -> dict:
    section: dict[str, Any] = {}
    if bootstrap is not None:
        section["bootstrap"] = {
            name: {
                "point": r.point,
                "lo": r.lo,
                "hi": r.hi,
                "width": r.width,
                "analytic": r.analytic,
            }
            for name, r in bootstrap.items()
        }
        if cfg is not None:
            section["bootstrap_config"] = {
                "resamples": cfg.resamples,
                "confidence": cfg.confidence,
                "seed": cfg.seed,
                "pairs_per_category": cfg.pairs_per_category,
            }
    if pairwise is not None:
        section["pairwise"] = [
            {
                "model_a": c.model_a,
                "model_b": c.model_b,
                "t": c.t,
                "df": c.df,
                "p": c.p,
                "p_holm": c.p_holm,
                "d": c.d,
                "sigma_pooled": c.sigma_pooled,
            }
            for c in pairwise
        ]
    if correlations is not None:
        section["correlations"] = {
            label: {"r": r.r, "p": r.p, "n": r.n} for label, r in correlations.items()
        }
    return section


def bench_section(reports: Sequence[BenchReport]) -> dict:
    def latency(stats) -> dict:
        return {
            "mean_ms": stats.mean_ms,
            "sd_ms": stats.sd_ms,
            "p50_ms": stats.p50_ms,
            "p95_ms": stats.p95_ms,
            "samples": stats.samples,
        }

    return {
        "rows": [
            {
                "model_id": r.model_id,
                "emb_dim": r.emb_dim,
                "latency": latency(r.latency),
                "echo_overhead": latency(r.echo_overhead),
                "throughput_by_batch": {
                    str(b): v for b, v in r.throughput_by_batch.items()
                },
                "best_throughput": r.best_throughput,
                "peak_memory_gb": r.peak_memory_gb,
            }
            for r in reports
        ]
    }


# --- markdown rendering ----------------------------------------------------

def _md_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> list[str]:
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _f3(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def _pct0(value: float | None) -> str:
    return "n/a" if value is None else f"{value:+.0f}%"


def _pct1(value: float | None) -> str:
    return "n/a" if value is None else f"{value:+.1f}%"


SEPARATION_FOOTNOTE = "*Separation = Sim(similar) − Sim(different).*"


def render_markdown(report: Mapping[str, Any]) -> str:
    """Render the known sections of a report dict as a markdown document."""
    lines: list[str] = ["# Embedding evaluation report", ""]

    if "separation" in report:
        sec = report["separation"]
        lines += ["## Separation scores", ""]
        lines += _md_table(
            ["Model", "Params", "Sim(similar)", "Sim(different)", "Separation"],
            (
                [
                    r["name"],
                    str(r["params"]),
                    _f3(r["sim_similar"]),
                    _f3(r["sim_different"]),
                    _f3(r["separation"]),
                ]
                for r in sec["rows"]
            ),
        )
        lines += ["", SEPARATION_FOOTNOTE, ""]

    if "separation_measured" in report:
        lines += ["## Measured separation", ""]
        rows = report["separation_measured"]["rows"]
        lines += _md_table(
            ["Model", "Sim(similar)", "Sim(different)", "Sim(negation)", "Separation"],
            (
                [
                    r["model_id"],
                    _f3(r["categories"].get("similar", {}).get("mean")),
                    _f3(r["categories"].get("different", {}).get("mean")),
                    _f3(r["categories"].get("negation", {}).get("mean")),
                    _f3(r["separation"]),
                ]
                for r in rows
            ),
        )
        lines += ["", SEPARATION_FOOTNOTE, ""]

    if "efficiency" in report:
        lines += ["## Inference efficiency", ""]
        lines += _md_table(
            ["Model", "Throughput (emb/s)", "Memory (GB)", "Emb dim"],
            (
                [
                    r["name"],
                    f"{r['throughput_eps']:.1f}",
                    f"{r['memory_gb']:.2f}",
                    str(r["emb_dim"]),
                ]
                for r in report["efficiency"]["rows"]
            ),
        )
        lines.append("")

    if "memory_efficiency" in report:
        lines += ["## Memory efficiency", ""]
        lines += _md_table(
            ["Model", "Throughput per GB (emb/s/GB)"],
            (
                [r["name"], f"{r['emb_per_sec_per_gb']:.1f}"]
                for r in report["memory_efficiency"]["rows"]
            ),
        )
        lines.append("")

    if "tiers" in report:
        sec = report["tiers"]
        low, high = sec["tier_bounds"]
        lines += ["## Performance tiers", ""]
        lines += _md_table(
            ["Model", "Separation", "Tier"],
            ([r["name"], _f3(r["separation"]), r["tier"]] for r in sec["rows"]),
        )
        lines += [
            "",
            f"Bands: high ≥ {high:.2f}, moderate ≥ {low:.2f}, low below. "
            f"{sec['above_utility_threshold']} of {len(sec['rows'])} models exceed "
            f"the utility threshold {sec['utility_threshold']:.2f}.",
            "",
        ]

    if "gains" in report:
        sec = report["gains"]
        lines += ["## Adaptation gains", ""]
        lines += _md_table(
            ["Model", "Zero-shot", "Adapted", "Gain", "Relative"],
            (
                [
                    r["name"],
                    _f3(r["zero_shot"]),
                    _f3(r["adapted"]),
                    f"{r['absolute_gain']:+.3f}",
                    _pct0(r["relative_pct"]),
                ]
                for r in sec["rows"]
            ),
        )
        lines.append("")
        med = sec.get("medians_over_improved")
        if med:
            lines += [
                f"{med['improved_count']} of {med['total']} models improved. "
                f"Medians over improved models: relative {_pct0(med['relative_pct'])}, "
                f"zero-shot {_f3(med['zero_shot'])}, adapted {_f3(med['adapted'])}.",
                "",
            ]

    if "pareto" in report:
        sec = report["pareto"]
        lines += ["## Pareto frontier (separation vs throughput)", ""]
        frontier = ", ".join(
            f"{r['name']} ({r['throughput_eps']:.1f} emb/s, {_f3(r['separation'])})"
            for r in sec["frontier"]
        )
        lines += [f"Frontier, ascending throughput: {frontier}.", ""]
        dominated_rows = [
            [
                d["name"],
                m["dominator"],
                _pct1(m["separation_margin_pct"]),
                _pct1(m["throughput_margin_pct"]),
            ]
            for d in sec["dominated"]
            for m in d["dominators"]
        ]
        lines += _md_table(
            ["Model", "Dominated by", "Separation margin", "Throughput margin"],
            dominated_rows,
        )
        lines.append("")

    if "ablation" in report:
        sec = report["ablation"]
        lines += ["## Adapter ablation grid", ""]
        by_cell = {
            (c["data_fraction"], c["loss"], c["rank"]): c["separation"]
            for c in sec["cells"]
        }
        fractions = sorted({c["data_fraction"] for c in sec["cells"]})
        losses = sorted({c["loss"] for c in sec["cells"]})
        ranks = sorted({c["rank"] for c in sec["cells"]})
        lines += _md_table(
            ["Data", "Loss"] + [f"r={r}" for r in ranks],
            (
                [f"{fraction}%", loss]
                + [_f3(by_cell.get((fraction, loss, r))) for r in ranks]
                for fraction in fractions
                for loss in losses
            ),
        )
        lines.append("")
        lines += _md_table(
            ["Data", "Loss", "Mean", "Rank spread"],
            (
                [
                    key.split("/")[0] + "%",
                    key.split("/")[1],
                    _f3(value),
                    _f3(sec["rank_spread"][key]),
                ]
                for key, value in sec["mean_by_fraction_loss"].items()
            ),
        )
        best = "; ".join(
            f"{fraction}%: {cell['loss']} r={cell['rank']} ({_f3(cell['separation'])})"
            for fraction, cell in sec["best_by_fraction"].items()
        )
        lines += ["", f"Best per data fraction — {best}.", ""]

    if "stats" in report:
        sec = report["stats"]
        if "bootstrap" in sec:
            cfg = sec.get("bootstrap_config", {})
            suffix = (
                f" ({cfg['resamples']} resamples, seed {cfg['seed']})" if cfg else ""
            )
            lines += [f"## Bootstrap confidence intervals{suffix}", ""]
            lines += _md_table(
                ["Model", "Point", "Lo", "Hi", "Width", "Analytic"],
                (
                    [
                        name,
                        _f3(r["point"]),
                        _f3(r["lo"]),
                        _f3(r["hi"]),
                        _f3(r["width"]),
                        _f3(r["analytic"]),
                    ]
                    for name, r in sec["bootstrap"].items()
                ),
            )
            lines.append("")
        if "pairwise" in sec:
            lines += ["## Pairwise comparisons (Welch t, Holm-adjusted)", ""]
            lines += _md_table(
                ["Model A", "Model B", "t", "df", "p", "p (Holm)", "d"],
                (
                    [
                        c["model_a"],
                        c["model_b"],
                        f"{c['t']:.3f}",
                        f"{c['df']:.1f}",
                        f"{c['p']:.3g}",
                        f"{c['p_holm']:.3g}",
                        f"{c['d']:.3f}",
                    ]
                    for c in sec["pairwise"]
                ),
            )
            lines.append("")
        if "correlations" in sec:
            lines += ["## Correlations", ""]
            lines += _md_table(
                ["Variables", "r", "p", "n"],
                (
                    [label, _f3(r["r"]), _f3(r["p"]), str(r["n"])]
                    for label, r in sec["correlations"].items()
                ),
            )
            lines.append("")

    if "bench" in report:
        for row in report["bench"]["rows"]:
            lat, echo = row["latency"], row["echo_overhead"]
            lines += [
                f"## Benchmark: {row['model_id']}",
                "",
                f"Single-sample latency over {lat['samples']} timed iterations: "
                f"mean {lat['mean_ms']:.3f} ms ± {lat['sd_ms']:.3f} "
                f"(p50 {lat['p50_ms']:.3f}, p95 {lat['p95_ms']:.3f}). "
                f"Echo overhead mean {echo['mean_ms']:.3f} ms.",
                "",
            ]
            lines += _md_table(
                ["Batch size", "Throughput (emb/s)"],
                (
                    [batch, f"{value:.1f}"]
                    for batch, value in sorted(
                        row["throughput_by_batch"].items(), key=lambda kv: int(kv[0])
                    )
                ),
            )
            lines += [
                "",
                f"Best throughput {row['best_throughput']:.1f} emb/s; peak memory "
                f"{row['peak_memory_gb']:.2f} GB; dim {row['emb_dim']}.",
                "",
            ]

    if "licenses" in report:
        sec = report["licenses"]
        lines += ["## Licensing", ""]
        lines += _md_table(
            ["Model", "License", "Commercial", "Attribution", "Restrictions"],
            (
                [
                    r["name"],
                    r["license_id"],
                    "Yes" if r["commercial_ok"] else "No",
                    "Required" if r["attribution_required"] else "No",
                    "Service" if r["service_restricted"] else "None",
                ]
                for r in sec["table"]
            ),
        )
        flagged = (
            "; ".join(f"{f['name']} ({f['reason']})" for f in sec["flagged"]) or "none"
        )
        lines += [
            "",
            f"Gate for {sec['deployment']} deployment: {len(sec['allowed'])} allowed; "
            f"flagged: {flagged}.",
            "",
        ]

    return "\n".join(lines).rstrip() + "\n"


# --- CSV rendering ---------------------------------------------------------

def _csv_text(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def render_csv(report: Mapping[str, Any]) -> dict[str, str]:
    """Per-section CSV files (full precision), keyed by file name."""
    tables: dict[str, str] = {}

    if "separation" in report:
        tables["separation.csv"] = _csv_text(
            ["name", "params", "sim_similar", "sim_different", "separation"],
            (
                [r["name"], r["params"], r["sim_similar"], r["sim_different"], r["separation"]]
                for r in report["separation"]["rows"]
            ),
        )
    if "separation_measured" in report:
        rows = []
        for r in report["separation_measured"]["rows"]:
            for category, stats in sorted(r["categories"].items()):
                rows.append(
                    [r["model_id"], category, stats["mean"], stats["sd"], stats["n"]]
                )
        tables["separation_measured.csv"] = _csv_text(
            ["model_id", "category", "mean", "sd", "n"], rows
        )
    if "efficiency" in report:
        tables["efficiency.csv"] = _csv_text(
            ["name", "throughput_eps", "memory_gb", "emb_dim"],
            (
                [r["name"], r["throughput_eps"], r["memory_gb"], r["emb_dim"]]
                for r in report["efficiency"]["rows"]
            ),
        )
    if "memory_efficiency" in report:
        tables["memory_efficiency.csv"] = _csv_text(
            ["name", "emb_per_sec_per_gb"],
            (
                [r["name"], r["emb_per_sec_per_gb"]]
                for r in report["memory_efficiency"]["rows"]
            ),
        )
    if "tiers" in report:
        tables["tiers.csv"] = _csv_text(
            ["name", "separation", "tier"],
            ([r["name"], r["separation"], r["tier"]] for r in report["tiers"]["rows"]),
        )
    if "gains" in report:
        tables["gains.csv"] = _csv_text(
            ["name", "zero_shot", "adapted", "absolute_gain", "relative_pct", "improved"],
            (
                [
                    r["name"],
                    r["zero_shot"],
                    r["adapted"],
                    r["absolute_gain"],
                    "" if r["relative_pct"] is None else r["relative_pct"],
                    r["improved"],
                ]
                for r in report["gains"]["rows"]
            ),
        )
    if "pareto" in report:
        tables["pareto.csv"] = _csv_text(
            ["name", "status", "dominator", "separation_margin_pct", "throughput_margin_pct"],
            [
                [r["name"], "frontier", "", "", ""]
                for r in report["pareto"]["frontier"]
            ]
            + [
                [
                    d["name"],
                    "dominated",
                    m["dominator"],
                    m["separation_margin_pct"],
                    m["throughput_margin_pct"],
                ]
                for d in report["pareto"]["dominated"]
                for m in d["dominators"]
            ],
        )
    if "ablation" in report:
        tables["ablation.csv"] = _csv_text(
            ["data_fraction", "loss", "rank", "separation"],
            (
                [c["data_fraction"], c["loss"], c["rank"], c["separation"]]
                for c in report["ablation"]["cells"]
            ),
        )
    if "stats" in report:
        sec = report["stats"]
        if "bootstrap" in sec:
            tables["bootstrap.csv"] = _csv_text(
                ["model", "point", "lo", "hi", "width", "analytic"],
                (
                    [name, r["point"], r["lo"], r["hi"], r["width"], r["analytic"]]
                    for name, r in sec["bootstrap"].items()
                ),
            )
        if "pairwise" in sec:
            tables["pairwise.csv"] = _csv_text(
                ["model_a", "model_b", "t", "df", "p", "p_holm", "d", "sigma_pooled"],
                (
                    [
                        c["model_a"],
                        c["model_b"],
                        c["t"],
                        c["df"],
                        c["p"],
                        c["p_holm"],
                        c["d"],
                        c["sigma_pooled"],
                    ]
                    for c in sec["pairwise"]
                ),
            )
        if "correlations" in sec:
            tables["correlations.csv"] = _csv_text(
                ["variables", "r", "p", "n"],
                (
                    [label, r["r"], r["p"], r["n"]]
                    for label, r in sec["correlations"].items()
                ),
            )
    if "bench" in report:
        rows = []
        for r in report["bench"]["rows"]:
            for batch, value in sorted(
                r["throughput_by_batch"].items(), key=lambda kv: int(kv[0])
            ):
                rows.append([r["model_id"], batch, value])
        tables["bench_throughput.csv"] = _csv_text(
            ["model_id", "batch_size", "throughput_eps"], rows
        )
        tables["bench_latency.csv"] = _csv_text(
            [
                "model_id",
                "mean_ms",
                "sd_ms",
                "p50_ms",
                "p95_ms",
                "samples",
                "echo_mean_ms",
                "peak_memory_gb",
                "emb_dim",
            ],
            (
                [
                    r["model_id"],
                    r["latency"]["mean_ms"],
                    r["latency"]["sd_ms"],
                    r["latency"]["p50_ms"],
                    r["latency"]["p95_ms"],
                    r["latency"]["samples"],
                    r["echo_overhead"]["mean_ms"],
                    r["peak_memory_gb"],
                    r["emb_dim"],
                ]
                for r in report["bench"]["rows"]
            ),
        )
    if "licenses" in report:
        tables["licenses.csv"] = _csv_text(
            ["name", "license_id", "commercial_ok", "attribution_required", "service_restricted"],
            (
                [
                    r["name"],
                    r["license_id"],
                    r["commercial_ok"],
                    r["attribution_required"],
                    r["service_restricted"],
                ]
                for r in report["licenses"]["table"]
            ),
        )
    return tables


# --- plot data -------------------------------------------------------------

def plot_data(report: Mapping[str, Any]) -> dict[str, dict]:
    """Chart-ready JSON payloads derived from report sections."""
    plots: dict[str, dict] = {}

    if "tiers" in report:
        sec = report["tiers"]
        plots["separation_bars.json"] = {
            "title": "Separation score by model",
            "x_label": "Model",
            "y_label": "Separation",
            "bars": [
                {"label": r["name"], "value": r["separation"]} for r in sec["rows"]
            ],
            "threshold": sec["utility_threshold"],
        }

    have_profiles = "efficiency" in report and "tiers" in report
    if have_profiles:
        seps = {r["name"]: r["separation"] for r in report["tiers"]["rows"]}
        eff_rows = report["efficiency"]["rows"]
        plots["tradeoff_scatter.json"] = {
            "title": "Separation vs throughput",
            "x_label": "Throughput (emb/s)",
            "y_label": "Separation",
            "points": [
                {
                    "label": r["name"],
                    "x": r["throughput_eps"],
                    "y": seps[r["name"]],
                    "memory_gb": r["memory_gb"],
                }
                for r in eff_rows
                if r["name"] in seps
            ],
        }
        plots["dimension_efficiency.json"] = {
            "title": "Embedding dimension vs efficiency",
            "x_label": "Embedding dimension",
            "left_y_label": "Throughput (emb/s)",
            "right_y_label": "Memory (GB)",
            "points": [
                {
                    "label": r["name"],
                    "emb_dim": r["emb_dim"],
                    "throughput_eps": r["throughput_eps"],
                    "memory_gb": r["memory_gb"],
                }
                for r in eff_rows
            ],
        }

    if "pareto" in report:
        sec = report["pareto"]
        all_points = [
            {"label": r["name"], "x": r["throughput_eps"], "y": r["separation"]}
            for r in list(sec["frontier"]) + list(sec["dominated"])
        ]
        plots["pareto_frontier.json"] = {
            "title": "Pareto frontier: separation vs throughput",
            "x_label": "Throughput (emb/s)",
            "y_label": "Separation",
            "points": all_points,
            "frontier_polyline": [
                [r["throughput_eps"], r["separation"]] for r in sec["frontier"]
            ],
        }

    if "memory_efficiency" in report:
        plots["memory_efficiency_bars.json"] = {
            "title": "Throughput per GB of memory",
            "x_label": "Model",
            "y_label": "emb/s per GB",
            "bars": [
                {"label": r["name"], "value": r["emb_per_sec_per_gb"]}
                for r in report["memory_efficiency"]["rows"]
            ],
        }
    return plots


# --- emission --------------------------------------------------------------

def dumps_json(report: Mapping[str, Any]) -> str:
    """Deterministic JSON text: sorted keys, strict finite floats."""
    return json.dumps(
        jsonify(report), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False
    ) + "\n"


def emit_report(
    report: Mapping[str, Any],
    out_dir: str | Path,
    formats: Sequence[str] = ("markdown",),
    plots: bool = True,
) -> list[Path]:
    """Write the requested report renderings; returns the written paths.

    json -> report.json, markdown -> report.md, csv -> csv/<section>.csv.
    Plot-data JSON files go under plots/ whenever their sections exist.
    """
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"unknown report format {fmt!r} (choose from {FORMATS})")
    out = Path(out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        if "json" in formats:
            path = out / "report.json"
            path.write_text(dumps_json(report), encoding="utf-8")
            written.append(path)
        if "markdown" in formats:
            path = out / "report.md"
            path.write_text(render_markdown(report), encoding="utf-8")
            written.append(path)
        if "csv" in formats:
            csv_dir = out / "csv"
            csv_dir.mkdir(exist_ok=True)
            for name, text in render_csv(report).items():
                path = csv_dir / name
                path.write_text(text, encoding="utf-8")
                written.append(path)
        if plots:
            payloads = plot_data(report)
            if payloads:
                plot_dir = out / "plots"
                plot_dir.mkdir(exist_ok=True)
                for name, payload in payloads.items():
                    path = plot_dir / name
                    path.write_text(dumps_json(payload), encoding="utf-8")
                    written.append(path)
    except OSError as exc:
        raise IoError(f"cannot write report to {out}: {exc}") from exc
    return written
