"""Bundled reference data: the 10-model evaluation tables as typed objects.

The CSV files under ``data/`` carry the published per-model numbers
(separation scores, efficiency measurements, adaptation gains, license
terms, and the adapter ablation grid) plus two clearly-labeled
demonstration inputs (a small pair set and illustrative per-category
summaries).  Everything loads offline.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .embedspace import PairCategory, SentencePair
from .errors import DataError
from .formats import (
    SummaryRecord,
    _csv_rows,
    _parse_float,
    load_ablation,
    load_pairs,
    load_summaries,
)
from .tradeoff import (
    AblationCell,
    ArchClass,
    LicenseInfo,
    ModelProfile,
    parse_params,
)


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file."""
    path = resources.files(__package__) / "data" / name
    return Path(str(path))


@dataclass(frozen=True)
class SeparationRow:
    """One model's adapted-run similarity means and published separation."""

    name: str
    params_label: str
    arch_class: ArchClass
    sim_similar: float
    sim_different: float
    separation: float


def reference_separations() -> list[SeparationRow]:
    rows = []
    for lineno, row in _csv_rows(
        fixture_path("separation_scores.csv"),
        ["name", "params", "arch_class", "sim_similar", "sim_different", "separation"],
    ):
        rows.append(
            SeparationRow(
                name=row["name"],
                params_label=row["params"],
                arch_class=ArchClass(row["arch_class"]),
                sim_similar=_parse_float(row["sim_similar"], "sim_similar", lineno),
                sim_different=_parse_float(row["sim_different"], "sim_different", lineno),
                separation=_parse_float(row["separation"], "separation", lineno),
            )
        )
    return rows


@dataclass(frozen=True)
class EfficiencyRow:
    name: str
    throughput_eps: float
    memory_gb: float
    emb_dim: int


def reference_efficiency() -> list[EfficiencyRow]:
    rows = []
    for lineno, row in _csv_rows(
        fixture_path("inference_efficiency.csv"),
        ["name", "throughput_eps", "memory_gb", "emb_dim"],
    ):
        rows.append(
            EfficiencyRow(
                name=row["name"],
                throughput_eps=_parse_float(row["throughput_eps"], "throughput_eps", lineno),
                memory_gb=_parse_float(row["memory_gb"], "memory_gb", lineno),
                emb_dim=int(row["emb_dim"]),
            )
        )
    return rows


@dataclass(frozen=True)
class GainRow:
    name: str
    zero_shot: float
    adapted: float


def reference_gains() -> list[GainRow]:
    rows = []
    for lineno, row in _csv_rows(
        fixture_path("adaptation_gains.csv"), ["name", "zero_shot", "adapted"]
    ):
        rows.append(
            GainRow(
                name=row["name"],
                zero_shot=_parse_float(row["zero_shot"], "zero_shot", lineno),
                adapted=_parse_float(row["adapted"], "adapted", lineno),
            )
        )
    return rows


def reference_licenses() -> dict[str, LicenseInfo]:
    licenses: dict[str, LicenseInfo] = {}
    truthy = {"yes", "true", "1", "y"}
    for _, row in _csv_rows(
        fixture_path("licenses.csv"),
        ["name", "license_id", "commercial_ok", "attribution_required", "service_restricted"],
    ):
        licenses[row["name"]] = LicenseInfo(
            license_id=row["license_id"],
            commercial_ok=row["commercial_ok"].strip().lower() in truthy,
            attribution_required=row["attribution_required"].strip().lower() in truthy,
            service_restricted=row["service_restricted"].strip().lower() in truthy,
        )
    return licenses


def reference_ablation() -> list[AblationCell]:
    return load_ablation(fixture_path("ablation_grid.csv"))


def reference_profiles() -> list[ModelProfile]:
    """The 10 evaluated models as full profiles, joined across all tables.

    Row order follows the separation table (descending separation).
    """
    efficiency = {row.name: row for row in reference_efficiency()}
    gains = {row.name: row for row in reference_gains()}
    licenses = reference_licenses()
    profiles: list[ModelProfile] = []
    for row in reference_separations():
        missing = [
            label
            for label, table in (
                ("efficiency", efficiency),
                ("gains", gains),
                ("licenses", licenses),
            )
            if row.name not in table
        ]
        if missing:
            raise DataError(f"model {row.name!r} absent from fixture tables: {missing}")
        eff = efficiency[row.name]
        profiles.append(
            ModelProfile(
                name=row.name,
                params_millions=parse_params(row.params_label),
                emb_dim=eff.emb_dim,
                arch_class=row.arch_class,
                separation=row.separation,
                throughput_eps=eff.throughput_eps,
                memory_gb=eff.memory_gb,
                license=licenses[row.name],
                zero_shot_separation=gains[row.name].zero_shot,
            )
        )
    return profiles


def demo_pairs() -> list[SentencePair]:
    return load_pairs(fixture_path("pairs_demo.jsonl"))


def demo_summaries() -> list[SummaryRecord]:
    return load_summaries(fixture_path("summaries_demo.csv"))


__all__ = [
    "fixture_path",
    "SeparationRow",
    "EfficiencyRow",
    "GainRow",
    "reference_separations",
    "reference_efficiency",
    "reference_gains",
    "reference_licenses",
    "reference_ablation",
    "reference_profiles",
    "demo_pairs",
    "demo_summaries",
]
