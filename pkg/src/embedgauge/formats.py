"""File formats: pair sets, binary embeddings, and CSV summary tables.

Ingestion is total: every byte stream either parses cleanly or raises a
located error; nothing is silently skipped or partially accepted.

Binary embedding layout (little-endian throughout)::

    magic "EMB1" | u32 record count | u32 dim |
    per record: u32 id byte length | id UTF-8 bytes | dim * f32

CSV files may carry leading "#" comment lines before the header.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .embedspace import (
    CategoryStats,
    EmbeddingRecord,
    EmbeddingSet,
    PairCategory,
    SentencePair,
)
from .errors import (
    DataError,
    DuplicateIdError,
    FormatError,
    MissingEmbeddingError,
    ParseError,
)
from .tradeoff import AblationCell, ArchClass, LicenseInfo, ModelProfile, parse_params

EMB_MAGIC = b"EMB1"


# --- sentence pairs (JSON lines) -------------------------------------------

def load_pairs(path: str | Path) -> list[SentencePair]:
    """Load a pair set from a JSON-lines file.

    One object per line with keys id, text_a, text_b, category.  Category
    names are case-insensitive; duplicate ids are rejected.
    """
    pairs: list[SentencePair] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", line=lineno)
            try:
                pair_id = obj["id"]
                text_a = obj["text_a"]
                text_b = obj["text_b"]
                raw_category = obj["category"]
            except KeyError as exc:
                raise ParseError(f"missing key {exc.args[0]!r}", line=lineno) from exc
            if pair_id in seen:
                raise DuplicateIdError(f"duplicate pair id {pair_id!r} (line {lineno})")
            try:
                category = PairCategory.parse(raw_category)
                pair = SentencePair(
                    id=pair_id, text_a=text_a, text_b=text_b, category=category
                )
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
            seen.add(pair_id)
            pairs.append(pair)
    return pairs


def write_pairs(path: str | Path, pairs: Iterable[SentencePair]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(
                json.dumps(
                    {
                        "id": pair.id,
                        "text_a": pair.text_a,
                        "text_b": pair.text_b,
                        "category": pair.category.value,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


# --- binary embeddings -----------------------------------------------------

def load_embeddings(path: str | Path) -> EmbeddingSet:
    """Read a binary embedding file into an EmbeddingSet.

    The header's record count and dimension are authoritative; truncated
    records, trailing bytes, bad UTF-8 ids, duplicate ids, and non-finite
    floats are all rejected.
    """
    blob = Path(path).read_bytes()
    if blob[:4] != EMB_MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}, expected {EMB_MAGIC!r}")
    if len(blob) < 12:
        raise FormatError("truncated header")
    count, dim = struct.unpack_from("<II", blob, 4)
    if dim < 1:
        raise FormatError(f"declared dimension must be >= 1, got {dim}")
    records = EmbeddingSet(dim=dim)
    offset = 12
    for index in range(count):
        if offset + 4 > len(blob):
            raise FormatError(f"record {index}: truncated id length")
        (id_len,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + id_len > len(blob):
            raise FormatError(f"record {index}: truncated id")
        try:
            rec_id = blob[offset : offset + id_len].decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"record {index}: id is not valid UTF-8") from exc
        offset += id_len
        vec_bytes = dim * 4
        if offset + vec_bytes > len(blob):
            raise FormatError(f"record {index} ({rec_id!r}): truncated vector")
        vector = np.frombuffer(blob, dtype="<f4", count=dim, offset=offset)
        offset += vec_bytes
        if not np.all(np.isfinite(vector)):
            raise DataError(f"record {index} ({rec_id!r}): non-finite value")
        if rec_id in records:
            raise DuplicateIdError(f"duplicate embedding id {rec_id!r}")
        records.add(EmbeddingRecord(id=rec_id, vector=vector.astype(np.float64)))
    if offset != len(blob):
        raise FormatError(f"{len(blob) - offset} trailing bytes after last record")
    return records


def write_embeddings(path: str | Path, embeddings: EmbeddingSet) -> None:
    """Write an EmbeddingSet in the binary format load_embeddings reads."""
    with open(path, "wb") as fh:
        fh.write(EMB_MAGIC)
        fh.write(struct.pack("<II", len(embeddings), embeddings.dim))
        for rec_id in embeddings.ids():
            record = embeddings[rec_id]
            id_bytes = rec_id.encode("utf-8")
            fh.write(struct.pack("<I", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(record.vector.astype("<f4").tobytes())


A_SIDE_SUFFIX = "#a"
B_SIDE_SUFFIX = "#b"


def build_pair_embeddings(
    pairs: Sequence[SentencePair], embeddings: EmbeddingSet
) -> dict[str, tuple[EmbeddingRecord, EmbeddingRecord]]:
    """Join pairs with their two embeddings, keyed "<pair id>#a" / "#b"."""
    joined: dict[str, tuple[EmbeddingRecord, EmbeddingRecord]] = {}
    for pair in pairs:
        id_a = pair.id + A_SIDE_SUFFIX
        id_b = pair.id + B_SIDE_SUFFIX
        if id_a not in embeddings or id_b not in embeddings:
            raise MissingEmbeddingError(pair.id)
        joined[pair.id] = (embeddings[id_a], embeddings[id_b])
    return joined


# --- CSV tables ------------------------------------------------------------

def _csv_rows(path: str | Path, required: Sequence[str]) -> list[tuple[int, dict]]:
    """DictReader over a CSV file, skipping leading comment lines.

    Returns (line number, row) tuples; validates the required columns.
    """
    raw_lines = Path(path).read_text(encoding="utf-8").splitlines(keepends=True)
    numbered = [
        (lineno, line)
        for lineno, line in enumerate(raw_lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise ParseError(f"{path}: no header row found")
    reader = csv.DictReader(io.StringIO("".join(line for _, line in numbered)))
    header = reader.fieldnames or []
    missing = [col for col in required if col not in header]
    if missing:
        raise ParseError(f"{path}: missing columns {missing}", line=numbered[0][0])
    data_lines = numbered[1:]
    rows = list(reader)
    if len(rows) != len(data_lines):
        # multi-line quoted fields: fall back to per-row numbering from the header
        return [(numbered[0][0] + i + 1, row) for i, row in enumerate(rows)]
    return [(data_lines[i][0], row) for i, row in enumerate(rows)]


def _parse_float(value: str, column: str, lineno: int) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"column {column!r}: bad number {value!r}", line=lineno) from None


def _parse_int(value: str, column: str, lineno: int) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"column {column!r}: bad integer {value!r}", line=lineno) from None


_TRUE = {"yes", "true", "1", "y"}
_FALSE = {"no", "false", "0", "n"}


def _parse_bool(value: str, column: str, lineno: int) -> bool:
    lowered = (value or "").strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ParseError(f"column {column!r}: bad boolean {value!r}", line=lineno)


@dataclass(frozen=True)
class SummaryRecord:
    """Published per-category similarity summary for one model."""

    model_id: str
    category: PairCategory
    mean: float
    sd: float
    n: int

    def __post_init__(self):
        if not -1.0 <= self.mean <= 1.0:
            raise ValueError(f"mean {self.mean} outside [-1, 1]")
        if self.sd < 0.0:
            raise ValueError("sd must be >= 0")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def as_category_stats(self) -> CategoryStats:
        return CategoryStats(category=self.category, mean=self.mean, sd=self.sd, n=self.n)


def load_summaries(path: str | Path) -> list[SummaryRecord]:
    """Load (model, category) similarity summaries from CSV.

    Columns: model_id, category, mean, sd, n.  One record per
    (model, category) combination.
    """
    records: list[SummaryRecord] = []
    seen: set[tuple[str, PairCategory]] = set()
    for lineno, row in _csv_rows(path, ["model_id", "category", "mean", "sd", "n"]):
        try:
            category = PairCategory.parse(row["category"])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        key = (row["model_id"], category)
        if key in seen:
            raise DuplicateIdError(
                f"duplicate summary for {key[0]!r}/{category.value} (line {lineno})"
            )
        seen.add(key)
        try:
            record = SummaryRecord(
                model_id=row["model_id"],
                category=category,
                mean=_parse_float(row["mean"], "mean", lineno),
                sd=_parse_float(row["sd"], "sd", lineno),
                n=_parse_int(row["n"], "n", lineno),
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        records.append(record)
    return records


def summaries_by_model(
    records: Iterable[SummaryRecord],
) -> dict[str, dict[PairCategory, CategoryStats]]:
    grouped: dict[str, dict[PairCategory, CategoryStats]] = {}
    for record in records:
        grouped.setdefault(record.model_id, {})[record.category] = (
            record.as_category_stats()
        )
    return grouped


PROFILE_COLUMNS = [
    "name",
    "params",
    "emb_dim",
    "arch_class",
    "separation",
    "zero_shot",
    "throughput_eps",
    "memory_gb",
    "license_id",
    "commercial_ok",
    "attribution_required",
    "service_restricted",
]


def load_profiles(path: str | Path) -> list[ModelProfile]:
    """Load full model profiles from CSV (columns per PROFILE_COLUMNS).

    The params column accepts "33M" / "2.5B" style suffixes; zero_shot may
    be left empty when unknown.
    """
    profiles: list[ModelProfile] = []
    seen: set[str] = set()
    for lineno, row in _csv_rows(path, PROFILE_COLUMNS):
        name = row["name"]
        if name in seen:
            raise DuplicateIdError(f"duplicate profile {name!r} (line {lineno})")
        seen.add(name)
        try:
            arch = ArchClass(row["arch_class"].strip().lower())
        except ValueError:
            raise ParseError(
                f"unknown arch_class {row['arch_class']!r}", line=lineno
            ) from None
        try:
            params = parse_params(row["params"])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        zero_shot_raw = (row.get("zero_shot") or "").strip()
        try:
            profile = ModelProfile(
                name=name,
                params_millions=params,
                emb_dim=_parse_int(row["emb_dim"], "emb_dim", lineno),
                arch_class=arch,
                separation=_parse_float(row["separation"], "separation", lineno),
                zero_shot_separation=(
                    _parse_float(zero_shot_raw, "zero_shot", lineno)
                    if zero_shot_raw
                    else None
                ),
                throughput_eps=_parse_float(
                    row["throughput_eps"], "throughput_eps", lineno
                ),
                memory_gb=_parse_float(row["memory_gb"], "memory_gb", lineno),
                license=LicenseInfo(
                    license_id=row["license_id"],
                    commercial_ok=_parse_bool(
                        row["commercial_ok"], "commercial_ok", lineno
                    ),
                    attribution_required=_parse_bool(
                        row["attribution_required"], "attribution_required", lineno
                    ),
                    service_restricted=_parse_bool(
                        row["service_restricted"], "service_restricted", lineno
                    ),
                ),
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        profiles.append(profile)
    return profiles


def load_ablation(path: str | Path) -> list[AblationCell]:
    """Load ablation grid cells from CSV (data_fraction, loss, rank, separation)."""
    cells: list[AblationCell] = []
    for lineno, row in _csv_rows(path, ["data_fraction", "loss", "rank", "separation"]):
        try:
            cells.append(
                AblationCell(
                    data_fraction=_parse_int(row["data_fraction"], "data_fraction", lineno),
                    loss=row["loss"].strip().lower(),
                    rank=_parse_int(row["rank"], "rank", lineno),
                    separation=_parse_float(row["separation"], "separation", lineno),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    return cells
