"""Vector similarity primitives and categorized-pair evaluation.

The discrimination metric implemented here is the *separation score*: the
mean cosine similarity of same-topic sentence pairs minus the mean cosine
similarity of unrelated pairs.  Pairs come in three categories (similar,
different, negation); negation pairs are summarized but never enter the
score itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    DegenerateVectorError,
    DimensionError,
    MissingCategoryError,
    MissingEmbeddingError,
)


class PairCategory(str, Enum):
    SIMILAR = "similar"
    DIFFERENT = "different"
    NEGATION = "negation"

    @classmethod
    def parse(cls, raw: str) -> "PairCategory":
        """Parse a category name, case-insensitively."""
        try:
            return cls(raw.strip().lower())
        except ValueError:
            raise ValueError(f"unknown pair category {raw!r}") from None


@dataclass(frozen=True)
class EmbeddingRecord:
    """One sentence embedding: an id plus a fixed-dimension real vector."""

    id: str
    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1 or vec.size < 1:
            raise DimensionError(f"embedding {self.id!r} must be a 1-d vector")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"embedding {self.id!r} contains non-finite values")
        object.__setattr__(self, "vector", vec)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]


class EmbeddingSet:
    """A collection of embeddings sharing one declared dimension."""

    def __init__(self, dim: int, records: Iterable[EmbeddingRecord] = ()):
        if dim < 1:
            raise DimensionError("declared dimension must be >= 1")
        self.dim = int(dim)
        self._by_id: dict[str, EmbeddingRecord] = {}
        for rec in records:
            self.add(rec)

    def add(self, record: EmbeddingRecord) -> None:
        if record.dim != self.dim:
            raise DimensionError(
                f"embedding {record.id!r} has dim {record.dim}, collection declares {self.dim}"
            )
        self._by_id[record.id] = record

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, rec_id: str) -> bool:
        return rec_id in self._by_id

    def __getitem__(self, rec_id: str) -> EmbeddingRecord:
        return self._by_id[rec_id]

    def ids(self) -> list[str]:
        return list(self._by_id)


@dataclass(frozen=True)
class SentencePair:
    """A categorized evaluation pair of sentences."""

    id: str
    text_a: str
    text_b: str
    category: PairCategory

    def __post_init__(self):
        if not isinstance(self.category, PairCategory):
            object.__setattr__(self, "category", PairCategory.parse(self.category))
        # negation pairs may share a stem; the other categories must differ
        if self.category is not PairCategory.NEGATION and self.text_a == self.text_b:
            raise ValueError(f"pair {self.id!r}: text_a and text_b are identical")


@dataclass(frozen=True)
class CategoryStats:
    """Per-category cosine-similarity summary: mean, sample sd, pair count."""

    category: PairCategory
    mean: float
    sd: float
    n: int

    def __post_init__(self):
        if not -1.0 <= self.mean <= 1.0:
            raise ValueError(f"mean {self.mean} outside cosine range [-1, 1]")
        if self.sd < 0.0:
            raise ValueError(f"sd must be >= 0, got {self.sd}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class SeparationResult:
    """Separation score plus the per-category stats it was derived from."""

    model_id: str
    separation: float
    stats_by_category: Mapping[PairCategory, CategoryStats] = field(default_factory=dict)

    def __post_init__(self):
        if not -2.0 <= self.separation <= 2.0:
            raise ValueError(f"separation {self.separation} outside [-2, 2]")
        sim = self.stats_by_category.get(PairCategory.SIMILAR)
        diff = self.stats_by_category.get(PairCategory.DIFFERENT)
        if sim is not None and diff is not None:
            expected = sim.mean - diff.mean
            if not math.isclose(self.separation, expected, rel_tol=0.0, abs_tol=1e-12):
                raise ValueError(
                    f"separation {self.separation} != mean difference {expected}"
                )


def cosine(u, v) -> float:
    """Cosine similarity of two nonzero vectors of equal dimension.

    All arithmetic runs in float64 regardless of input storage precision.
    The result is clamped into [-1, 1] so rounding overshoot cannot leak
    into downstream range checks.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1 or u.size < 1:
        raise DimensionError("cosine expects 1-d vectors of dimension >= 1")
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    norm_u = np.linalg.norm(u)
    norm_v = np.linalg.norm(v)
    if norm_u == 0.0 or norm_v == 0.0:
        raise DegenerateVectorError("cosine undefined for zero-norm input")
    value = float(np.dot(u, v) / (norm_u * norm_v))
    return min(1.0, max(-1.0, value))


PairEmbeddings = Mapping[str, tuple[EmbeddingRecord, EmbeddingRecord]]


def pair_cosines(
    pairs: Iterable[SentencePair], embeddings: PairEmbeddings
) -> dict[PairCategory, np.ndarray]:
    """Cosine similarity of each pair's two embeddings, grouped by category.

    ``embeddings`` maps a pair id to the (text_a, text_b) embedding records.
    """
    values: dict[PairCategory, list[float]] = {}
    for pair in pairs:
        if pair.id not in embeddings:
            raise MissingEmbeddingError(pair.id)
        rec_a, rec_b = embeddings[pair.id]
        values.setdefault(pair.category, []).append(cosine(rec_a.vector, rec_b.vector))
    return {cat: np.asarray(vals, dtype=np.float64) for cat, vals in values.items()}


def summarize_cosines(values_by_category: Mapping[PairCategory, np.ndarray]) -> dict[PairCategory, CategoryStats]:
    """Mean / sample sd / count per category.  Empty categories are omitted."""
    out: dict[PairCategory, CategoryStats] = {}
    for cat, vals in values_by_category.items():
        n = int(vals.size)
        if n == 0:
            continue
        mean = float(np.mean(vals))
        sd = float(np.std(vals, ddof=1)) if n > 1 else 0.0
        out[cat] = CategoryStats(category=cat, mean=mean, sd=sd, n=n)
    return out


def category_stats(
    pairs: Iterable[SentencePair], embeddings: PairEmbeddings
) -> dict[PairCategory, CategoryStats]:
    """Summarize pair cosines per category.

    Every pair must have both embeddings present (keyed by pair id) with
    matching dimension; a missing pair id raises MissingEmbeddingError.
    Categories with no pairs are simply absent from the result.
    """
    return summarize_cosines(pair_cosines(pairs, embeddings))


def separation(
    stats: Mapping[PairCategory, CategoryStats], model_id: str = ""
) -> SeparationResult:
    """Separation score: similar-pair mean minus different-pair mean.

    Negation stats, when present, are carried through untouched.  Raises
    MissingCategoryError if either required category is absent.
    """
    for required in (PairCategory.SIMILAR, PairCategory.DIFFERENT):
        if required not in stats:
            raise MissingCategoryError(required)
    score = stats[PairCategory.SIMILAR].mean - stats[PairCategory.DIFFERENT].mean
    return SeparationResult(
        model_id=model_id, separation=score, stats_by_category=dict(stats)
    )
