"""Model-level analytics over measured profiles.

Performance tiers, adaptation gains and cohort medians, Pareto frontier
and dominance margins, memory efficiency, ablation-grid summaries,
low-rank-adapter parameter accounting, and license gating.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Sequence

import numpy as np

from .errors import IncompleteGridError, MedianUndefinedError, RankError

# Default report thresholds.  Both are configurable: reports must say which
# one a statement used, since they are close but not interchangeable.
UTILITY_THRESHOLD = 0.3
TIER_BOUNDS = (0.25, 0.45)


class Tier(IntEnum):
    """Separation performance band, ordered low < moderate < high."""

    LOW = 0
    MODERATE = 1
    HIGH = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class ArchClass(str, Enum):
    ENCODER_ONLY = "encoder_only"
    DECODER_STYLE = "decoder_style"


class Deployment(str, Enum):
    INTERNAL = "internal"
    EMBEDDING_SERVICE = "embedding_service"


@dataclass(frozen=True)
class LicenseInfo:
    """License terms relevant to deployment decisions."""

    license_id: str
    commercial_ok: bool
    attribution_required: bool
    service_restricted: bool


@dataclass(frozen=True)
class ModelProfile:
    """One model's metadata plus its measured evaluation numbers."""

    name: str
    params_millions: float
    emb_dim: int
    arch_class: ArchClass
    separation: float
    throughput_eps: float
    memory_gb: float
    license: LicenseInfo
    zero_shot_separation: float | None = None

    def __post_init__(self):
        if self.params_millions <= 0.0:
            raise ValueError(f"{self.name}: params_millions must be > 0")
        if self.emb_dim < 1:
            raise ValueError(f"{self.name}: emb_dim must be >= 1")
        if self.throughput_eps < 0.0:
            raise ValueError(f"{self.name}: throughput_eps must be >= 0")
        if self.memory_gb <= 0.0:
            raise ValueError(f"{self.name}: memory_gb must be > 0")


_PARAM_SUFFIX = {"K": 1e-3, "M": 1.0, "B": 1e3}


def parse_params(text: str | float) -> float:
    """Parameter count in millions from strings like "33M", "2.5B", "340".

    Bare numbers are already in millions.
    """
    if isinstance(text, (int, float)):
        return float(text)
    match = re.fullmatch(r"\s*([0-9]*\.?[0-9]+)\s*([KkMmBb]?)\s*", text)
    if not match:
        raise ValueError(f"cannot parse parameter count {text!r}")
    value = float(match.group(1))
    suffix = match.group(2).upper()
    return value * _PARAM_SUFFIX.get(suffix, 1.0)


def classify_tier(separation: float, bounds: tuple[float, float] = TIER_BOUNDS) -> Tier:
    """Tier for a separation score: high >= upper bound, low < lower bound.

    Both boundary values are inclusive lower bounds of their band.
    """
    lower, upper = bounds
    if separation >= upper:
        return Tier.HIGH
    if separation >= lower:
        return Tier.MODERATE
    return Tier.LOW


# --- adaptation gains ------------------------------------------------------

@dataclass(frozen=True)
class GainRecord:
    """Zero-shot vs adapted separation for one model.

    ``relative_pct`` is 100 * gain / |zero_shot| and is None when the
    zero-shot score is exactly zero (undefined, not infinite).
    """

    name: str
    zero_shot: float
    adapted: float
    absolute_gain: float
    relative_pct: float | None
    improved: bool

    def __post_init__(self):
        if not math.isclose(
            self.absolute_gain, self.adapted - self.zero_shot, rel_tol=0.0, abs_tol=1e-12
        ):
            raise ValueError("absolute_gain must equal adapted - zero_shot")
        if self.improved != (self.absolute_gain > 0.0):
            raise ValueError("improved flag disagrees with the gain sign")


def gain(zero_shot: float, adapted: float, name: str = "") -> GainRecord:
    """Build a GainRecord from a zero-shot / adapted separation pair.

    The |zero_shot| denominator keeps the relative sign equal to the gain
    sign, so a degradation from a positive baseline reads negative.
    """
    delta = adapted - zero_shot
    relative = 100.0 * delta / abs(zero_shot) if zero_shot != 0.0 else None
    return GainRecord(
        name=name,
        zero_shot=zero_shot,
        adapted=adapted,
        absolute_gain=delta,
        relative_pct=relative,
        improved=delta > 0.0,
    )


@dataclass(frozen=True)
class CohortMedians:
    """Medians over the improved subset of a gain cohort."""

    median_relative_pct: float
    median_zero_shot: float
    median_adapted: float
    improved_count: int
    declined_count: int
    total: int


def cohort_medians(gains: Sequence[GainRecord]) -> CohortMedians:
    """Medians of relative gain, zero-shot and adapted scores.

    Only models with ``improved == True`` enter the medians; an even count
    takes the midpoint of the two central order statistics.  Records with
    an undefined relative gain are skipped for the relative median only.
    """
    if not gains:
        raise MedianUndefinedError("cohort_medians needs at least one record")
    improved = [g for g in gains if g.improved]
    if not improved:
        raise MedianUndefinedError("no improved models in cohort")
    relatives = [g.relative_pct for g in improved if g.relative_pct is not None]
    if not relatives:
        raise MedianUndefinedError("no improved model has a defined relative gain")
    return CohortMedians(
        median_relative_pct=float(np.median(relatives)),
        median_zero_shot=float(np.median([g.zero_shot for g in improved])),
        median_adapted=float(np.median([g.adapted for g in improved])),
        improved_count=len(improved),
        declined_count=len(gains) - len(improved),
        total=len(gains),
    )


# --- Pareto analysis -------------------------------------------------------

@dataclass(frozen=True)
class DominanceMargin:
    """How far a dominator exceeds a dominated model on each objective.

    Margins are percent of the dominated model's value; None when that
    value is zero.
    """

    dominator: str
    separation_margin_pct: float | None
    throughput_margin_pct: float | None


@dataclass(frozen=True)
class DominatedModel:
    profile: ModelProfile
    dominators: tuple[DominanceMargin, ...]


@dataclass(frozen=True)
class ParetoResult:
    frontier: tuple[ModelProfile, ...]
    dominated: tuple[DominatedModel, ...]


def _dominates(a: ModelProfile, b: ModelProfile) -> bool:
    """Weak dominance of b by a with at least one strict inequality."""
    at_least = a.separation >= b.separation and a.throughput_eps >= b.throughput_eps
    strict = a.separation > b.separation or a.throughput_eps > b.throughput_eps
    return at_least and strict


def _pct_margin(better: float, worse: float) -> float | None:
    if worse == 0.0:
        return None
    return 100.0 * (better - worse) / abs(worse)


def pareto_frontier(profiles: Sequence[ModelProfile]) -> ParetoResult:
    """Non-dominated models under (maximize separation, maximize throughput).

    The frontier comes back sorted by ascending throughput; every dominated
    model lists all of its dominators with percentage margins.  Ties on
    both axes leave both models on the frontier.
    """
    if not profiles:
        raise ValueError("pareto_frontier needs at least one profile")
    frontier: list[ModelProfile] = []
    dominated: list[DominatedModel] = []
    for candidate in profiles:
        dominators = [
            DominanceMargin(
                dominator=other.name,
                separation_margin_pct=_pct_margin(other.separation, candidate.separation),
                throughput_margin_pct=_pct_margin(
                    other.throughput_eps, candidate.throughput_eps
                ),
            )
            for other in profiles
            if other is not candidate and _dominates(other, candidate)
        ]
        if dominators:
            dominated.append(DominatedModel(profile=candidate, dominators=tuple(dominators)))
        else:
            frontier.append(candidate)
    frontier.sort(key=lambda p: (p.throughput_eps, p.separation))
    return ParetoResult(frontier=tuple(frontier), dominated=tuple(dominated))


def memory_efficiency(profile: ModelProfile) -> float:
    """Embeddings per second per GB of peak memory."""
    return profile.throughput_eps / profile.memory_gb


# --- ablation grid ---------------------------------------------------------

DATA_FRACTIONS = (25, 50, 100)
LOSSES = ("infonce", "triplet")
RANKS = (8, 16, 32)


@dataclass(frozen=True)
class AblationCell:
    """Separation for one (data fraction, loss, adapter rank) setting."""

    data_fraction: int
    loss: str
    rank: int
    separation: float

    def __post_init__(self):
        if self.data_fraction not in DATA_FRACTIONS:
            raise ValueError(f"data_fraction must be one of {DATA_FRACTIONS}")
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}")
        if self.rank not in RANKS:
            raise ValueError(f"rank must be one of {RANKS}")


@dataclass(frozen=True)
class AblationSummary:
    """Aggregates over the full 18-cell hyperparameter grid."""

    mean_by_fraction_loss: dict[tuple[int, str], float]
    best_by_fraction: dict[int, AblationCell]
    rank_spread: dict[tuple[int, str], float]


def ablation_summary(cells: Iterable[AblationCell]) -> AblationSummary:
    """Summarize a complete 3 x 2 x 3 ablation grid.

    Reports the arithmetic mean per (fraction, loss), the best cell per
    data fraction, and the rank-induced spread (max - min across ranks)
    per (fraction, loss).  An incomplete or duplicated grid is rejected.
    """
    by_key: dict[tuple[int, str, int], AblationCell] = {}
    for cell in cells:
        key = (cell.data_fraction, cell.loss, cell.rank)
        if key in by_key:
            raise ValueError(f"duplicate ablation cell {key}")
        by_key[key] = cell
    expected = {
        (f, l, r) for f in DATA_FRACTIONS for l in LOSSES for r in RANKS
    }
    missing = sorted(expected - set(by_key))
    if missing:
        raise IncompleteGridError(missing)

    mean_by_fraction_loss: dict[tuple[int, str], float] = {}
    rank_spread: dict[tuple[int, str], float] = {}
    for fraction in DATA_FRACTIONS:
        for loss in LOSSES:
            scores = [by_key[(fraction, loss, r)].separation for r in RANKS]
            mean_by_fraction_loss[(fraction, loss)] = float(np.mean(scores))
            rank_spread[(fraction, loss)] = float(max(scores) - min(scores))
    best_by_fraction = {
        fraction: max(
            (by_key[(fraction, loss, r)] for loss in LOSSES for r in RANKS),
            key=lambda c: c.separation,
        )
        for fraction in DATA_FRACTIONS
    }
    return AblationSummary(
        mean_by_fraction_loss=mean_by_fraction_loss,
        best_by_fraction=best_by_fraction,
        rank_spread=rank_spread,
    )


# --- low-rank adapter accounting -------------------------------------------

@dataclass(frozen=True)
class AdaptedMatrix:
    """A d x k weight matrix shape adapted `count` times across the model."""

    rows: int
    cols: int
    count: int = 1

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.count < 1:
            raise ValueError("matrix dimensions and count must be >= 1")


@dataclass(frozen=True)
class LoraSpec:
    """Low-rank adapter configuration: rank, scaling alpha, adapted shapes.

    A rank-r adapter on a d x k matrix trains two factors of shapes d x r
    and r x k, so r * (d + k) parameters per matrix.
    """

    rank_r: int
    alpha: float
    adapted_matrices: tuple[AdaptedMatrix, ...]

    def __post_init__(self):
        if self.rank_r < 1:
            raise ValueError("rank_r must be >= 1")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be > 0")
        for mat in self.adapted_matrices:
            if self.rank_r > min(mat.rows, mat.cols):
                raise RankError(
                    f"rank {self.rank_r} exceeds min dimension of "
                    f"{mat.rows}x{mat.cols} matrix"
                )

    @property
    def scaling(self) -> float:
        return self.alpha / self.rank_r


@dataclass(frozen=True)
class LoraParamCount:
    trainable: int
    per_matrix: tuple[tuple[AdaptedMatrix, int], ...]
    scaling: float


def lora_param_count(spec: LoraSpec) -> LoraParamCount:
    """Trainable parameter count of a low-rank adapter configuration."""
    per_matrix = []
    total = 0
    for mat in spec.adapted_matrices:
        if spec.rank_r > min(mat.rows, mat.cols):
            raise RankError(
                f"rank {spec.rank_r} exceeds min dimension of {mat.rows}x{mat.cols} matrix"
            )
        count = mat.count * spec.rank_r * (mat.rows + mat.cols)
        per_matrix.append((mat, count))
        total += count
    return LoraParamCount(
        trainable=total, per_matrix=tuple(per_matrix), scaling=spec.scaling
    )


# --- license gating --------------------------------------------------------

@dataclass(frozen=True)
class LicensePartition:
    allowed: tuple[ModelProfile, ...]
    flagged: tuple[tuple[ModelProfile, str], ...]


def license_gate(
    profiles: Sequence[ModelProfile], deployment: Deployment
) -> LicensePartition:
    """Partition models into allowed vs flagged for a deployment mode.

    Serving embeddings publicly flags service-restricted licenses; internal
    use flags only licenses without commercial permission.
    """
    allowed: list[ModelProfile] = []
    flagged: list[tuple[ModelProfile, str]] = []
    for profile in profiles:
        lic = profile.license
        if not lic.commercial_ok:
            flagged.append((profile, f"{lic.license_id}: commercial use not permitted"))
        elif deployment is Deployment.EMBEDDING_SERVICE and lic.service_restricted:
            flagged.append(
                (profile, f"{lic.license_id}: embedding-service deployment restricted")
            )
        else:
            allowed.append(profile)
    return LicensePartition(allowed=tuple(allowed), flagged=tuple(flagged))
