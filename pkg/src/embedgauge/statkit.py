"""Statistical robustness suite.

Bootstrap confidence intervals over separation scores, Welch's t-test with
Holm step-down correction, Cohen's d, and Pearson correlation, together
with the Student-t tail machinery they need.  Everything is deterministic
for a fixed seed; p-values are floored at 1e-300 so reports never show an
exact zero.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .embedspace import CategoryStats
from .errors import DegenerateVarianceError, DimensionError, DomainError

P_FLOOR = 1e-300

_CF_MAX_ITER = 400
_CF_EPS = 1e-15
_CF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise DomainError(f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Valid for a, b > 0 and 0 <= x <= 1; monotone nondecreasing in x.
    Absolute accuracy is well below 1e-10 over that domain.
    """
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # continued fraction converges fastest below the distribution's mode
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: float) -> float:
    """Two-sided Student-t tail probability P(|T| >= |t|) with df > 0.

    Uses the identity P(|T| >= |t|) = I_x(df/2, 1/2) with x = df/(df + t^2).
    Equals 1 at t = 0 and is floored at 1e-300.
    """
    if df <= 0.0:
        raise DomainError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return max(P_FLOOR, min(1.0, p))


class WelchResult(NamedTuple):
    t: float
    df: float
    p: float


def welch_t(
    mean_a: float, sd_a: float, n_a: int,
    mean_b: float, sd_b: float, n_b: int,
) -> WelchResult:
    """Welch's unequal-variance t-test from summary statistics.

    Returns the t statistic, Welch-Satterthwaite degrees of freedom, and
    the two-sided p-value.  Requires n >= 2 per group and at least one
    nonzero sd.
    """
    if n_a < 2 or n_b < 2:
        raise DomainError("welch_t requires n >= 2 in each group")
    if sd_a < 0.0 or sd_b < 0.0:
        raise DomainError("standard deviations must be >= 0")
    var_a = sd_a * sd_a / n_a
    var_b = sd_b * sd_b / n_b
    se2 = var_a + var_b
    if se2 == 0.0:
        raise DegenerateVarianceError("both group variances are zero")
    t = (mean_a - mean_b) / math.sqrt(se2)
    df = se2 * se2 / (var_a * var_a / (n_a - 1) + var_b * var_b / (n_b - 1))
    return WelchResult(t=t, df=df, p=student_t_sf(t, df))


class EffectSize(NamedTuple):
    d: float
    sigma_pooled: float
    label: str


def _effect_label(d: float) -> str:
    magnitude = abs(d)
    if magnitude >= 0.8:
        return "large"
    if magnitude >= 0.5:
        return "medium"
    if magnitude >= 0.2:
        return "small"
    return "negligible"


def cohens_d(
    mean_a: float, sd_a: float, n_a: int,
    mean_b: float, sd_b: float, n_b: int,
) -> EffectSize:
    """Cohen's d with the (n-1)-weighted pooled standard deviation.

    The magnitude label uses the conventional 0.2 / 0.5 / 0.8 bands.
    """
    if n_a + n_b <= 2:
        raise DomainError("cohens_d requires n_a + n_b > 2")
    if sd_a < 0.0 or sd_b < 0.0:
        raise DomainError("standard deviations must be >= 0")
    pooled_var = ((n_a - 1) * sd_a * sd_a + (n_b - 1) * sd_b * sd_b) / (n_a + n_b - 2)
    if pooled_var == 0.0:
        raise DegenerateVarianceError("pooled variance is zero")
    sigma = math.sqrt(pooled_var)
    d = (mean_a - mean_b) / sigma
    return EffectSize(d=d, sigma_pooled=sigma, label=_effect_label(d))


def holm_adjust(p_values: Sequence[float]) -> list[float]:
    """Holm step-down adjusted p-values, returned in the input order.

    adjusted_(i) = max_{j <= i} min(1, (m - j + 1) * p_(j)) over the
    ascending sort; the adjustment is idempotent and never below the input.
    """
    p_values = list(p_values)
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p-value {p} outside [0, 1]")
    m = len(p_values)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running_max = 0.0
    for rank, idx in enumerate(order):
        stepped = min(1.0, (m - rank) * p_values[idx])
        running_max = max(running_max, stepped)
        adjusted[idx] = running_max
    return adjusted


@dataclass(frozen=True)
class CorrelationResult:
    """Pearson correlation with its two-sided p-value."""

    r: float
    p: float
    n: int

    def __post_init__(self):
        if abs(self.r) > 1.0:
            raise ValueError(f"|r| must be <= 1, got {self.r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.n < 3:
            raise ValueError(f"correlation needs n >= 3, got {self.n}")


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson correlation of two equal-length series (n >= 3).

    The p-value is two-sided via t = r * sqrt((n-2) / (1-r^2)) with n-2
    degrees of freedom; a perfect correlation gets the 1e-300 floor.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"series length mismatch: {x.shape} vs {y.shape}")
    n = int(x.size)
    if n < 3:
        raise DomainError(f"pearson requires n >= 3, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    ssx = float(np.dot(dx, dx))
    ssy = float(np.dot(dy, dy))
    if ssx == 0.0 or ssy == 0.0:
        raise DegenerateVarianceError("pearson undefined for a constant series")
    r = float(np.dot(dx, dy) / math.sqrt(ssx * ssy))
    r = min(1.0, max(-1.0, r))
    if abs(r) == 1.0:
        p = P_FLOOR
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = student_t_sf(t, n - 2)
    return CorrelationResult(r=r, p=p, n=n)


# --- seeded bootstrap ------------------------------------------------------

_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def mix_seed(base_seed: int, index: int) -> int:
    """64-bit splitmix-style mix of (base seed, stream index).

    Each bootstrap resample draws from its own generator seeded this way,
    so serial and parallel execution agree bit-for-bit.
    """
    z = (base_seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _stable_id_hash(text: str) -> int:
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class BootstrapConfig:
    """Knobs for the synthetic-separation bootstrap."""

    resamples: int = 5000
    confidence: float = 0.95
    seed: int = 0
    pairs_per_category: int = 50

    def __post_init__(self):
        if self.resamples < 1:
            raise ValueError("resamples must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie strictly between 0 and 1")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.pairs_per_category < 1:
            raise ValueError("pairs_per_category must be >= 1")


@dataclass(frozen=True)
class BootstrapResult:
    """Percentile confidence interval over resampled separation scores.

    ``point`` is the mean of the resampled separations; ``analytic`` is the
    plain mean difference of the two input summaries.  Both are reported
    because they answer slightly different questions.
    """

    point: float
    lo: float
    hi: float
    width: float
    analytic: float

    def __post_init__(self):
        # one-ulp slack: with zero variance the interval collapses and the
        # grand mean can land a rounding step outside lo == hi
        slack = 1e-12 * max(1.0, abs(self.point))
        if not self.lo - slack <= self.point <= self.hi + slack:
            raise ValueError(
                f"point {self.point} outside interval [{self.lo}, {self.hi}]"
            )
        if not math.isclose(self.width, self.hi - self.lo, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError("width must equal hi - lo")
        if self.width < 0.0:
            raise ValueError("width must be >= 0")


def _separation_draw(seed: int, sim: CategoryStats, diff: CategoryStats, n: int) -> float:
    """One synthetic separation: mean of n similar draws minus mean of n different draws."""
    rng = np.random.Generator(np.random.PCG64(seed))
    sim_vals = rng.normal(sim.mean, sim.sd, size=n)
    diff_vals = rng.normal(diff.mean, diff.sd, size=n)
    return float(sim_vals.mean() - diff_vals.mean())


def synthetic_separation_samples(
    sim: CategoryStats,
    diff: CategoryStats,
    count: int,
    base_seed: int,
    pairs_per_category: int,
) -> np.ndarray:
    """Deterministic synthetic separation samples, one per index.

    Draws are normal with the given summary mean/sd and are deliberately
    not truncated to the cosine range: the statistic of interest is a mean
    difference and no truncation rule is defined for it.
    """
    return np.asarray(
        [
            _separation_draw(mix_seed(base_seed, i), sim, diff, pairs_per_category)
            for i in range(count)
        ],
        dtype=np.float64,
    )


def bootstrap_separation_ci(
    sim_stats: CategoryStats,
    diff_stats: CategoryStats,
    cfg: BootstrapConfig,
    workers: int = 1,
) -> BootstrapResult:
    """Percentile bootstrap CI for the separation score.

    Per resample, ``pairs_per_category`` normal deviates are drawn per
    category from the supplied (mean, sd) summaries and their means are
    differenced.  The interval takes the (1-confidence)/2 and
    1-(1-confidence)/2 quantiles with linear interpolation between order
    statistics.  Results are bit-identical for a fixed seed regardless of
    ``workers``, because each resample owns a counter-derived seed.
    """
    n = cfg.pairs_per_category
    if workers <= 1:
        draws = synthetic_separation_samples(
            sim_stats, diff_stats, cfg.resamples, cfg.seed, n
        )
    else:
        draws = np.empty(cfg.resamples, dtype=np.float64)
        chunk = max(1, -(-cfg.resamples // workers))
        spans = [
            range(start, min(start + chunk, cfg.resamples))
            for start in range(0, cfg.resamples, chunk)
        ]

        def run(span: range) -> tuple[range, list[float]]:
            return span, [
                _separation_draw(mix_seed(cfg.seed, i), sim_stats, diff_stats, n)
                for i in span
            ]

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for span, vals in pool.map(run, spans):
                draws[span.start : span.stop] = vals

    alpha = (1.0 - cfg.confidence) / 2.0
    lo, hi = np.quantile(draws, [alpha, 1.0 - alpha], method="linear")
    return BootstrapResult(
        point=float(draws.mean()),
        lo=float(lo),
        hi=float(hi),
        width=float(hi - lo),
        analytic=sim_stats.mean - diff_stats.mean,
    )


# --- pairwise model comparison --------------------------------------------

@dataclass(frozen=True)
class PairwiseComparison:
    """Welch test plus effect size for one model pair, Holm-adjusted."""

    model_a: str
    model_b: str
    t: float
    df: float
    p: float
    p_holm: float
    d: float
    sigma_pooled: float

    def __post_init__(self):
        if self.df <= 0.0:
            raise ValueError("df must be positive")
        if not 0.0 <= self.p <= 1.0 or not 0.0 <= self.p_holm <= 1.0:
            raise ValueError("p-values must lie in [0, 1]")
        if self.p_holm < self.p:
            raise ValueError("Holm adjustment cannot decrease a p-value")
        if self.sigma_pooled < 0.0:
            raise ValueError("sigma_pooled must be >= 0")


ModelSummaries = Mapping[str, tuple[CategoryStats, CategoryStats]]


def pairwise_suite(
    summaries: ModelSummaries,
    cfg: BootstrapConfig,
    samples_per_model: int = 50,
) -> list[PairwiseComparison]:
    """All-pairs Welch comparisons over synthetic separation samples.

    For each model, ``samples_per_model`` synthetic separation scores are
    generated from its (similar, different) summaries; each unordered model
    pair is then compared with Welch's t-test and Cohen's d, and the Holm
    correction is applied across the whole family.  m models yield
    m*(m-1)/2 comparisons.
    """
    if samples_per_model < 2:
        raise DomainError("samples_per_model must be >= 2")
    names = list(summaries)
    samples: dict[str, np.ndarray] = {}
    for name in names:
        sim, diff = summaries[name]
        model_seed = mix_seed(cfg.seed, _stable_id_hash(name))
        samples[name] = synthetic_separation_samples(
            sim, diff, samples_per_model, model_seed, cfg.pairs_per_category
        )

    raw: list[tuple[str, str, WelchResult, EffectSize]] = []
    for i, name_a in enumerate(names):
        for name_b in names[i + 1 :]:
            a, b = samples[name_a], samples[name_b]
            mean_a, sd_a = float(a.mean()), float(a.std(ddof=1))
            mean_b, sd_b = float(b.mean()), float(b.std(ddof=1))
            welch = welch_t(mean_a, sd_a, len(a), mean_b, sd_b, len(b))
            effect = cohens_d(mean_a, sd_a, len(a), mean_b, sd_b, len(b))
            raw.append((name_a, name_b, welch, effect))

    adjusted = holm_adjust([w.p for _, _, w, _ in raw])
    return [
        PairwiseComparison(
            model_a=name_a,
            model_b=name_b,
            t=welch.t,
            df=welch.df,
            p=welch.p,
            p_holm=p_holm,
            d=effect.d,
            sigma_pooled=effect.sigma_pooled,
        )
        for (name_a, name_b, welch, effect), p_holm in zip(raw, adjusted)
    ]
