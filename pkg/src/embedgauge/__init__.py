"""embedgauge: embedding-model evaluation toolkit.

Four capability areas, one per module:

- :mod:`embedgauge.embedspace` — cosine similarity over categorized
  sentence pairs and the separation score (similar-pair mean minus
  different-pair mean).
- :mod:`embedgauge.statkit` — bootstrap confidence intervals, Welch's
  t-test with Holm correction, Cohen's d, Pearson correlation.
- :mod:`embedgauge.tradeoff` — performance tiers, adaptation gains,
  Pareto frontier, memory efficiency, adapter parameter accounting,
  license gating.
- :mod:`embedgauge.benchharness` — latency/throughput/memory benchmarking
  of embedding providers over a newline-delimited JSON wire protocol.

Supporting modules: :mod:`embedgauge.formats` (file formats),
:mod:`embedgauge.report` (report emission), :mod:`embedgauge.fixtures`
(bundled reference data), :mod:`embedgauge.cli` (command line), and
:mod:`embedgauge.stub_provider` (deterministic test provider).
"""

from .benchharness import (
    BenchPlan,
    BenchReport,
    LatencyStats,
    ProviderHandle,
    connect,
    latency_stats,
    run_bench,
)
from .embedspace import (
    CategoryStats,
    EmbeddingRecord,
    EmbeddingSet,
    PairCategory,
    SentencePair,
    SeparationResult,
    category_stats,
    cosine,
    pair_cosines,
    separation,
    summarize_cosines,
)
from .errors import (
    DataError,
    DegenerateVarianceError,
    DegenerateVectorError,
    DimensionError,
    DomainError,
    DuplicateIdError,
    EmbedGaugeError,
    EmptySampleError,
    FormatError,
    IncompleteGridError,
    IoError,
    MedianUndefinedError,
    MissingCategoryError,
    MissingEmbeddingError,
    ParseError,
    ProtocolError,
    ProviderDiedError,
    RankError,
)
from .fixtures import (
    demo_pairs,
    demo_summaries,
    reference_ablation,
    reference_efficiency,
    reference_gains,
    reference_licenses,
    reference_profiles,
    reference_separations,
)
from .formats import (
    SummaryRecord,
    build_pair_embeddings,
    load_ablation,
    load_embeddings,
    load_pairs,
    load_profiles,
    load_summaries,
    summaries_by_model,
    write_embeddings,
    write_pairs,
)
from .report import emit_report
from .statkit import (
    BootstrapConfig,
    BootstrapResult,
    CorrelationResult,
    EffectSize,
    PairwiseComparison,
    WelchResult,
    bootstrap_separation_ci,
    cohens_d,
    holm_adjust,
    pairwise_suite,
    pearson,
    regularized_incomplete_beta,
    student_t_sf,
    welch_t,
)
from .tradeoff import (
    TIER_BOUNDS,
    UTILITY_THRESHOLD,
    AblationCell,
    AblationSummary,
    AdaptedMatrix,
    ArchClass,
    CohortMedians,
    Deployment,
    GainRecord,
    LicenseInfo,
    LicensePartition,
    LoraParamCount,
    LoraSpec,
    ModelProfile,
    ParetoResult,
    Tier,
    ablation_summary,
    classify_tier,
    cohort_medians,
    gain,
    license_gate,
    lora_param_count,
    memory_efficiency,
    parse_params,
    pareto_frontier,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
