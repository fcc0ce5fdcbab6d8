"""
Deployment trade-offs
=====================

Performance tiers, adaptation gains, the Pareto frontier over separation
and throughput, memory efficiency, and license gating for an embedding
service.
"""

from embedgauge import (
    Deployment,
    classify_tier,
    cohort_medians,
    gain,
    license_gate,
    memory_efficiency,
    pareto_frontier,
    reference_gains,
    reference_profiles,
)

profiles = reference_profiles()

print("performance tiers (moderate >= 0.25, high >= 0.45):")
for p in sorted(profiles, key=lambda p: -p.separation):
    tier = classify_tier(p.separation)
    print(f"  {p.name:14s} {p.separation:+.3f}  {tier.label}")

# Zero-shot vs adapter-tuned: how much does adaptation buy?
gains = [gain(g.zero_shot, g.adapted, name=g.name) for g in reference_gains()]
medians = cohort_medians(gains)
print(
    f"\nadaptation gains: {medians.improved_count} of {medians.total} improved;"
    f" median relative gain {medians.median_relative_pct:+.0f}%"
    f" (zero-shot median {medians.median_zero_shot:.3f}"
    f" -> adapted median {medians.median_adapted:.3f})"
)
worst = min(gains, key=lambda g: g.absolute_gain)
print(f"  only decline: {worst.name} ({worst.zero_shot:+.3f} -> {worst.adapted:+.3f})")

# Pareto frontier: a model survives if nothing beats it on both
# separation and throughput at once.
result = pareto_frontier(profiles)
print(f"\nPareto frontier ({len(result.frontier)} of {len(profiles)} models):")
for p in result.frontier:
    print(f"  {p.name:14s} separation {p.separation:+.3f}, {p.throughput_eps:7.1f} emb/s")
print("dominated models and who dominates them:")
for d in result.dominated:
    names = ", ".join(
        f"{m.dominator} (+{m.separation_margin_pct:.1f}% sep, "
        f"+{m.throughput_margin_pct:.1f}% thr)"
        for m in d.dominators[:2]
    )
    print(f"  {d.profile.name:14s} <- {names}")

print("\nthroughput per GB of memory:")
ranked = sorted(profiles, key=memory_efficiency, reverse=True)
for p in ranked:
    print(f"  {p.name:14s} {memory_efficiency(p):8.1f} emb/s/GB")
ratio = memory_efficiency(ranked[0]) / memory_efficiency(ranked[-1])
print(f"  spread: {ratio:.0f}x between best and worst")

# Licensing: which models could back a public embedding API?
partition = license_gate(profiles, Deployment.EMBEDDING_SERVICE)
print(f"\nlicense gate for embedding-service deployment:")
print(f"  allowed: {len(partition.allowed)} models")
for p, reason in partition.flagged:
    print(f"  flagged: {p.name} — {reason}")
