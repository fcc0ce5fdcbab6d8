"""
Hyperparameter grid and adapter accounting
==========================================

Summary of the 3 x 2 x 3 ablation grid (data fraction x loss x adapter
rank) plus trainable-parameter counting for low-rank adapters.
"""

from embedgauge import (
    AdaptedMatrix,
    LoraSpec,
    ablation_summary,
    lora_param_count,
    reference_ablation,
)

cells = reference_ablation()
summary = ablation_summary(cells)

print("mean separation per (data fraction, loss), averaged over ranks:")
for (fraction, loss), mean in sorted(summary.mean_by_fraction_loss.items()):
    spread = summary.rank_spread[(fraction, loss)]
    print(f"  {fraction:3d}% {loss:8s} mean {mean:+.3f}  rank spread {spread:.3f}")

print("\nbest cell per data fraction:")
for fraction, cell in sorted(summary.best_by_fraction.items()):
    print(
        f"  {fraction:3d}% -> {cell.loss} at rank {cell.rank}"
        f" (separation {cell.separation:+.3f})"
    )

# The contrastive loss wins every fraction; the margin-based loss never
# clears zero on this grid.
infonce = [c.separation for c in cells if c.loss == "infonce"]
triplet = [c.separation for c in cells if c.loss == "triplet"]
print(f"\nloss comparison: infonce range [{min(infonce):+.3f}, {max(infonce):+.3f}],")
print(f"                 triplet range [{min(triplet):+.3f}, {max(triplet):+.3f}]")

# Adapter parameter accounting: rank r on a d x k matrix trains two
# factors, r*(d+k) parameters, scaled by alpha/r at merge time.
spec = LoraSpec(
    rank_r=16,
    alpha=32.0,
    adapted_matrices=(AdaptedMatrix(rows=1024, cols=1024, count=48),),
)
counted = lora_param_count(spec)
print(f"\nadapter for 48 1024x1024 attention matrices at rank 16:")
print(f"  trainable parameters: {counted.trainable:,}")
print(f"  scaling factor alpha/r: {counted.scaling}")

tiny = lora_param_count(LoraSpec(1, 1.0, (AdaptedMatrix(2, 2),)))
print(f"smallest possible adapter (rank 1 on a 2x2 matrix): {tiny.trainable} parameters")
