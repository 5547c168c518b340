"""
Down-selecting indicators on a synthetic category
=================================================

The synthetic generator plants three informative indicators and a few
noise columns, then makes some others mostly missing.
"""

from journal_influence.datasets import INFORMATIVE, synthetic_dataset
from journal_influence.dsrs import DsrsConfig, run_pipeline
from journal_influence.ingest import TWO_YEAR_CANDIDATES, build_matrix, missing_fractions, sparsity_filter

ds = synthetic_dataset(n=240, seed=7)

# Step one: drop columns that are mostly empty.
frac = missing_fractions(ds, TWO_YEAR_CANDIDATES)
kept = sparsity_filter(ds, 0.20, TWO_YEAR_CANDIDATES)
for name in TWO_YEAR_CANDIDATES:
    print(f"{name:18s} missing {frac[name]:5.1%}  {'kept' if name in kept else 'dropped'}")

m = build_matrix(ds, kept)
model = run_pipeline(m, DsrsConfig())

# Elimination history, one refit per removed feature.
for i, phase in enumerate(model.trace.phases, start=1):
    print(f"phase {i}: {len(phase.features)} features, R2 {phase.r_squared:.4f}, removed {phase.removed}")

# Share of total variability credited to each survivor.
for name in model.attribution.ordering:
    print(f"{name:18s} {model.attribution.shares[name]:6.2f}%")

fit = model.fit
print("selected:", model.selected_features, "planted:", INFORMATIVE)
print(f"R2 {fit.r_squared:.4f}  F {fit.f_stat:.1f}  p {fit.f_significance:.2e}")
for name, b in zip(fit.feature_names, fit.b):
    print(f"  {name:18s} {b:+.6f}")
