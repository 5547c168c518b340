"""
Scoring a journal with the fixed weights
========================================

The published model needs five numbers: the quarter and four indicators.
"""

from journal_influence import jis_published
from journal_influence.scoring import PUBLISHED, PUBLISHED_CI_MIDPOINT

# A journal in the first quarter, h-index 30, 23 documents this year,
# 846 references and 1.68 cites per document over two years.
score = jis_published(1, 30, 23, 846, 1.68)
print(f"score: {score:.6f}")

# The quarter weight is negative: the same journal sitting in a later
# quarter loses 0.14076 per step.
for q in (1, 2, 3, 4):
    print(q, round(jis_published(q, 30, 23, 846, 1.68), 6))

# Each weight also has a 95% interval.  Its midpoint is a slightly
# different model; the difference is in the fourth decimal.
alt = jis_published(1, 30, 23, 846, 1.68, model=PUBLISHED_CI_MIDPOINT)
print(f"interval midpoints: {alt:.6f} (delta {alt - score:+.2e})")
print(dict(zip(PUBLISHED.feature_names, PUBLISHED.weights)))
