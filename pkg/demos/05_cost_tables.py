#!/usr/bin/env python3
"""Regenerate the published attack-cost tables and diff them against goldens.

Covers the adapted-ISD costs (table 2), the hybrid batch-CVP attack
(table 3), affine diameters (table 4), and the hybrid list-CVP attack
(table 6).  Each regenerated cell is compared to the stored golden value at
its documented tolerance.
"""

from rsdkit import estimator

for which in (4, 3, 6, 2):
    art = estimator.regenerate_table(which)
    diffs = estimator.golden_diff(which, art)
    bad = [d for d in diffs if not d.ok]
    status = "clean" if not bad else f"{len(bad)} FAILING"
    print(f"table {which}: {len(art.rows)} rows, {len(diffs)} golden cells, {status}")
    if which in (4, 2):
        print(art.to_csv())

est = estimator.hybrid_listcvp_estimate(
    127, 76, 127, estimator.cross_restriction(127, 7), 3)
print(f"single-row estimate, hybrid list-CVP at (127, 76), z'=3: "
      f"time 2^{est.log2_time:.1f}, memory 2^{est.log2_memory:.1f}")
for note in est.notes:
    print("  note:", note)

naive = estimator.naive_cost(127, 76, 7)
prange = estimator.prange_cost(127, 76, 7)
print(f"\nbaselines at (127, 76): naive 2^{naive.log2_time:.1f}, "
      f"permutation-ISD iterations 2^{prange.log2_time:.1f}")
