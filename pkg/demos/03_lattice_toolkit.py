#!/usr/bin/env python3
"""Desk-scale lattice toolkit: exact reduction, enumeration, predictions.

Everything runs in exact integer arithmetic under the hood; enumeration
prunes in floats but re-checks membership exactly, so the outputs below are
exact sets, not approximations.
"""

import math

import numpy as np

from rsdkit import lattice
from rsdkit.lattice import BallSpec, EnumConfig, LatticeBasis

B = LatticeBasis([[100, 0, 0], [99, 1, 0], [31, 17, 2]])
print("volume (exact):", B.volume)

red = lattice.lll(B)
print("LLL rows:", red.rows)
print("volume preserved:", red.volume == B.volume)

hkz = lattice.bkz(B, 3)  # beta = dim: strongest block reduction
print("BKZ-3 first vector:", hkz.rows[0])

v = lattice.svp_enum(B)
print("shortest vector:", v, "norm^2 =", int((v ** 2).sum()))

ball = BallSpec(3, 6.0)
short = lattice.list_enum(B, ball, EnumConfig())
print(f"\nall {len(short)} nonzero vectors of norm <= 6 (exhaustive):")
print(short[:6], "...")

pruned = lattice.list_enum(B, ball, EnumConfig(pruning="linear"))
multi = lattice.list_enum(B, ball, EnumConfig(pruning="linear", repeats=6,
                                              randomize_basis=True, seed=1))
print(f"linear pruning: single pass {len(pruned)}, six randomized passes "
      f"{len(multi)} of {len(short)}")

# Gaussian-heuristic predictions vs the measured profile
n, kdim, p = 20, 10, 17
from rsdkit.rng import make_rng
from rsdkit import ffmat

rng = make_rng(42)
G = ffmat.FpMatrix(ffmat.PrimeField(p), np.concatenate(
    [np.eye(kdim, dtype=np.int64),
     rng.integers(0, p, size=(kdim, n - kdim), dtype=np.int64)], axis=1))
code = lattice.code_lattice(G)
print(f"\ncode lattice: dim {code.dim}, volume {code.volume} = {p}^{n - kdim}")
reduced = lattice.bkz(code, n)
profile = lattice.gram_schmidt(reduced).bstar_norms()
predicted = lattice.gsa_profile(n, code.volume)
print("first GS norms, measured vs geometric-series prediction:")
for i in range(4):
    print(f"  b*_{i+1}: {profile[i]:8.3f}  vs  {predicted[i]:8.3f}")
lam1 = lattice.gh_lambda1(n, code.volume)
print(f"lambda_1 heuristic {lam1:.3f}, shortest found "
      f"{math.sqrt(int((lattice.svp_enum(reduced) ** 2).sum())):.3f}")
