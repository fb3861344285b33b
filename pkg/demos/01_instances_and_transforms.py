#!/usr/bin/env python3
"""Instances of restricted decoding and the three value-set transformations.

Walks through: sampling a planted instance, checking solutions, shifting the
restriction set affinely, randomizing it multiplicatively, and truncating it
to a smaller subgroup segment (the probabilistic step the hybrid attacks are
built on).
"""

from rsdkit import ressd

p, n, k = 127, 12, 5
E = ressd.cross_restriction(p, 7)
print(f"restriction set E (order-7 subgroup of F_{p}*): {E.elements}")

inst = ressd.generate_instance(p, n, k, E, seed=2024)
print(f"instance: n={n}, k={k}, planted solution {inst.planted.tolist()}")
print("planted passes check_solution:", ressd.check_solution(inst, inst.planted))

# brute force over z^k guesses of the free coordinates
sol = ressd.naive_solve(inst)
print("naive enumeration finds:", sol.tolist())

# affine shift E -> aE + b; solutions move with it and pull back exactly
shifted, ctx = ressd.affine_shift(inst, a=1, b=p - 1)
print("\nE - 1 =", shifted.E.elements, "(now contains 0)")
assert ressd.pull_back(ctx, shifted.planted) == inst.planted
print("pull-back of the shifted solution recovers the original: True")

# multiplicative randomization: same syndrome, solution re-randomized over E^n
rand, rctx = ressd.mult_randomize(inst, seed=5)
print("\nrandomized instance keeps the syndrome:", rand.s == inst.s)
print("image solution:", rand.planted.tolist())
assert ressd.pull_back(rctx, rand.planted) == inst.planted

# truncation to the first z' powers succeeds with probability (z'/z)^n
z_prime, hits, tries = 5, 0, 2000
for seed in range(tries):
    trunc, tctx, E_prime = ressd.mult_truncate(inst, z_prime, seed=seed)
    if trunc.planted is not None:  # solution landed in E'
        hits += 1
        assert ressd.pull_back(tctx, trunc.planted) == inst.planted
expected = (z_prime / 7) ** n
print(f"\ntruncation to E'={E_prime.elements}: {hits}/{tries} successes, "
      f"expected rate {expected:.5f}")
