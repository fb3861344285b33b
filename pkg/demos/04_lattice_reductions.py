#!/usr/bin/env python3
"""From restricted decoding to lattice problems, three ways.

1. Exact route: expand to the regular instance, lift a particular solution;
   the solutions are exactly the lattice vectors at distance sqrt(n).
2. Compact ball route: embed on the original support around a chosen center;
   solutions fall inside a radius-R ball with a computable probability.
3. Norm route: shift so the syndrome can be dropped; solutions become short
   vectors of a volume-p^(n-k-1) sublattice.
"""

import itertools
import math

from rsdkit import lattice, reductions, ressd
from rsdkit.lattice import EnumConfig

E = ressd.RestrictionSet(ressd.PrimeField(127), (1, 2, 4))
inst = ressd.generate_instance(127, 6, 3, E, seed=31)
print("instance (n, k, z) = (6, 3, 3), planted", inst.planted.tolist())

# -- exact CVP route ----------------------------------------------------
ctx = reductions.ressd_to_cvp(inst)
print(f"\nexact route: lattice dim {ctx.lattice.dim}, volume 127^9:",
      ctx.lattice.volume == 127 ** 9)
red = lattice.lll(ctx.lattice)
vs = lattice.list_enum(red, ctx.ball(), EnumConfig())
sols = {tuple(reductions.cvp_solution_to_ressd(ctx, v).tolist()) for v in vs}
census = {tuple(e.tolist()) for e in ressd.enumerate_solutions(inst)}
print(f"distance-sqrt(6) vectors: {len(vs)}; mapped solutions == brute-force "
      f"census: {sols == census}")

# hybrid guessing: fix the first g coordinates, shrink the lattice
g = 2
covered = set()
for assignment in itertools.product(range(3), repeat=g):
    branch = reductions.guess_blocks(inst, g, assignment)
    if branch.context is None:
        continue
    bred = lattice.lll(branch.context.lattice)
    bvs = lattice.list_enum(bred, branch.context.ball(), EnumConfig())
    residuals = [reductions.cvp_solution_to_ressd(branch.context, v) for v in bvs]
    covered.update(tuple(e.tolist())
                   for e in reductions.branch_solutions_to_full(inst, branch, residuals))
print(f"guessing g={g} blocks: union over 9 branches recovers the census:",
      covered == census)

# -- affine diameter picks the embedding --------------------------------
d = reductions.affine_diameter(E)
print(f"\naffine diameter of {E.elements}: {d.D_E} via x -> {d.a}x + {d.b}, "
      f"shifted copy {d.shifted_set}")

# -- compact ball route --------------------------------------------------
mu = reductions.mean_center(E)
R_sq = reductions.median_radius_sq(E, inst.n)
print(f"\ncompact route: center mu = {mu}, median radius {math.sqrt(float(R_sq)):.3f}")
cctx = reductions.compact_listcvp(inst, mu)
print("volume 127^3:", cctx.lattice.volume == 127 ** 3)
dist_sq = cctx.embedding_distance_sq(inst.planted)
print(f"planted embedding distance^2 = {dist_sq} "
      f"({'inside' if dist_sq <= R_sq else 'outside'} the median ball)")
est = reductions.success_prob_mc(E, inst.n, mu, 0.0, 50_000, seed=1, radius_sq=R_sq)
print(f"success probability of the median ball: {est.p_hat:.3f} (Monte-Carlo)")

# -- norm route ----------------------------------------------------------
sctx = reductions.listsvp_reduce(inst, mu=2)
print(f"\nnorm route: volume 127^2: {sctx.lattice.volume == 127 ** 2}")
w = sctx.embed(inst.planted)
print("planted embeds as a lattice vector:", sctx.contains(w),
      "with norm^2 =", int(sum(int(x) ** 2 for x in w)))

# degeneracy: when the ball is expected to hold under one vector, the list
# problem collapses to a single closest/shortest-vector call
for zp in (3, 4):
    Ez = ressd.cross_restriction(127, 7).truncate(zp)
    rep = reductions.classify_degeneracy(127, 76, 127,
                                         reductions.median_radius(Ez, 127))
    print(f"full-size parameters, z'={zp}: {rep.kind} instance "
          f"(expected ball count 2^{rep.gh_count_log2:.1f})")
