"""Bridges from restricted decoding to lattice problems.

Two families:

* the exact route through the expanded regular instance: solutions correspond
  one-to-one to lattice vectors at distance exactly sqrt(n) from a lifted
  particular solution, over a dimension-zn lattice of volume p^(2n-k);

* the compact route on the original support: solutions embed into a
  dimension-n code lattice, at distance ||Z(e) - mu*1|| from a center built
  from any particular solution (volume p^(n-k)), or as vectors of that norm
  in a volume-p^(n-k-1) sublattice after forcing the syndrome into the first
  row and dropping it.

Plus the affine-diameter machinery that picks the value-set embedding, the
mean/median center-radius choices, and the Gaussian-heuristic degeneracy
classification (List instance vs unique-target instance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import ffmat, lattice, regsd
from .errors import (
    BadAssignment,
    DimensionMismatch,
    InvalidParameters,
    NoParticularSolution,
    NonIntegerCenter,
    NotInLattice,
    TooFar,
    ZeroSyndrome,
)
from .ffmat import FpMatrix, FpVector, PrimeField
from .lattice import BallSpec, LatticeBasis, code_lattice, gh_count_log2
from .regsd import ExpandedInstance, expand, parse_light_regular, phi_inv
from .ressd import ResSdInstance, RestrictionSet, check_solution
from .rng import make_rng


# ----------------------------------------------------------------------
# exact reduction via the expanded instance


@dataclass
class CvpReductionContext:
    lattice: LatticeBasis
    target: np.ndarray  # integer lift of a particular expanded solution
    expanded: ExpandedInstance
    guessed: tuple = ()  # (block, element-index) prefix fixed by guessing

    @property
    def n_residual(self) -> int:
        return self.expanded.n

    def ball(self) -> BallSpec:
        """Solutions sit at distance exactly sqrt(n) from the target."""
        return BallSpec(self.lattice.dim, math.sqrt(self.expanded.n),
                        center=tuple(int(x) for x in self.target),
                        radius_sq=self.expanded.n)


def _expand_raw(field: PrimeField, H: FpMatrix, s: FpVector, E: RestrictionSet) -> ExpandedInstance:
    """Expansion of a possibly rank-deficient / anonymous instance."""
    p, n, z = field.p, H.cols, E.z
    elems = E.as_array()
    U = np.zeros((n, z * n), dtype=np.int64)
    for i in range(n):
        U[i, i * z:(i + 1) * z] = 1
    HE = np.repeat(H.data, z, axis=1) * np.tile(elems, n)[None, :] % p
    H_tilde = FpMatrix(field, np.concatenate([U, HE], axis=0))
    s_tilde = FpVector(field, np.concatenate([np.ones(n, dtype=np.int64), s.data]))
    return ExpandedInstance(None, H_tilde, s_tilde, n, n - H.rows, E)


def _context_from_expanded(exp: ExpandedInstance, guessed=()) -> CvpReductionContext:
    y = ffmat.solve_particular(exp.H_tilde, exp.s_tilde)
    if y is None:
        raise NoParticularSolution("expanded parity system is inconsistent")
    gen = ffmat.kernel_basis(exp.H_tilde)
    g_sys, perm = ffmat.systematic_form(gen)
    lat = code_lattice(g_sys, perm)
    return CvpReductionContext(lat, y.data.astype(np.int64), exp, tuple(guessed))


def ressd_to_cvp(inst: ResSdInstance) -> CvpReductionContext:
    """Exact reduction: lattice of the expanded code's dual-kernel, target a
    lifted particular solution; solutions are the lattice vectors at distance
    exactly sqrt(n).  Volume p^(2n-k)."""
    return _context_from_expanded(expand(inst))


def cvp_solution_to_ressd(ctx: CvpReductionContext, u_star) -> FpVector:
    """Map a close lattice vector back to a restricted solution."""
    u = np.asarray(u_star, dtype=np.int64)
    exp = ctx.expanded
    p = exp.field.p
    if u.shape != ctx.target.shape:
        raise DimensionMismatch("candidate has wrong dimension")
    residual = ffmat.syndrome(exp.H_tilde, FpVector(exp.field, u % p))
    if np.any(residual.data):
        raise NotInLattice("candidate is not in the reduction lattice")
    diff = ctx.target - u
    dist_sq = int((diff.astype(object) ** 2).sum())
    if dist_sq > exp.n:
        raise TooFar(f"||target - u||^2 = {dist_sq} > n = {exp.n}")
    e_tilde = diff % p
    lv = parse_light_regular(e_tilde, exp.z)
    assert lv is not None, "within sqrt(n) the difference must be light-regular"
    return phi_inv(exp.E, lv)


@dataclass
class GuessBranch:
    """One member of the z^g guessing batch."""

    context: Optional[CvpReductionContext]
    batch_index: int
    assignment: tuple
    prefix_values: tuple  # guessed field elements for the first g coordinates
    consistent: bool  # False when the branch is provably empty


def guess_blocks(inst_or_ctx, g: int, assignment: Sequence[int]) -> GuessBranch:
    """Fix the light-regular pattern of the first g blocks.

    The guess is applied on the original support (equivalent to fixing the
    first g expansion blocks): the residual instance has n-g coordinates and
    the lattice dimension shrinks to z(n-g).  Iterating over all z^g
    assignments covers every solution.
    """
    if isinstance(inst_or_ctx, CvpReductionContext):
        exp = inst_or_ctx.expanded
        if exp.base is None:
            raise BadAssignment("context does not carry a base instance")
        inst = exp.base
    else:
        inst = inst_or_ctx
    n, z = inst.n, inst.E.z
    if not (0 <= g <= n):
        raise BadAssignment(f"g={g} outside [0, {n}]")
    assignment = tuple(int(a) for a in assignment)
    if len(assignment) != g or any(not (0 <= a < z) for a in assignment):
        raise BadAssignment(f"assignment must lie in [0, {z})^{g}")
    batch_index = 0
    for a in assignment:
        batch_index = batch_index * z + a
    elems = inst.E.as_array()
    prefix = tuple(int(elems[a]) for a in assignment)
    p = inst.p
    if g == 0:
        return GuessBranch(ressd_to_cvp(inst), batch_index, assignment, prefix, True)
    s_res = inst.s.data.copy()
    for i, val in enumerate(prefix):
        s_res = (s_res - val * inst.H.data[:, i]) % p
    if g == n:
        return GuessBranch(None, batch_index, assignment, prefix,
                           consistent=not np.any(s_res))
    H_res = FpMatrix(inst.field, inst.H.data[:, g:])
    exp = _expand_raw(inst.field, H_res, FpVector(inst.field, s_res), inst.E)
    try:
        ctx = _context_from_expanded(exp, guessed=tuple(zip(range(g), assignment)))
    except NoParticularSolution:
        return GuessBranch(None, batch_index, assignment, prefix, consistent=False)
    return GuessBranch(ctx, batch_index, assignment, prefix, True)


def branch_solutions_to_full(inst: ResSdInstance, branch: GuessBranch,
                             residual_solutions) -> list:
    """Combine a branch's residual solutions with its guessed prefix and keep
    the ones solving the original instance."""
    out = []
    for e_res in residual_solutions:
        data = np.concatenate([np.array(branch.prefix_values, dtype=np.int64),
                               e_res.data if isinstance(e_res, FpVector) else np.asarray(e_res)])
        e = FpVector(inst.field, data)
        if check_solution(inst, e):
            out.append(e)
    return out


# ----------------------------------------------------------------------
# affine diameter


@dataclass(frozen=True)
class DiameterResult:
    D_E: int
    a: int
    b: int
    shifted_set: tuple

    def __post_init__(self):
        assert self.shifted_set[0] == 0 and self.shifted_set[-1] == self.D_E


def affine_diameter(E, p: Optional[int] = None) -> DiameterResult:
    """Exact min over a != 0, x0 in E of max_x Z(a(x - x0)).

    Equals the shortest integer segment containing some affine image aE + b.
    Ties resolve to the smallest a, then the smallest Z(a x0).
    """
    if isinstance(E, RestrictionSet):
        elems = E.as_array()
        p = E.field.p
    else:
        if p is None:
            raise InvalidParameters("p required when E is a plain sequence")
        elems = np.array(sorted(set(int(x) % p for x in E)), dtype=np.int64)
    z = len(elems)
    if z == 1:
        return DiameterResult(0, 1, int(-elems[0]) % p, (0,))
    a_vals = np.arange(1, p, dtype=np.int64)
    # T[a-1, i] = max_x Z(a * (x - elems[i]))
    diffs = (elems[None, None, :] - elems[None, :, None])  # (1, x0, x)
    table = (a_vals[:, None, None] * diffs) % p
    maxima = table.max(axis=2)  # (p-1, z)
    D = int(maxima.min())
    cand = np.argwhere(maxima == D)
    best = None
    for ai, xi in cand:
        a = int(a_vals[ai])
        x0 = int(elems[xi])
        key = (a, a * x0 % p)
        if best is None or key < best[0]:
            best = (key, a, x0)
    _, a, x0 = best
    b = (-a * x0) % p
    shifted = tuple(sorted(int((a * x + b) % p) for x in elems))
    return DiameterResult(D, a, b, shifted)


# ----------------------------------------------------------------------
# compact reductions


@dataclass
class CompactReductionContext:
    variant: str  # "listcvp" | "listsvp"
    lattice: LatticeBasis
    mu: Fraction
    anchor: FpVector  # canonical particular solution a with a H^T = s
    inst: ResSdInstance
    target: Optional[tuple] = None  # mu*1 - Z(anchor), rational (listcvp only)
    check_matrix: Optional[FpMatrix] = None  # parity check whose kernel is the lattice mod p

    def embed(self, e: FpVector) -> np.ndarray:
        """Integer embedding of a solution into the lattice."""
        if self.variant == "listcvp":
            return e.data.astype(np.int64) - self.anchor.data.astype(np.int64)
        return e.data.astype(np.int64) - int(self.mu)

    def embedding_distance_sq(self, e: FpVector) -> Fraction:
        """||embed(e) - target||^2 (listcvp) or ||embed(e)||^2 (listsvp),
        both equal sum (Z(e_i) - mu)^2 exactly."""
        total = Fraction(0)
        for x in e.data:
            d = Fraction(int(x)) - self.mu
            total += d * d
        return total

    def contains(self, w) -> bool:
        """Lattice membership via the defining parity check."""
        w = np.asarray(w, dtype=np.int64)
        h = self.check_matrix
        res = ffmat.syndrome(h, FpVector(h.field, w % h.field.p))
        return not np.any(res.data)

    def pull_back(self, w) -> FpVector:
        """Left inverse of the embedding (candidate may not solve; filter)."""
        w = np.asarray(w, dtype=np.int64)
        p = self.inst.p
        if self.variant == "listcvp":
            return FpVector(self.inst.field, (w + self.anchor.data) % p)
        return FpVector(self.inst.field, (w + int(self.mu)) % p)

    def pull_back_solutions(self, vectors) -> list:
        """Pull back and keep the vectors that solve the base instance."""
        out = []
        for w in np.asarray(vectors, dtype=np.int64).reshape(-1, self.inst.n):
            e = self.pull_back(w)
            if check_solution(self.inst, e):
                out.append(e)
        return out

    def ball(self, radius=None, radius_sq=None) -> BallSpec:
        if radius is None and radius_sq is None:
            radius_sq = median_radius_sq(self.inst.E, self.inst.n)
        if radius is None:
            radius = math.sqrt(float(radius_sq))
        center = self.target if self.variant == "listcvp" else None
        return BallSpec(self.lattice.dim, radius, center, radius_sq=radius_sq)


def mean_center(E) -> Fraction:
    """Average integer representative; minimizes the expected squared
    per-coordinate deviation."""
    elems = E.elements if isinstance(E, RestrictionSet) else tuple(E)
    return Fraction(sum(int(x) for x in elems), len(elems))


def set_variance(E) -> Fraction:
    """sigma^2 of the uniform distribution on Z(E), about mean_center."""
    elems = E.elements if isinstance(E, RestrictionSet) else tuple(E)
    mu = mean_center(elems)
    return sum((Fraction(int(x)) - mu) ** 2 for x in elems) / len(elems)


def median_radius_sq(E, n: int) -> Fraction:
    return n * set_variance(E)


def median_radius(E, n: int) -> float:
    """Heuristic median of the embedding distance: sqrt(n sigma^2)."""
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    return math.sqrt(float(median_radius_sq(E, n)))


def compact_listcvp(inst: ResSdInstance, mu) -> CompactReductionContext:
    """Dimension-n reduction: lattice of the code with parity check H,
    target mu*1 - Z(a) for a canonical particular solution a.

    For every solution e, ||embed(e) - target||^2 = sum (Z(e_i) - mu)^2.
    Volume p^(n-k)."""
    mu = Fraction(mu)
    if mu < 0:
        raise InvalidParameters("mu must be nonnegative")
    anchor = ffmat.solve_particular(inst.H, inst.s)
    if anchor is None:
        raise NoParticularSolution("instance has no parity solution")
    gen = ffmat.kernel_basis(inst.H)
    g_sys, perm = ffmat.systematic_form(gen)
    lat = code_lattice(g_sys, perm)
    target = tuple(mu - int(a) for a in anchor.data)
    return CompactReductionContext("listcvp", lat, mu, anchor, inst,
                                   target=target, check_matrix=inst.H)


def listsvp_reduce(inst: ResSdInstance, mu) -> CompactReductionContext:
    """Norm-form variant for an integer center.

    Shift E by -mu, map the shifted syndrome to (1, 0, ..., 0) with an
    invertible Q, drop the first row: solutions embed as Z(e) - mu*1 in the
    kernel lattice of the remaining rows, of volume p^(n-k-1).  Membership
    no longer implies solving; pull-backs are filtered."""
    if isinstance(mu, float) and not mu.is_integer():
        raise NonIntegerCenter(f"mu={mu} must be a nonnegative integer")
    if isinstance(mu, Fraction) and mu.denominator != 1:
        raise NonIntegerCenter(f"mu={mu} must be a nonnegative integer")
    mu = int(mu)
    if mu < 0:
        raise InvalidParameters("mu must be nonnegative")
    p = inst.p
    ones_syndrome = inst.H.data.sum(axis=1) % p
    s_shift = (inst.s.data - mu * ones_syndrome) % p
    if not np.any(s_shift):
        raise ZeroSyndrome("shifted syndrome is zero; no invertible Q maps it to e1")
    anchor = ffmat.solve_particular(inst.H, inst.s)
    if anchor is None:
        raise NoParticularSolution("instance has no parity solution")
    m = inst.n - inst.k
    j = int(np.nonzero(s_shift)[0][0])
    inv = pow(int(s_shift[j]), -1, p)
    # Q: row 0 maps s_shift to 1 via position j; remaining rows are the other
    # unit rows corrected to annihilate s_shift
    Q = np.zeros((m, m), dtype=np.int64)
    Q[0, j] = inv
    r = 1
    for t in range(m):
        if t == j:
            continue
        Q[r, t] = 1
        Q[r, j] = (-int(s_shift[t]) * inv) % p
        r += 1
    H2 = ffmat._matmul_mod(Q, inst.H.data, p)
    H3 = FpMatrix(inst.field, H2[1:, :])
    gen = ffmat.kernel_basis(H3)
    g_sys, perm = ffmat.systematic_form(gen)
    lat = code_lattice(g_sys, perm)
    return CompactReductionContext("listsvp", lat, Fraction(mu), anchor, inst,
                                   target=None, check_matrix=H3)


# ----------------------------------------------------------------------
# success probability and degeneracy


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    samples: int

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        return abs(self.p_hat - expected) <= sigmas * max(self.stderr, 1e-12)


def success_prob_mc(E, n: int, mu, R, samples: int, seed: int,
                    radius_sq=None) -> McEstimate:
    """Monte-Carlo Pr[sum (e_i - mu)^2 <= R^2] for uniform e over Z(E)^n.

    The comparison is exact (denominator-cleared integer arithmetic);
    radius_sq overrides R**2 when the radius itself is irrational."""
    if samples < 1:
        raise InvalidParameters("samples must be >= 1")
    elems = E.as_array() if isinstance(E, RestrictionSet) else np.array(sorted(E), dtype=np.int64)
    mu = Fraction(mu)
    r_sq = Fraction(radius_sq) if radius_sq is not None else Fraction(R) ** 2
    # sum (e - mu)^2 <= R^2  <=>  md^2 Se2 - 2 mp md Se + n mp^2 <= md^2 R^2;
    # the left side is an integer, so compare against floor of the right side
    md, mp_ = mu.denominator, mu.numerator
    rhs_frac = r_sq * md * md
    rhs = rhs_frac.numerator // rhs_frac.denominator
    rhs = min(rhs, (1 << 62))
    rng = make_rng(seed, stream=4)
    hits = 0
    done = 0
    chunk = max(1, min(samples, 1 << 16))
    while done < samples:
        take = min(chunk, samples - done)
        draws = elems[rng.integers(0, len(elems), size=(take, n))]
        se = draws.sum(axis=1, dtype=np.int64)
        se2 = (draws * draws).sum(axis=1, dtype=np.int64)
        lhs = md * md * se2 - 2 * mp_ * md * se + n * mp_ * mp_
        hits += int((lhs <= rhs).sum())
        done += take
    p_hat = hits / samples
    stderr = math.sqrt(max(p_hat * (1 - p_hat), 1.0 / samples) / samples)
    return McEstimate(p_hat, stderr, samples)


@dataclass(frozen=True)
class DegeneracyReport:
    kind: str  # "pure" | "list"
    gh_count_log2: float  # exact Gamma-function ball volume
    threshold: float  # simplified-form uniqueness threshold on R
    radius: float

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"


def classify_degeneracy(n: int, k: int, p: int, R) -> DegeneracyReport:
    """Unique-target (pure) instance iff R <= sqrt(n / 2 pi e) p^(1 - k/n).

    The threshold uses the simplified first-minimum form; the attached count
    uses the exact Gamma-function ball volume.  Both are reported."""
    R = float(R)
    threshold = math.sqrt(n / (2 * math.pi * math.e)) * p ** (1.0 - k / n)
    lvol = (n - k) * math.log2(p)
    count = gh_count_log2(n, R, lvol) if R > 0 else -math.inf
    kind = "pure" if R <= threshold else "list"
    return DegeneracyReport(kind, count, threshold, R)
