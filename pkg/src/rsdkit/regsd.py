"""Expansion to regular decoding with light-regular solutions, and two ISD solvers.

The expansion replaces each coordinate of the restricted problem by a block
of z indicator positions: column j*z+t of the expanded parity-check carries
E[t] * H_j, and n extra rows force each block to sum to 1.  Solutions of the
restricted instance correspond bijectively to weight-n solutions of the
expanded instance whose nonzero entries are all 1 ("light-regular" vectors).

Both solvers draw block-respecting ("bi-regular") column permutations that
send one coordinate per block to a first section and one to a second, which
keeps the selected square block generically invertible.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import ffmat
from .errors import (
    DimensionMismatch,
    EntryOutsideE,
    InvalidParameters,
    ListCapExceeded,
    ZTooSmall,
)
from .ffmat import FpMatrix, FpVector
from .ressd import ResSdInstance, RestrictionSet, check_solution
from .rng import make_rng


@dataclass(frozen=True)
class ExpandedInstance:
    base: Optional[ResSdInstance]
    H_tilde: FpMatrix
    s_tilde: FpVector
    n: int
    k: int
    E: RestrictionSet

    @property
    def z(self) -> int:
        return self.E.z

    @property
    def field(self):
        return self.H_tilde.field


def expand(inst: ResSdInstance) -> ExpandedInstance:
    """Build the (2n-k) x zn expanded parity-check and its syndrome."""
    p, n, z = inst.p, inst.n, inst.E.z
    elems = inst.E.as_array()
    # block-of-ones rows
    U = np.zeros((n, z * n), dtype=np.int64)
    for i in range(n):
        U[i, i * z:(i + 1) * z] = 1
    # column j*z+t = E[t] * H_j
    HE = np.repeat(inst.H.data, z, axis=1) * np.tile(elems, n)[None, :] % p
    H_tilde = FpMatrix(inst.field, np.concatenate([U, HE], axis=0))
    s_tilde = FpVector(inst.field, np.concatenate([np.ones(n, dtype=np.int64), inst.s.data]))
    return ExpandedInstance(inst, H_tilde, s_tilde, n, inst.k, inst.E)


@dataclass(frozen=True)
class LightRegularVector:
    """One 1 per block of width z, zeros elsewhere; Hamming weight n_blocks."""

    n_blocks: int
    z: int
    positions: tuple  # per-block index of the single 1

    def __post_init__(self):
        if len(self.positions) != self.n_blocks:
            raise DimensionMismatch("one position per block required")
        if any(not (0 <= t < self.z) for t in self.positions):
            raise InvalidParameters("positions must lie in [0, z)")

    def to_vector(self, field) -> FpVector:
        x = np.zeros(self.n_blocks * self.z, dtype=np.int64)
        for i, t in enumerate(self.positions):
            x[i * self.z + t] = 1
        return FpVector(field, x)


def phi(E: RestrictionSet, e: FpVector) -> LightRegularVector:
    """Indicator expansion of e in E^n."""
    idx = E.index_of(e.data)
    if np.any(idx < 0):
        raise EntryOutsideE("vector has an entry outside E")
    return LightRegularVector(len(e), E.z, tuple(int(t) for t in idx))


def phi_inv(E: RestrictionSet, v: LightRegularVector) -> FpVector:
    if v.z != E.z:
        raise DimensionMismatch(f"block width {v.z} != |E| = {E.z}")
    return FpVector(E.field, E.as_array()[np.array(v.positions, dtype=np.int64)])


def parse_light_regular(x: np.ndarray, z: int) -> Optional[LightRegularVector]:
    """Interpret a length-zn array as a light-regular vector, or None."""
    if x.size % z:
        return None
    blocks = x.reshape(-1, z)
    if not np.all(np.isin(blocks, (0, 1))) or not np.all(blocks.sum(axis=1) == 1):
        return None
    return LightRegularVector(blocks.shape[0], z, tuple(int(t) for t in blocks.argmax(axis=1)))


# ----------------------------------------------------------------------
# bi-regular permutations


@dataclass(frozen=True)
class BiRegularPermutation:
    """Per block: one coordinate to section 1, one to section 2, the other
    z-2 (in order) to section 3."""

    n: int
    z: int
    picks: tuple  # n rows, each a permutation of (0..z-1)

    def dest_to_src(self) -> np.ndarray:
        """sigma with permuted[d] = original[sigma[d]]."""
        n, z = self.n, self.z
        sigma = np.empty(n * z, dtype=np.int64)
        picks = np.array(self.picks, dtype=np.int64)
        base = np.arange(n, dtype=np.int64) * z
        sigma[:n] = base + picks[:, 0]
        sigma[n:2 * n] = base + picks[:, 1]
        if z > 2:
            rest = picks[:, 2:]
            sigma[2 * n:] = (base[:, None] + rest).reshape(-1)
        return sigma

    def apply_to_vector(self, x: np.ndarray) -> np.ndarray:
        return x[self.dest_to_src()]

    def unapply_to_vector(self, y: np.ndarray) -> np.ndarray:
        sigma = self.dest_to_src()
        x = np.empty_like(y)
        x[sigma] = y
        return x


def sample_biregular(n: int, z: int, seed_or_rng) -> BiRegularPermutation:
    if z < 2:
        raise ZTooSmall("bi-regular permutations need z >= 2")
    rng = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) else make_rng(seed_or_rng, stream=2)
    picks = tuple(tuple(int(v) for v in rng.permutation(z)) for _ in range(n))
    return BiRegularPermutation(n, z, picks)


# ----------------------------------------------------------------------
# permutation-based ISD


@dataclass
class PrangeResult:
    solution: Optional[FpVector]
    iterations: int
    successes: int
    singular_draws: int
    wall_ms: float

    def to_run_log(self) -> dict:
        return {
            "solver": "prange_regular",
            "iterations": self.iterations,
            "successes": self.successes,
            "singular_draws": self.singular_draws,
            "wall_ms": round(self.wall_ms, 3),
            "found": self.solution is not None,
            "solution": self.solution.tolist() if self.solution is not None else None,
        }


def _prange_iteration(exp: ExpandedInstance, perm: BiRegularPermutation):
    """One draw: returns ('singular', None) or (weight_ok, light_vector)."""
    n, k, p = exp.n, exp.k, exp.field.p
    m = 2 * n - k
    sigma = perm.dest_to_src()
    A = exp.H_tilde.data[:, sigma[:m]]
    e1 = ffmat.solve_square(A, exp.s_tilde.data, p)
    if e1 is None:
        return "singular", None
    if int(np.count_nonzero(e1)) != n:
        return "miss", None
    x = np.zeros(n * exp.z, dtype=np.int64)
    x[sigma[:m]] = e1
    lv = parse_light_regular(x, exp.z)
    return "hit", lv


def prange_regular(exp: ExpandedInstance, seed: int, max_iters: int,
                   count_all: bool = False) -> PrangeResult:
    """Permutation-based ISD on the expanded instance.

    Draw a bi-regular permutation, invert the left (2n-k) block, accept when
    the solved section has Hamming weight exactly n.  With `count_all` the
    loop always runs max_iters and counts successes (for rate measurements);
    otherwise it returns at the first success.
    """
    t0 = time.perf_counter()
    rng = make_rng(seed, stream=2)
    successes = singular = 0
    solution = None
    iters = 0
    for _ in range(max_iters):
        iters += 1
        perm = sample_biregular(exp.n, exp.z, rng)
        status, lv = _prange_iteration(exp, perm)
        if status == "singular":
            singular += 1
            continue
        if status == "hit":
            successes += 1
            if solution is None:
                e = phi_inv(exp.E, lv)
                if exp.base is not None:
                    assert check_solution(exp.base, e)
                solution = e
            if not count_all:
                break
    return PrangeResult(solution, iters, successes, singular,
                        (time.perf_counter() - t0) * 1e3)


# ----------------------------------------------------------------------
# enumeration-based ISD


@dataclass
class EnumIsdResult:
    solution: Optional[FpVector]
    iterations: int
    singular_draws: int
    list1_size: int
    list2_size: int
    merged_sizes: list
    wall_ms: float

    def to_run_log(self) -> dict:
        return {
            "solver": "enum_isd",
            "iterations": self.iterations,
            "singular_draws": self.singular_draws,
            "list1_size": self.list1_size,
            "list2_size": self.list2_size,
            "merged_sizes": self.merged_sizes,
            "wall_ms": round(self.wall_ms, 3),
            "found": self.solution is not None,
            "solution": self.solution.tolist() if self.solution is not None else None,
        }


def _support_combos(n_blocks: int, width: int, weight: int):
    """All (columns, ...) supports with `weight` blocks of one chosen slot."""
    for blocks in itertools.combinations(range(n_blocks), weight):
        for slots in itertools.product(range(width), repeat=weight):
            yield tuple(b * width + t for b, t in zip(blocks, slots))


def enum_isd(exp: ExpandedInstance, w_enum: int, ell: int, seed: int,
             max_iters: int, list_cap: int = 1 << 26) -> EnumIsdResult:
    """Enumeration-based ISD (meet-in-the-middle over the third section).

    Splits the n blocks into halves of ceil(n/2) and floor(n/2); each list
    enumerates the weight-ceil(w/2) (resp. floor) patterns over the z-2 wide
    remainder section, and the two lists are merged on the ell residual
    syndrome coordinates by hashing.
    """
    n, k, z, p = exp.n, exp.k, exp.z, exp.field.p
    m = 2 * n - k
    if not (0 <= w_enum <= n):
        raise InvalidParameters(f"w_enum={w_enum} outside [0, {n}]")
    if not (1 <= ell <= n - k):
        raise InvalidParameters(f"ell={ell} outside [1, n-k={n - k}]")
    if z < 3 and w_enum > 0:
        raise InvalidParameters("section 3 is empty for z=2; use w_enum=0")
    nh, nl = (n + 1) // 2, n // 2
    wh, wl = (w_enum + 1) // 2, w_enum // 2
    from math import comb
    size1 = comb(nh, wh) * (z - 2) ** wh if w_enum else 1
    size2 = comb(nl, wl) * (z - 2) ** wl if w_enum else 1
    if max(size1, size2) > list_cap:
        raise ListCapExceeded(f"|L1|={size1}, |L2|={size2} exceed cap {list_cap}")

    t0 = time.perf_counter()
    rng = make_rng(seed, stream=3)
    singular = 0
    merged_sizes = []
    solution = None
    iters = 0
    width = z - 2
    for _ in range(max_iters):
        iters += 1
        perm = sample_biregular(n, z, rng)
        sigma = perm.dest_to_src()
        M = exp.H_tilde.data[:, sigma]
        R, pivots, T = ffmat._rref_arrays(M, p)
        if pivots[: m - ell] != list(range(m - ell)):
            singular += 1
            continue
        B = R[: m - ell, m - ell:]
        C = R[m - ell:, m - ell:]
        t_vec = ffmat._matmul_mod(T, exp.s_tilde.data, p)
        t1, t2 = t_vec[: m - ell], t_vec[m - ell:]
        # x2 = (0^{k+ell}, y) with y over n blocks of width z-2
        off = k + ell
        C1 = C[:, off: off + nh * width]
        C2 = C[:, off + nh * width:]
        # hash the first-half list by its syndrome contribution
        table = {}
        combos1 = list(_support_combos(nh, width, wh)) if w_enum else [()]
        combos2 = list(_support_combos(nl, width, wl)) if w_enum else [()]
        assert len(combos1) == size1 and len(combos2) == size2
        for cols in combos1:
            key = (C1[:, cols].sum(axis=1) % p).tobytes() if cols else np.zeros(ell, dtype=np.int64).tobytes()
            table.setdefault(key, []).append(cols)
        merged = 0
        for cols2 in combos2:
            contrib = C2[:, cols2].sum(axis=1) % p if cols2 else 0
            key = ((t2 - contrib) % p).tobytes()
            for cols1 in table.get(key, ()):
                merged += 1
                x2 = np.zeros(n * z - (m - ell), dtype=np.int64)
                support = [off + c for c in cols1] + [off + nh * width + c for c in cols2]
                x2[support] = 1
                e1 = (t1 - B[:, support].sum(axis=1)) % p if support else t1.copy()
                if int(np.count_nonzero(e1)) != n - w_enum:
                    continue
                x = np.concatenate([e1, x2])
                full = perm.unapply_to_vector(x)
                lv = parse_light_regular(full, z)
                if lv is None:
                    continue
                e = phi_inv(exp.E, lv)
                if exp.base is not None and not check_solution(exp.base, e):
                    continue
                solution = e
                break
            if solution is not None:
                break
        merged_sizes.append(merged)
        if solution is not None:
            break
    return EnumIsdResult(solution, iters, singular, size1, size2, merged_sizes,
                         (time.perf_counter() - t0) * 1e3)


# ----------------------------------------------------------------------
# serialization

def expanded_to_dict(exp: ExpandedInstance) -> dict:
    from .ressd import instance_to_dict

    return {
        "kind": "expanded",
        "n": exp.n,
        "k": exp.k,
        "z": exp.z,
        "p": exp.field.p,
        "E": list(exp.E.elements),
        "H_tilde": exp.H_tilde.data.reshape(-1).tolist(),
        "s_tilde": exp.s_tilde.tolist(),
        "base": instance_to_dict(exp.base) if exp.base is not None else None,
    }
