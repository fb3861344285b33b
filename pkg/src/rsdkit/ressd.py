"""Restricted-error decoding instances and value-set transformations.

An instance asks for e with e H^T = s and every entry of e inside a fixed
restriction set E of the prime field.  The transformations here rewrite an
instance without losing solutions: affine substitution of E, multiplicative
randomization when E is a subgroup, and randomized truncation of a subgroup
to its first z' powers.  Each transformation returns a context whose
`pull_back` maps solutions of the new instance to solutions of the original.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Optional, Union

import numpy as np

from . import ffmat
from .errors import (
    BadZPrime,
    ContextMismatch,
    DimensionMismatch,
    InvalidParameters,
    NoSuchSubgroup,
    NotSubgroup,
    ZeroScale,
)
from .ffmat import FpMatrix, FpVector, PrimeField
from .rng import GENERATOR_ID, make_rng


@dataclass(frozen=True)
class RestrictionSet:
    """Allowed error values, stored sorted by integer representative."""

    field: PrimeField
    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(int(x) % self.field.p for x in self.elements))
        if len(set(elems)) != len(elems) or not elems:
            raise InvalidParameters("restriction set must be nonempty with distinct elements")
        object.__setattr__(self, "elements", elems)

    @property
    def z(self) -> int:
        return len(self.elements)

    def as_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    def contains(self, values: np.ndarray) -> np.ndarray:
        return np.isin(values, self.as_array())

    def index_of(self, values: np.ndarray) -> np.ndarray:
        """Position of each value in the sorted element list (-1 if absent)."""
        arr = self.as_array()
        idx = np.searchsorted(arr, values)
        idx = np.clip(idx, 0, len(arr) - 1)
        ok = arr[idx] == values
        return np.where(ok, idx, -1)

    def is_subgroup(self) -> bool:
        """Closed under multiplication (hence a subgroup of F_p^*)."""
        if 0 in self.elements:
            return False
        p = self.field.p
        s = set(self.elements)
        return all(a * b % p in s for a in self.elements for b in self.elements)

    def generator(self) -> int:
        """Smallest g in E whose powers enumerate all of E."""
        if not self.is_subgroup():
            raise NotSubgroup(f"{self.elements} is not a multiplicative subgroup")
        p, z = self.field.p, self.z
        for g in self.elements:
            if g == 1 and z > 1:
                continue
            powers = {pow(g, i, p) for i in range(z)}
            if powers == set(self.elements):
                return g
        raise NotSubgroup("no single generator found (set is not cyclic)")

    def truncate(self, z_prime: int) -> "RestrictionSet":
        """First z' powers {w^0, ..., w^(z'-1)} of the canonical generator."""
        if not (1 <= z_prime <= self.z):
            raise BadZPrime(f"z'={z_prime} outside [1, {self.z}]")
        if z_prime == self.z:
            return self
        w = self.generator()
        p = self.field.p
        return RestrictionSet(self.field, tuple(pow(w, i, p) for i in range(z_prime)))


def cross_restriction(p: int, z: int) -> RestrictionSet:
    """The order-z multiplicative subgroup {w^i}, w the smallest primitive
    z-th root of unity."""
    field = PrimeField(p)
    if z < 1:
        raise InvalidParameters("z must be >= 1")
    if (p - 1) % z != 0:
        raise NoSuchSubgroup(f"{z} does not divide {p - 1}")
    if z == 1:
        return RestrictionSet(field, (1,))
    # prime factors of z, by trial division
    factors, m, d = set(), z, 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for w in range(2, p):
        if pow(w, z, p) == 1 and all(pow(w, z // q, p) != 1 for q in factors):
            return RestrictionSet(field, tuple(pow(w, i, p) for i in range(z)))
    raise NoSuchSubgroup(f"no element of order {z} found")  # pragma: no cover


@dataclass(frozen=True)
class ResSdInstance:
    field: PrimeField
    n: int
    k: int
    H: FpMatrix
    s: FpVector
    E: RestrictionSet
    planted: Optional[FpVector] = None
    seed: Optional[int] = None
    generator_id: str = GENERATOR_ID
    # transformations mark their outputs trusted (correct by construction)
    # to skip the O(n^3) revalidation in tight Monte-Carlo loops
    trusted: bool = dc_field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 <= self.k < self.n):
            raise InvalidParameters(f"need 0 <= k < n, got k={self.k}, n={self.n}")
        if self.H.rows != self.n - self.k or self.H.cols != self.n:
            raise DimensionMismatch(
                f"H must be {(self.n - self.k, self.n)}, got {(self.H.rows, self.H.cols)}"
            )
        if len(self.s) != self.n - self.k:
            raise DimensionMismatch("syndrome length must be n - k")
        if self.trusted:
            return
        if ffmat.rank(self.H) != self.n - self.k:
            raise InvalidParameters("H must have full row rank")
        if self.planted is not None and not check_solution(self, self.planted):
            raise InvalidParameters("planted vector is not a solution")

    @property
    def p(self) -> int:
        return self.field.p


def generate_instance(p: int, n: int, k: int, E: RestrictionSet, seed: int) -> ResSdInstance:
    """Planted instance with H = (I_{n-k} | H') and e uniform over E^n."""
    field = PrimeField(p)
    if not (0 < k < n):
        raise InvalidParameters(f"need 0 < k < n, got k={k}, n={n}")
    if E.field != field:
        raise InvalidParameters("restriction set lives in a different field")
    rng = make_rng(seed)
    right = rng.integers(0, p, size=(n - k, k), dtype=np.int64)
    H = FpMatrix(field, np.concatenate([np.eye(n - k, dtype=np.int64), right], axis=1))
    e = FpVector(field, E.as_array()[rng.integers(0, E.z, size=n)])
    s = ffmat.syndrome(H, e)
    return ResSdInstance(field, n, k, H, s, E, planted=e, seed=int(seed))


def check_solution(inst: ResSdInstance, e: FpVector) -> bool:
    if len(e) != inst.n:
        raise DimensionMismatch(f"solution length {len(e)} != n={inst.n}")
    if e.field != inst.field:
        return False
    if not bool(np.all(inst.E.contains(e.data))):
        return False
    return ffmat.syndrome(inst.H, e) == inst.s


# ----------------------------------------------------------------------
# transformations


@dataclass(frozen=True)
class AffineShiftContext:
    field: PrimeField
    a: int
    b: int

    def __post_init__(self):
        if self.a % self.field.p == 0:
            raise ZeroScale("affine scale a must be nonzero")


@dataclass(frozen=True)
class MultRandomizeContext:
    field: PrimeField
    c: tuple  # diagonal, entries in E


@dataclass(frozen=True)
class MultTruncateContext:
    field: PrimeField
    c: tuple
    z_prime: int


TransformContext = Union[AffineShiftContext, MultRandomizeContext, MultTruncateContext]


def affine_shift(inst: ResSdInstance, a: int, b: int):
    """Substitute E -> aE + b: H' = a^{-1} H, s' = s + b a^{-1} (1 H^T)."""
    p = inst.p
    a, b = int(a) % p, int(b) % p
    if a == 0:
        raise ZeroScale("affine scale a must be nonzero")
    ainv = pow(a, -1, p)
    H2 = FpMatrix(inst.field, inst.H.data * ainv % p)
    ones_syndrome = inst.H.data.sum(axis=1) % p
    s2 = FpVector(inst.field, (inst.s.data + b * ainv % p * ones_syndrome) % p)
    E2 = RestrictionSet(inst.field, tuple((a * x + b) % p for x in inst.E.elements))
    planted2 = None
    if inst.planted is not None:
        planted2 = FpVector(inst.field, (a * inst.planted.data + b) % p)
    ctx = AffineShiftContext(inst.field, a, b)
    new = ResSdInstance(inst.field, inst.n, inst.k, H2, s2, E2,
                        planted=planted2, seed=inst.seed, trusted=True)
    return new, ctx


def mult_randomize(inst: ResSdInstance, seed: int):
    """H' = H C^{-1} for a uniform diagonal C over E^n; the solution image
    e C is uniform over E^n."""
    if not inst.E.is_subgroup():
        raise NotSubgroup("multiplicative randomization needs a subgroup E")
    p = inst.p
    rng = make_rng(seed, stream=1)
    c = inst.E.as_array()[rng.integers(0, inst.E.z, size=inst.n)]
    cinv = np.array([pow(int(x), -1, p) for x in c], dtype=np.int64)
    H2 = FpMatrix(inst.field, inst.H.data * cinv[None, :] % p)
    planted2 = None
    if inst.planted is not None:
        planted2 = FpVector(inst.field, inst.planted.data * c % p)
    ctx = MultRandomizeContext(inst.field, tuple(int(x) for x in c))
    new = ResSdInstance(inst.field, inst.n, inst.k, H2, inst.s, inst.E,
                        planted=planted2, seed=inst.seed, trusted=True)
    return new, ctx


def mult_truncate(inst: ResSdInstance, z_prime: int, seed: int):
    """Randomize, then restrict to E' = {w^0, ..., w^(z'-1)}.

    The randomized planted image lands in E'^n with probability (z'/z)^n
    over the seed; on failure the returned instance carries planted=None.
    Returns (instance, context, E').
    """
    if not inst.E.is_subgroup():
        raise NotSubgroup("multiplicative truncation needs a subgroup E")
    if not (1 <= z_prime <= inst.E.z):
        raise BadZPrime(f"z'={z_prime} outside [1, {inst.E.z}]")
    randomized, rctx = mult_randomize(inst, seed)
    E2 = inst.E.truncate(z_prime)
    planted2 = randomized.planted
    if planted2 is not None and not bool(np.all(E2.contains(planted2.data))):
        planted2 = None
    ctx = MultTruncateContext(inst.field, rctx.c, z_prime)
    new = ResSdInstance(inst.field, inst.n, inst.k, randomized.H, randomized.s, E2,
                        planted=planted2, seed=inst.seed, trusted=True)
    return new, ctx, E2


def pull_back(ctx: TransformContext, e_prime: FpVector) -> FpVector:
    """Map a solution of the transformed instance back to the original."""
    if e_prime.field != ctx.field:
        raise ContextMismatch("context and solution live in different fields")
    p = ctx.field.p
    if isinstance(ctx, AffineShiftContext):
        ainv = pow(ctx.a, -1, p)
        return FpVector(ctx.field, (e_prime.data - ctx.b) * ainv % p)
    if isinstance(ctx, (MultRandomizeContext, MultTruncateContext)):
        if len(ctx.c) != len(e_prime):
            raise ContextMismatch(
                f"diagonal length {len(ctx.c)} != solution length {len(e_prime)}"
            )
        cinv = np.array([pow(int(x), -1, p) for x in ctx.c], dtype=np.int64)
        return FpVector(ctx.field, e_prime.data * cinv % p)
    raise ContextMismatch(f"unknown context {ctx!r}")


# ----------------------------------------------------------------------
# brute-force solving


def _guess_batches(E: RestrictionSet, k: int, batch: int = 1 << 14):
    """Mixed-radix enumeration of E^k in lexicographic order, in batches."""
    z = E.z
    total = z ** k
    arr = E.as_array()
    weights = z ** np.arange(k - 1, -1, -1, dtype=object)
    for lo in range(0, total, batch):
        hi = min(lo + batch, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = np.empty((hi - lo, k), dtype=np.int64)
        rem = idx
        for j, w in enumerate(weights):
            digits[:, j] = rem // int(w)
            rem = rem % int(w)
        yield arr[digits]


def naive_solve(inst: ResSdInstance, max_guesses: Optional[int] = None) -> Optional[FpVector]:
    """Enumerate z^k guesses for the free coordinates; first hit or None.

    Time O(n^2 z^k), negligible memory.
    """
    for sol in _iter_solutions(inst, max_guesses):
        return sol
    return None


def enumerate_solutions(inst: ResSdInstance, max_guesses: Optional[int] = None) -> list:
    """All solutions, in the deterministic order of naive_solve."""
    return list(_iter_solutions(inst, max_guesses))


def _iter_solutions(inst: ResSdInstance, max_guesses: Optional[int]):
    p = inst.p
    R, pivots, T = ffmat._rref_arrays(inst.H.data, p)
    free = [j for j in range(inst.n) if j not in set(pivots)]
    t = ffmat._matmul_mod(T, inst.s.data, p)[: len(pivots)]
    Rf = R[: len(pivots), :][:, free]
    seen = 0
    for G in _guess_batches(inst.E, len(free)):
        if max_guesses is not None and seen >= max_guesses:
            return
        if max_guesses is not None and seen + G.shape[0] > max_guesses:
            G = G[: max_guesses - seen]
        seen += G.shape[0]
        X = (t[None, :] - ffmat._matmul_mod(G, Rf.T, p)) % p
        ok = inst.E.contains(X).all(axis=1)
        for row in np.nonzero(ok)[0]:
            e = np.zeros(inst.n, dtype=np.int64)
            e[free] = G[row]
            e[pivots] = X[row]
            yield FpVector(inst.field, e)


# ----------------------------------------------------------------------
# serialization (canonical JSON, diff-stable)


def instance_to_dict(inst: ResSdInstance) -> dict:
    return {
        "kind": "ressd",
        "p": inst.p,
        "n": inst.n,
        "k": inst.k,
        "E": list(inst.E.elements),
        "H": inst.H.data.reshape(-1).tolist(),
        "s": inst.s.tolist(),
        "planted": inst.planted.tolist() if inst.planted is not None else None,
        "seed": inst.seed,
        "generator_id": inst.generator_id,
    }


def instance_from_dict(d: dict) -> ResSdInstance:
    field = PrimeField(int(d["p"]))
    n, k = int(d["n"]), int(d["k"])
    H = FpMatrix(field, np.array(d["H"], dtype=np.int64).reshape(n - k, n))
    planted = d.get("planted")
    return ResSdInstance(
        field, n, k, H,
        FpVector(field, d["s"]),
        RestrictionSet(field, tuple(d["E"])),
        planted=FpVector(field, planted) if planted is not None else None,
        seed=d.get("seed"),
        generator_id=d.get("generator_id", GENERATOR_ID),
    )


def to_canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def instance_hash(inst: ResSdInstance) -> str:
    return hashlib.sha256(to_canonical_json(instance_to_dict(inst)).encode()).hexdigest()


def save_instance(inst: ResSdInstance, path) -> str:
    text = to_canonical_json(instance_to_dict(inst))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return hashlib.sha256(text.encode()).hexdigest()


def load_instance(path) -> ResSdInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))
