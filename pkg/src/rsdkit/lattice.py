"""Integer-lattice toolkit: exact reduction, enumeration, and heuristic predictors.

Bases are full-rank square integer matrices whose rows generate the lattice.
Reduction (LLL, BKZ with an exact enumeration oracle) runs entirely in
integer arithmetic on the Gram data (the classic d_i / lambda_{i,j}
representation), so determinants and Gram-Schmidt norms are exact rationals.
Enumeration prunes in float64 with slack and re-verifies candidates exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lgamma, log2, pi, e as _e
from typing import Optional, Sequence

import numpy as np

from .enumkernel import HAVE_NUMBA, enum_kernel
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    InvalidParameters,
    NotSystematic,
    OutputCapExceeded,
)

DEFAULT_ENUM_CEILING = 60
EXACT_GSO_MAX_DIM = 64
MP_GSO_PRECISION = 128  # bits of significand above the exact-mode cutoff

_LOG2E = math.log2(math.e)


# ----------------------------------------------------------------------
# basis container


class LatticeBasis:
    """Immutable full-rank integer basis (rows generate the lattice)."""

    __slots__ = ("rows", "transform", "_gram_dets")

    def __init__(self, rows, transform=None):
        rows = [[int(x) for x in r] for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("basis must be square and nonempty")
        self.rows = tuple(tuple(r) for r in rows)
        self.transform = transform
        self._gram_dets = None
        if self._dets()[n] == 0:
            raise InvalidParameters("rows are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _dets(self):
        if self._gram_dets is None:
            eng = _IntegralGso([list(r) for r in self.rows], track_transform=False)
            self._gram_dets = list(eng.D)
        return self._gram_dets

    @property
    def volume(self) -> int:
        """|det|, exact (Gram determinant is a perfect square)."""
        g = self._dets()[self.dim]
        r = isqrt(g)
        assert r * r == g
        return r

    def to_array(self) -> np.ndarray:
        arr = np.array(self.rows, dtype=object)
        if max(abs(int(x)) for r in self.rows for x in r) < (1 << 62):
            arr = np.array(self.rows, dtype=np.int64)
        return arr

    def __eq__(self, other):
        return isinstance(other, LatticeBasis) and self.rows == other.rows

    def __repr__(self):
        return f"LatticeBasis(dim={self.dim})"


# ----------------------------------------------------------------------
# integral Gram-Schmidt / LLL engine (all-integer arithmetic)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class _IntegralGso:
    """Basis with exact Gram data: D[i] = det(Gram of first i rows),
    lam[i][j] = mu_{i,j} * D[j+1].  All integers."""

    def __init__(self, rows, track_transform=True):
        self.b = rows
        self.n = len(rows)
        self.U = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)] \
            if track_transform else None
        self.D = [1] * (self.n + 1)
        self.lam = [[0] * self.n for _ in range(self.n)]
        self.refresh_from(0)

    def refresh_from(self, start: int):
        for i in range(start, self.n):
            for j in range(i + 1):
                u = _dot(self.b[i], self.b[j])
                for t in range(j):
                    u = (self.D[t + 1] * u - self.lam[i][t] * self.lam[j][t]) // self.D[t]
                if j < i:
                    self.lam[i][j] = u
                else:
                    self.D[i + 1] = u

    # exact accessors
    def bstar_sq(self, i) -> Fraction:
        return Fraction(self.D[i + 1], self.D[i])

    def mu(self, i, j) -> Fraction:
        return Fraction(self.lam[i][j], self.D[j + 1])

    def mu_float(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        for i in range(self.n):
            for j in range(i):
                m[i, j] = float(self.mu(i, j))
        return m

    def bstar_float(self) -> np.ndarray:
        return np.array([float(self.bstar_sq(i)) for i in range(self.n)])

    # elementary steps
    def _red(self, k, l):
        if 2 * abs(self.lam[k][l]) > self.D[l + 1]:
            q = (2 * self.lam[k][l] + self.D[l + 1]) // (2 * self.D[l + 1])
            bk, bl = self.b[k], self.b[l]
            self.b[k] = [x - q * y for x, y in zip(bk, bl)]
            if self.U is not None:
                uk, ul = self.U[k], self.U[l]
                self.U[k] = [x - q * y for x, y in zip(uk, ul)]
            self.lam[k][l] -= q * self.D[l + 1]
            for t in range(l):
                self.lam[k][t] -= q * self.lam[l][t]

    def _swap(self, k):
        self.b[k], self.b[k - 1] = self.b[k - 1], self.b[k]
        if self.U is not None:
            self.U[k], self.U[k - 1] = self.U[k - 1], self.U[k]
        for t in range(k - 1):
            self.lam[k][t], self.lam[k - 1][t] = self.lam[k - 1][t], self.lam[k][t]
        lam = self.lam[k][k - 1]
        B = (self.D[k - 1] * self.D[k + 1] + lam * lam) // self.D[k]
        for i in range(k + 1, self.n):
            t = self.lam[i][k]
            self.lam[i][k] = (self.D[k + 1] * self.lam[i][k - 1] - lam * t) // self.D[k]
            self.lam[i][k - 1] = (B * t + lam * self.lam[i][k]) // self.D[k + 1]
        self.D[k] = B

    def lll(self, delta_num=99, delta_den=100, start=1):
        k = max(start, 1)
        while k < self.n:
            self._red(k, k - 1)
            lam = self.lam[k][k - 1]
            if delta_den * (self.D[k + 1] * self.D[k - 1] + lam * lam) < delta_num * self.D[k] * self.D[k]:
                self._swap(k)
                k = max(k - 1, 1)
            else:
                for l in range(k - 2, -1, -1):
                    self._red(k, l)
                k += 1

    def insert_block_transform(self, j, block_u):
        """Replace rows j..j+m-1 by block_u @ rows (block_u unimodular)."""
        m = len(block_u)
        old = [self.b[j + t] for t in range(m)]
        for r in range(m):
            self.b[j + r] = [
                sum(block_u[r][t] * old[t][c] for t in range(m))
                for c in range(self.n)
            ]
        if self.U is not None:
            old_u = [self.U[j + t] for t in range(m)]
            for r in range(m):
                self.U[j + r] = [
                    sum(block_u[r][t] * old_u[t][c] for t in range(m))
                    for c in range(self.n)
                ]
        self.refresh_from(j)


def _delta_fraction(epsilon: float):
    if not (0 < epsilon < 1):
        raise InvalidParameters("epsilon must lie in (0, 1)")
    d = Fraction(1) - Fraction(epsilon).limit_denominator(10**9)
    return d.numerator, d.denominator


def lll(basis: LatticeBasis, epsilon: float = 0.01) -> LatticeBasis:
    """LLL reduction with Lovasz factor (1 - epsilon); exact arithmetic.

    The result carries the unimodular transform: out.rows = transform @ in.rows.
    """
    num, den = _delta_fraction(epsilon)
    eng = _IntegralGso([list(r) for r in basis.rows])
    eng.lll(num, den)
    return LatticeBasis(eng.b, transform=tuple(tuple(r) for r in eng.U))


def unimodular_completion(coeffs: Sequence[int]) -> list:
    """Unimodular matrix whose first row is the primitive vector `coeffs`."""
    v = [int(x) for x in coeffs]
    m = len(v)
    W = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    # column ops reduce v to +-e_t; inverse row ops accumulate in W, so that
    # finally W[0] = original v
    while True:
        nz = [i for i, x in enumerate(v) if x != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda i: abs(v[i]))
        j, i = nz[0], nz[1]  # |v[j]| <= |v[i]|
        q = round(Fraction(v[i], v[j]))
        # col op: v[i] -= q*v[j]  <=>  row op on W: W[j] += q*W[i]
        v[i] -= q * v[j]
        W[j] = [a + q * b for a, b in zip(W[j], W[i])]
    t = next(i for i, x in enumerate(v) if x != 0)
    if v[t] < 0:
        v[t] = -v[t]
        W[t] = [-a for a in W[t]]
    assert v[t] == 1, "coefficient vector must be primitive"
    if t != 0:
        v[0], v[t] = v[t], v[0]
        W[0], W[t] = W[t], W[0]
    return W


def _exact_block_norm(eng: _IntegralGso, j: int, coeffs: Sequence[int]) -> Fraction:
    """Exact squared norm of the projection of sum coeffs[i] * b_{j+i} onto
    the orthogonal complement of b_0..b_{j-1}."""
    m = len(coeffs)
    total = Fraction(0)
    for i in range(m):
        acc = Fraction(coeffs[i])
        for l in range(i + 1, m):
            if coeffs[l]:
                acc += Fraction(coeffs[l]) * eng.mu(j + l, j + i)
        total += acc * acc * eng.bstar_sq(j + i)
    return total


def _block_shortest(eng: _IntegralGso, j: int, end: int, use_numba=True):
    """Shortest nonzero vector of the projected block [j, end]; returns
    (coeffs, exact_norm_sq) with exact minimality."""
    m = end - j + 1
    mu_f = np.zeros((m, m))
    bstar_f = np.empty(m)
    for a in range(m):
        bstar_f[a] = float(eng.bstar_sq(j + a))
        for b in range(a):
            mu_f[a, b] = float(eng.mu(j + a, j + b))
    bound = bstar_f[0] * (1.0 + 1e-9) + 1e-9
    bounds = np.full(m, bound)
    t = np.zeros(m)
    cap = 4096
    while True:
        out = np.empty((cap, m), dtype=np.int64)
        count, nodes, best = enum_kernel(mu_f, bstar_f, t, bounds, True, True, out, cap,
                                         hard_cap=1 << 40, use_numba=use_numba)
        if count <= cap:
            break
        cap = count
    best_c, best_norm = None, None
    for idx in range(count):
        c = out[idx]
        norm = _exact_block_norm(eng, j, c.tolist())
        if best_norm is None or norm < best_norm:
            best_c, best_norm = c.tolist(), norm
    return best_c, best_norm


def bkz(basis: LatticeBasis, beta: int, epsilon: float = 0.01, max_tours: int = 20,
        ceiling: int = DEFAULT_ENUM_CEILING, use_numba: bool = True) -> LatticeBasis:
    """BKZ-beta with exact enumeration as the projected-block oracle.

    Tours run until none changes the basis (each ||b*_j|| then equals the
    exact block minimum) or max_tours is hit.  beta = dim gives an
    HKZ-reduced basis.
    """
    n = basis.dim
    if not (2 <= beta <= n):
        raise InvalidParameters(f"beta must lie in [2, {n}]")
    if beta > ceiling:
        raise DimensionTooLarge(f"block size {beta} exceeds enumeration ceiling {ceiling}")
    num, den = _delta_fraction(epsilon)
    eng = _IntegralGso([list(r) for r in basis.rows])
    eng.lll(num, den)
    for _ in range(max_tours):
        changed = False
        for j in range(n - 1):
            end = min(j + beta - 1, n - 1)
            if end == j:
                continue
            coeffs, norm = _block_shortest(eng, j, end, use_numba)
            if coeffs is None or norm >= eng.bstar_sq(j):
                continue
            eng.insert_block_transform(j, unimodular_completion(coeffs))
            eng.lll(num, den, start=max(j, 1))
            changed = True
        if not changed:
            break
    return LatticeBasis(eng.b, transform=tuple(tuple(r) for r in eng.U))


# ----------------------------------------------------------------------
# Gram-Schmidt profile (exact below the cutoff, high precision above)


@dataclass
class GsoProfile:
    bstar_sq: list
    mu: list
    mode: str

    def bstar_norms(self) -> np.ndarray:
        return np.array([math.sqrt(float(x)) for x in self.bstar_sq])


def gram_schmidt(basis: LatticeBasis, exact: Optional[bool] = None) -> GsoProfile:
    """Squared GS norms and mu coefficients.

    Exact rationals up to dimension 64, 128-bit floats above (mode recorded),
    per the documented precision policy; `exact` overrides.
    """
    n = basis.dim
    if exact is None:
        exact = n <= EXACT_GSO_MAX_DIM
    if exact:
        eng = _IntegralGso([list(r) for r in basis.rows], track_transform=False)
        bstar = [eng.bstar_sq(i) for i in range(n)]
        mu = [[eng.mu(i, j) for j in range(i)] for i in range(n)]
        return GsoProfile(bstar, mu, "exact-rational")
    import mpmath

    with mpmath.workprec(MP_GSO_PRECISION):
        rows = [[mpmath.mpf(x) for x in r] for r in basis.rows]
        ortho = []
        mu = []
        for i in range(n):
            v = rows[i][:]
            murow = []
            for j in range(i):
                m = mpmath.fdot(rows[i], ortho[j]) / mpmath.fdot(ortho[j], ortho[j])
                murow.append(m)
                v = [a - m * b for a, b in zip(v, ortho[j])]
            ortho.append(v)
            mu.append(murow)
        bstar = [mpmath.fdot(o, o) for o in ortho]
        return GsoProfile(bstar, mu, f"mpf-{MP_GSO_PRECISION}")


def determinant(basis: LatticeBasis) -> int:
    """Signed determinant, fraction-free Bareiss elimination (exact)."""
    a = [list(r) for r in basis.rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ----------------------------------------------------------------------
# enumeration (SVP / List-SVP / List-CVP)


@dataclass(frozen=True)
class BallSpec:
    """Ball of given radius; center None means the origin (norm problems).

    radius_sq, when given, overrides radius**2 in the exact membership test
    (needed when the radius itself is irrational, e.g. sqrt(n))."""

    dim: int
    radius: object  # int | float | Fraction
    center: Optional[tuple] = None
    radius_sq: Optional[object] = None

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidParameters("radius must be nonnegative")
        if self.center is not None:
            object.__setattr__(self, "center", tuple(self.center))
            if len(self.center) != self.dim:
                raise DimensionMismatch("center length must equal dim")

    def radius_sq_exact(self) -> Fraction:
        if self.radius_sq is not None:
            return Fraction(self.radius_sq)
        return Fraction(self.radius) ** 2

    def center_exact(self) -> Optional[list]:
        if self.center is None:
            return None
        return [Fraction(x) for x in self.center]


@dataclass(frozen=True)
class EnumConfig:
    pruning: Optional[str] = None  # None | "linear"
    repeats: int = 1
    randomize_basis: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.pruning not in (None, "none", "linear"):
            raise InvalidParameters(f"unknown pruning mode {self.pruning!r}")
        if self.repeats < 1:
            raise InvalidParameters("repeats must be >= 1")
        if self.pruning == "linear" and self.repeats < 1:
            raise InvalidParameters("linear pruning requires recorded repeats")

    @property
    def linear(self) -> bool:
        return self.pruning == "linear"


def _check_ceiling(dim, ceiling):
    if dim > ceiling:
        raise DimensionTooLarge(
            f"dimension {dim} exceeds enumeration ceiling {ceiling}; "
            "raise the ceiling explicitly for long runs"
        )


def _center_gs_coords(eng: _IntegralGso, center: list) -> list:
    """Exact coordinates t with center = sum t_j b*_j (center rational)."""
    n = eng.n
    t = []
    for j in range(n):
        dot = sum(Fraction(center[i]) * eng.b[j][i] for i in range(n))
        acc = dot
        for l in range(j):
            acc -= eng.mu(j, l) * t[l] * eng.bstar_sq(l)
        t.append(acc / eng.bstar_sq(j))
    return t


def _exact_in_ball(vectors: np.ndarray, center: Optional[list], radius_sq: Fraction) -> np.ndarray:
    """Exact mask of ||v - center||^2 <= radius_sq for integer vectors."""
    if vectors.size == 0:
        return np.zeros(0, dtype=bool)
    if center is None:
        den = 1
        shifted = vectors.astype(np.int64)
    else:
        den = 1
        for x in center:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        cs = np.array([int(Fraction(x) * den) for x in center], dtype=np.int64)
        shifted = vectors.astype(np.int64) * den - cs[None, :]
    bound = radius_sq * den * den
    bound_floor = bound.numerator // bound.denominator
    maxabs = int(np.abs(shifted).max()) if shifted.size else 0
    if maxabs ** 2 * vectors.shape[1] < (1 << 62) and abs(bound_floor) < (1 << 62):
        lhs = (shifted.astype(np.int64) ** 2).sum(axis=1)
        return lhs <= bound_floor
    # big-number fallback
    mask = np.zeros(vectors.shape[0], dtype=bool)
    for i in range(vectors.shape[0]):
        lhs = sum(int(x) ** 2 for x in shifted[i])
        mask[i] = lhs <= bound_floor
    return mask


def _enumerate_once(eng: _IntegralGso, ball: BallSpec, linear_pruning: bool,
                    skip_zero: bool, hard_cap: int, buffer_hint: int,
                    use_numba: bool):
    """Single enumeration pass on the engine's current basis; returns
    (vectors ndarray, nodes)."""
    n = eng.n
    mu_f = eng.mu_float()
    bstar_f = eng.bstar_float()
    radius_sq = ball.radius_sq_exact()
    r2f = float(radius_sq) * (1.0 + 1e-9) + 1e-9
    depths = np.arange(n, 0, -1, dtype=np.float64)  # d = n - k at level k
    bounds = r2f * depths / n if linear_pruning else np.full(n, r2f)
    center = ball.center_exact()
    if center is None:
        t = np.zeros(n)
    else:
        t = np.array([float(x) for x in _center_gs_coords(eng, center)])
    cap = max(1024, min(buffer_hint, hard_cap))
    nodes_total = 0
    while True:
        out = np.empty((cap, n), dtype=np.int64)
        count, nodes, _ = enum_kernel(mu_f, bstar_f, t, bounds, skip_zero, False,
                                      out, cap, hard_cap=hard_cap, use_numba=use_numba)
        nodes_total += nodes
        if count > hard_cap:
            raise OutputCapExceeded(
                f"enumeration exceeded the output cap of {hard_cap} vectors")
        if count <= cap:
            break
        cap = count  # buffer was too small; rerun with the exact size
    coeffs = out[:count]
    rows = np.array(eng.b, dtype=np.int64)
    vectors = coeffs @ rows
    keep = _exact_in_ball(vectors, center, radius_sq)
    return vectors[keep], nodes_total


def _random_unimodular(n: int, rng) -> list:
    """Sparse unimodular matrix with entries in {-1, 0, 1} per elementary op."""
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        r = 1 if rng.integers(0, 2) else -1
        U[int(i)] = [a + r * b for a, b in zip(U[int(i)], U[int(j)])]
    perm = rng.permutation(n)
    U = [U[int(p)] for p in perm]
    return U


def list_enum(basis: LatticeBasis, ball: BallSpec, cfg: EnumConfig = EnumConfig(),
              ceiling: int = DEFAULT_ENUM_CEILING, max_vectors: int = 1 << 22,
              use_numba: bool = True, return_nodes: bool = False):
    """All lattice vectors v with ||v - center|| <= R.

    center None enumerates norms (the zero vector is excluded); a present
    center enumerates the ball around it (any in-range vector included).
    Without pruning the output is exhaustive.  Linear pruning applies the
    depth-d bound R*sqrt(d/n) per pass; repeats enumerate randomized bases
    and results accumulate with duplicates removed.  Output rows are sorted
    lexicographically.
    """
    n = basis.dim
    _check_ceiling(n, ceiling)
    if ball.dim != n:
        raise DimensionMismatch(f"ball dim {ball.dim} != lattice dim {n}")
    skip_zero = ball.center is None
    from .rng import make_rng

    rng = make_rng(cfg.seed, stream=7)
    lvol = log2_int(basis.volume)
    hint_log2 = gh_count_log2(n, math.sqrt(float(ball.radius_sq_exact())), lvol)
    buffer_hint = int(2.0 ** min(hint_log2, 32) * 1.2) + 2048 if hint_log2 != -math.inf else 1024
    batches = []
    nodes_total = 0
    for rep in range(cfg.repeats):
        if rep == 0 and not cfg.randomize_basis:
            eng = _IntegralGso([list(r) for r in basis.rows], track_transform=False)
        else:
            U = _random_unimodular(n, rng)
            rows = [[sum(U[r][t] * basis.rows[t][c] for t in range(n)) for c in range(n)]
                    for r in range(n)]
            eng = _IntegralGso(rows, track_transform=False)
            # weak Lovasz factor: keeps the blowup bounded without
            # canonicalizing away the randomization the repeats rely on
            eng.lll(51, 100)
        vectors, nodes = _enumerate_once(eng, ball, cfg.linear, skip_zero,
                                         max_vectors, buffer_hint, use_numba)
        nodes_total += nodes
        batches.append(vectors)
    if len(batches) == 1:
        merged = batches[0]
    else:
        merged = np.concatenate(batches, axis=0)
    if merged.shape[0]:
        # unique also sorts rows lexicographically (deterministic output);
        # duplicates only arise across randomized repeats
        result = np.unique(merged, axis=0)
    else:
        result = np.zeros((0, n), dtype=np.int64)
    if result.shape[0] > max_vectors:
        raise OutputCapExceeded(f"accumulated {result.shape[0]} vectors > cap {max_vectors}")
    if return_nodes:
        return result, nodes_total
    return result


def svp_enum(basis: LatticeBasis, ceiling: int = DEFAULT_ENUM_CEILING,
             use_numba: bool = True) -> np.ndarray:
    """A nonzero lattice vector of exactly minimal norm."""
    n = basis.dim
    _check_ceiling(n, ceiling)
    eng = _IntegralGso([list(r) for r in basis.rows], track_transform=False)
    eng.lll()
    bound = min(sum(x * x for x in row) for row in eng.b)
    mu_f = eng.mu_float()
    bstar_f = eng.bstar_float()
    bounds = np.full(n, float(bound) * (1.0 + 1e-9) + 1e-9)
    t = np.zeros(n)
    cap = 65536
    while True:
        out = np.empty((cap, n), dtype=np.int64)
        count, nodes, _ = enum_kernel(mu_f, bstar_f, t, bounds, True, True, out, cap,
                                      hard_cap=1 << 40, use_numba=use_numba)
        if count <= cap:
            break
        cap = count
    rows = np.array(eng.b, dtype=np.int64)
    best_vec, best_norm = None, None
    for idx in range(count):
        v = out[idx] @ rows
        norm = int(sum(int(x) ** 2 for x in v))
        if norm and (best_norm is None or norm < best_norm):
            best_vec, best_norm = v, norm
    if best_vec is None:  # all rows longer than the initial bound: impossible
        raise InvalidParameters("enumeration found no nonzero vector")  # pragma: no cover
    return best_vec


# ----------------------------------------------------------------------
# code lattices


def code_lattice(g_sys, perm=None) -> LatticeBasis:
    """Lattice of all integer vectors congruent mod p to a codeword.

    g_sys must be systematic (I_k | R) over F_p; the generator is
    [[I_k, R], [0, p I_{n-k}]] with columns un-permuted by `perm` (the column
    index array returned by systematic_form).  Volume is p^(n-k).
    """
    k, n = g_sys.rows, g_sys.cols
    p = g_sys.field.p
    if not np.array_equal(g_sys.data[:, :k], np.eye(k, dtype=np.int64)):
        raise NotSystematic("generator must have the form (I_k | R)")
    A = np.zeros((n, n), dtype=np.int64)
    A[:k, :k] = np.eye(k, dtype=np.int64)
    A[:k, k:] = g_sys.data[:, k:]
    A[k:, k:] = p * np.eye(n - k, dtype=np.int64)
    if perm is not None:
        perm = np.asarray(perm, dtype=np.int64)
        B = np.empty_like(A)
        B[:, perm] = A  # undo the systematizing column permutation
        A = B
    return LatticeBasis(A.tolist())


# ----------------------------------------------------------------------
# heuristic predictors


def log2_int(v) -> float:
    v = int(v)
    if v <= 0:
        raise InvalidParameters("log2 of a nonpositive integer")
    if v < (1 << 53):
        return math.log2(v)
    bits = v.bit_length()
    return math.log2(v >> (bits - 53)) + (bits - 53)


def log2_ball_volume(n: int, radius: float) -> float:
    """log2 Vol(B(n, R)) = log2(R^n pi^(n/2) / Gamma(1 + n/2))."""
    if radius < 0:
        raise InvalidParameters("radius must be nonnegative")
    if radius == 0:
        return -math.inf
    return n * log2(radius) + (n / 2) * log2(pi) - lgamma(1 + n / 2) * _LOG2E


def gh_count_log2(n: int, radius: float, log2_volume: float) -> float:
    """log2 of the Gaussian-heuristic point count Vol(B(n,R)) / Vol(L)."""
    return log2_ball_volume(n, radius) - log2_volume


def gh_count(n: int, radius: float, volume) -> float:
    if volume <= 0:
        raise InvalidParameters("volume must be positive")
    lv = log2_int(volume) if isinstance(volume, int) else log2(volume)
    lg = gh_count_log2(n, radius, lv)
    if lg == -math.inf:
        return 0.0
    return 2.0 ** lg


def gh_lambda1(n: int, volume, simplified: bool = False) -> float:
    """Gaussian-heuristic first minimum.

    Exact form (Vol B(n,1))^(-1/n) vol^(1/n); the simplified flag uses
    sqrt(n / 2 pi e) vol^(1/n) instead (both appear in the cost models).
    """
    lv = log2_int(volume) if isinstance(volume, int) else log2(volume)
    if simplified:
        return 2.0 ** (0.5 * log2(n / (2 * pi * _e)) + lv / n)
    return 2.0 ** (-log2_ball_volume(n, 1.0) / n + lv / n)


def gsa_delta(n: int) -> float:
    """GSA decay ratio delta = (n / 2 pi e)^(-1 / (2n - 2))."""
    if n < 2:
        raise InvalidParameters("need n >= 2")
    return (n / (2 * pi * _e)) ** (-1.0 / (2 * n - 2))


def gsa_profile(n: int, volume) -> np.ndarray:
    """Predicted GS norms ||b*_i|| = delta^(2i - n - 1) vol^(1/n), i = 1..n."""
    if n < 2:
        raise InvalidParameters("need n >= 2")
    lv = log2_int(volume) if isinstance(volume, int) else log2(volume)
    ld = log2(gsa_delta(n))
    i = np.arange(1, n + 1, dtype=np.float64)
    return 2.0 ** ((2 * i - n - 1) * ld + lv / n)


# ----------------------------------------------------------------------
# serialization


def basis_to_dict(basis: LatticeBasis, provenance: Optional[dict] = None) -> dict:
    return {
        "kind": "lattice",
        "dim": basis.dim,
        "rows": [int(x) for r in basis.rows for x in r],
        "volume": str(basis.volume),
        "provenance": provenance or {},
    }


def basis_from_dict(d: dict) -> LatticeBasis:
    n = int(d["dim"])
    flat = [int(x) for x in d["rows"]]
    rows = [flat[i * n:(i + 1) * n] for i in range(n)]
    basis = LatticeBasis(rows)
    if "volume" in d:
        assert basis.volume == int(d["volume"]), "stored volume mismatch"
    return basis


def write_vector_stream(path, vectors) -> int:
    """Write vectors as line-delimited JSON arrays (bounded-memory consumer
    format for large enumerations); returns the count written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for v in vectors:
            fh.write(json.dumps([int(x) for x in v]))
            fh.write("\n")
            count += 1
    return count


def save_basis(basis: LatticeBasis, path, provenance: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(basis_to_dict(basis, provenance), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_basis(path) -> LatticeBasis:
    with open(path, "r", encoding="utf-8") as fh:
        return basis_from_dict(json.load(fh))
