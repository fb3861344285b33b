"""Exact dense linear algebra over prime fields F_p.

Values are canonical representatives in {0, ..., p-1} held in int64 numpy
arrays.  The modulus is capped below 2^31 so a single product of canonical
representatives never overflows int64; long inner products are chunked and
reduced when the accumulated sum could.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    InvalidParameters,
    RankDeficient,
    Singular,
)

_MAX_P = 1 << 31

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime modulus p, 2 <= p < 2^31."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not (2 <= self.p < _MAX_P):
            raise InvalidParameters(f"modulus must be an integer in [2, 2^31): {self.p}")
        if not is_prime(self.p):
            raise InvalidParameters(f"modulus {self.p} is not prime")

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise Singular("inverse of zero")
        return pow(a, -1, self.p)

    def __repr__(self):
        return f"F({self.p})"


def _as_canonical(field: PrimeField, data, ndim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=np.int64)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"expected {ndim}-dimensional data, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= field.p):
        raise InvalidParameters("entries must be canonical representatives in [0, p)")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class FpVector:
    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data):
        self.field = field
        self.data = _as_canonical(field, data, 1)

    @classmethod
    def from_ints(cls, field: PrimeField, data) -> "FpVector":
        return cls(field, np.asarray(data, dtype=np.int64) % field.p)

    @classmethod
    def zeros(cls, field: PrimeField, n: int) -> "FpVector":
        return cls(field, np.zeros(n, dtype=np.int64))

    def __len__(self):
        return self.data.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, FpVector)
            and self.field == other.field
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.field.p, self.data.tobytes()))

    def tolist(self) -> list:
        return [int(x) for x in self.data]

    def __repr__(self):
        return f"FpVector({self.field!r}, {self.tolist()})"


class FpMatrix:
    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data):
        self.field = field
        self.data = _as_canonical(field, data, 2)

    @classmethod
    def from_ints(cls, field: PrimeField, data) -> "FpMatrix":
        return cls(field, np.asarray(data, dtype=np.int64) % field.p)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FpMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FpMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.field == other.field
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self):
        return f"FpMatrix({self.field!r}, shape={self.data.shape})"


def _check_same_field(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p without int64 overflow (chunks the inner dimension)."""
    inner = a.shape[-1]
    limit = (1 << 62) // max((p - 1) ** 2, 1)
    if inner <= limit:
        return (a @ b) % p
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for lo in range(0, inner, max(limit, 1)):
        hi = min(lo + max(limit, 1), inner)
        out = (out + a[..., lo:hi] @ b[lo:hi]) % p
    return out


def mat_mul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    _check_same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.cols} columns vs {b.rows} rows")
    return FpMatrix(a.field, _matmul_mod(a.data, b.data, a.field.p))


def mat_vec(a: FpMatrix, x: FpVector) -> FpVector:
    """A x^T as a vector."""
    _check_same_field(a, x)
    if a.cols != len(x):
        raise DimensionMismatch(f"{a.cols} columns vs vector of length {len(x)}")
    return FpVector(a.field, _matmul_mod(a.data, x.data, a.field.p))


def vec_mat(x: FpVector, a: FpMatrix) -> FpVector:
    """x A as a vector."""
    _check_same_field(a, x)
    if a.rows != len(x):
        raise DimensionMismatch(f"{a.rows} rows vs vector of length {len(x)}")
    return FpVector(a.field, _matmul_mod(x.data, a.data, a.field.p))


def syndrome(h: FpMatrix, e: FpVector) -> FpVector:
    """e H^T for a parity-check matrix H."""
    _check_same_field(h, e)
    if h.cols != len(e):
        raise DimensionMismatch(f"{h.cols} columns vs vector of length {len(e)}")
    return FpVector(h.field, _matmul_mod(h.data, e.data, h.field.p))


class RrefResult(NamedTuple):
    R: FpMatrix
    pivots: list
    rank: int
    T: FpMatrix


def _rref_arrays(a: np.ndarray, p: int, with_transform: bool = True):
    """Reduced row echelon form of `a` mod p; returns (R, pivots, T or None)."""
    R = a.copy()
    m, n = R.shape
    T = np.eye(m, dtype=np.int64) if with_transform else None
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
            if with_transform:
                T[[r, piv]] = T[[piv, r]]
        inv = pow(int(R[r, col]), -1, p)
        R[r] = R[r] * inv % p
        if with_transform:
            T[r] = T[r] * inv % p
        others = np.nonzero(R[:, col])[0]
        others = others[others != r]
        if others.size:
            f = R[others, col][:, None]
            R[others] = (R[others] - f * R[r][None, :]) % p
            if with_transform:
                T[others] = (T[others] - f * T[r][None, :]) % p
        pivots.append(col)
        r += 1
    return R, pivots, T


def rref(a: FpMatrix) -> RrefResult:
    """R = T A in reduced row echelon form, with T invertible."""
    R, pivots, T = _rref_arrays(a.data, a.field.p)
    return RrefResult(
        FpMatrix(a.field, R), pivots, len(pivots), FpMatrix(a.field, T)
    )


def rank(a: FpMatrix) -> int:
    _, pivots, _ = _rref_arrays(a.data, a.field.p, with_transform=False)
    return len(pivots)


def solve_particular(h: FpMatrix, s: FpVector) -> Optional[FpVector]:
    """Some y with y H^T = s, free variables set to 0; None if inconsistent."""
    _check_same_field(h, s)
    if h.rows != len(s):
        raise DimensionMismatch(f"{h.rows} rows vs syndrome of length {len(s)}")
    p = h.field.p
    R, pivots, T = _rref_arrays(h.data, p)
    t = _matmul_mod(T, s.data, p)
    if np.any(t[len(pivots):]):
        return None
    y = np.zeros(h.cols, dtype=np.int64)
    y[pivots] = t[: len(pivots)]
    return FpVector(h.field, y)


def solve_square(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Fast path: x with A x = b mod p for square A; None if singular.

    Operates on raw arrays (used inside ISD loops).
    """
    n = a.shape[0]
    M = np.concatenate([a % p, (b % p)[:, None]], axis=1)
    for col in range(n):
        nz = np.nonzero(M[col:, col])[0]
        if nz.size == 0:
            return None
        piv = col + int(nz[0])
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        M[col] = M[col] * pow(int(M[col, col]), -1, p) % p
        others = np.nonzero(M[:, col])[0]
        others = others[others != col]
        if others.size:
            M[others] = (M[others] - M[others, col][:, None] * M[col][None, :]) % p
    return M[:, n]


def invert(a: FpMatrix) -> FpMatrix:
    if a.rows != a.cols:
        raise DimensionMismatch("matrix must be square")
    R, pivots, T = _rref_arrays(a.data, a.field.p)
    if len(pivots) != a.rows:
        raise Singular(f"rank {len(pivots)} < {a.rows}")
    return FpMatrix(a.field, T)


def systematic_form(g: FpMatrix) -> tuple:
    """(G_sys, perm) with G_sys = rowreduce(G P) = (I_k | R).

    `perm` is a column index array: (G P)[:, j] = G[:, perm[j]].  It is the
    identity whenever the leading k x k block is already invertible.
    """
    k = g.rows
    R, pivots, _ = _rref_arrays(g.data, g.field.p)
    if len(pivots) != k:
        raise RankDeficient(f"row rank {len(pivots)} < {k}")
    free = [j for j in range(g.cols) if j not in set(pivots)]
    perm = np.array(list(pivots) + free, dtype=np.int64)
    return FpMatrix(g.field, R[:, perm]), perm


def kernel_basis(h: FpMatrix) -> FpMatrix:
    """Rows spanning {x : x H^T = 0}; shape (cols - rank) x cols."""
    p = h.field.p
    R, pivots, _ = _rref_arrays(h.data, p, with_transform=False)
    piv_set = set(pivots)
    free = [j for j in range(h.cols) if j not in piv_set]
    basis = np.zeros((len(free), h.cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = (-int(R[r, f])) % p
    return FpMatrix(h.field, basis)


def perm_matrix(field: PrimeField, perm: Sequence[int]) -> FpMatrix:
    """Materialize a column-permutation index array as a matrix P with
    (M P)[:, j] = M[:, perm[j]]."""
    n = len(perm)
    P = np.zeros((n, n), dtype=np.int64)
    for j, src in enumerate(perm):
        P[int(src), j] = 1
    return FpMatrix(field, P)


def invert_perm(perm: Sequence[int]) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=np.int64)
    return inv
