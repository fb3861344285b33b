import math
from fractions import Fraction

import numpy as np
import pytest

from rsdkit import ffmat, lattice, ressd
from rsdkit.rng import make_rng


@pytest.fixture(scope="session")
def cross_e7():
    return ressd.cross_restriction(127, 7)


@pytest.fixture(scope="session")
def f127():
    return ffmat.PrimeField(127)


def random_lattice(dim: int, seed: int, span: int = 8) -> lattice.LatticeBasis:
    """Random full-rank integer basis with small entries."""
    rng = make_rng(seed, stream=11)
    while True:
        rows = rng.integers(-span, span + 1, size=(dim, dim)).tolist()
        try:
            return lattice.LatticeBasis(rows)
        except Exception:
            continue


def brute_force_ball(basis: lattice.LatticeBasis, center, radius_sq,
                     include_zero: bool) -> set:
    """Oracle: enumerate a coefficient box guaranteed to cover the ball.

    Coefficients of v = c B with ||v - y|| <= R satisfy
    |c_i - (y B^{-1})_i| <= R ||(B^{-1})_{:, i}||.  The box is taken over a
    reduced basis of the same lattice (the change of basis is verified
    unimodular here, exactly); membership checks stay exact.
    """
    n = basis.dim
    reduced = lattice.lll(basis)
    U = reduced.transform
    assert abs(lattice.determinant(lattice.LatticeBasis([list(r) for r in U]))) == 1
    got = [[sum(U[i][t] * basis.rows[t][j] for t in range(n)) for j in range(n)]
           for i in range(n)]
    assert tuple(tuple(r) for r in got) == reduced.rows
    basis = reduced
    rows = [[Fraction(x) for x in r] for r in basis.rows]
    # invert B exactly
    aug = [rows[i] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    binv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    y = [Fraction(x) for x in center] if center is not None else [Fraction(0)] * n
    t = [sum(y[i] * binv[i][j] for i in range(n)) for j in range(n)]
    R = math.sqrt(float(Fraction(radius_sq)))
    ranges = []
    for j in range(n):
        colnorm = math.sqrt(sum(float(binv[i][j]) ** 2 for i in range(n)))
        lo = math.floor(float(t[j]) - R * colnorm - 1e-9)
        hi = math.ceil(float(t[j]) + R * colnorm + 1e-9)
        ranges.append(range(lo, hi + 1))
    total = 1
    for r in ranges:
        total *= len(r)
    assert total <= 40_000_000, f"oracle box too large: {total}"
    B = np.array(basis.rows, dtype=np.int64)
    rsq = Fraction(radius_sq)
    den = 1
    for x in y:
        den = den * x.denominator // math.gcd(den, x.denominator)
    yd = np.array([int(x * den) for x in y], dtype=np.int64)
    bound = rsq * den * den
    bound_floor = bound.numerator // bound.denominator
    lows = np.array([r.start for r in ranges], dtype=np.int64)
    sizes = np.array([len(r) for r in ranges], dtype=np.int64)
    weights = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        weights[j] = weights[j + 1] * sizes[j + 1]
    out = set()
    chunk = 1 << 18
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        coeffs = (idx[:, None] // weights[None, :]) % sizes[None, :] + lows[None, :]
        V = coeffs @ B
        D = V * den - yd[None, :]
        keep = (D * D).sum(axis=1) <= bound_floor
        if not include_zero:
            keep &= V.any(axis=1)
        for v in V[keep]:
            out.add(tuple(int(x) for x in v))
    return out
