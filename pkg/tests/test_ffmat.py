import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsdkit import ffmat
from rsdkit.errors import (
    DimensionMismatch,
    FieldMismatch,
    InvalidParameters,
    RankDeficient,
    Singular,
)
from rsdkit.ffmat import FpMatrix, FpVector, PrimeField
from rsdkit.rng import make_rng

F5 = PrimeField(5)
F7 = PrimeField(7)


def test_field_validation():
    with pytest.raises(InvalidParameters):
        PrimeField(4)
    with pytest.raises(InvalidParameters):
        PrimeField(1)
    with pytest.raises(InvalidParameters):
        PrimeField(2**31 + 11)
    assert PrimeField(2).p == 2
    assert PrimeField((1 << 31) - 1).p == 2147483647  # Mersenne prime


def test_entry_canonicalization():
    with pytest.raises(InvalidParameters):
        FpVector(F5, [0, 5])
    assert FpVector.from_ints(F5, [-1, 7]).tolist() == [4, 2]


def test_mat_mul_identity_and_zero():
    B = FpMatrix(F5, [[1, 2, 3], [4, 0, 1], [2, 2, 2]])
    I3 = FpMatrix.identity(F5, 3)
    Z = FpMatrix.zeros(F5, 3, 3)
    assert ffmat.mat_mul(I3, B) == B
    assert ffmat.mat_mul(Z, B) == Z


def test_mat_mul_hand_example():
    A = FpMatrix(F5, [[1, 2], [3, 4]])
    B = FpMatrix(F5, [[0, 1], [1, 1]])
    assert ffmat.mat_mul(A, B).data.tolist() == [[2, 3], [4, 2]]


def test_mat_mul_errors():
    A = FpMatrix(F5, [[1, 2]])
    with pytest.raises(DimensionMismatch):
        ffmat.mat_mul(A, A)
    with pytest.raises(FieldMismatch):
        ffmat.mat_mul(A, FpMatrix(F7, [[1], [2]]))


def test_mat_mul_large_p_no_overflow():
    p = (1 << 31) - 1
    F = PrimeField(p)
    rng = make_rng(0)
    a = rng.integers(0, p, size=(4, 300), dtype=np.int64)
    b = rng.integers(0, p, size=(300, 3), dtype=np.int64)
    got = ffmat.mat_mul(FpMatrix(F, a), FpMatrix(F, b)).data
    want = np.array([[sum(int(x) * int(y) for x, y in zip(ra, cb)) % p
                      for cb in b.T] for ra in a])
    assert np.array_equal(got, want)


def test_rref_trivials():
    I4 = FpMatrix.identity(F5, 4)
    r = ffmat.rref(I4)
    assert r.R == I4 and r.pivots == [0, 1, 2, 3] and r.rank == 4 and r.T == I4
    Z = FpMatrix.zeros(F5, 2, 3)
    r = ffmat.rref(Z)
    assert r.R == Z and r.pivots == [] and r.rank == 0
    assert r.T == FpMatrix.identity(F5, 2)


def test_rref_rank_one():
    r = ffmat.rref(FpMatrix(F5, [[2, 4], [1, 2]]))
    assert r.rank == 1 and r.pivots == [0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(2, 6))
def test_rref_invariants_random(seed, m, n):
    rng = make_rng(seed)
    A = FpMatrix(F7, rng.integers(0, 7, size=(m, n), dtype=np.int64))
    r = ffmat.rref(A)
    # R = T A and T invertible
    assert ffmat.mat_mul(r.T, A) == r.R
    ffmat.invert(r.T)
    # idempotence
    again = ffmat.rref(r.R)
    assert again.R == r.R


def test_solve_particular_trivials():
    H = FpMatrix.identity(F5, 2)
    assert ffmat.solve_particular(H, FpVector(F5, [3, 1])).tolist() == [3, 1]
    z = ffmat.solve_particular(H, FpVector(F5, [0, 0]))
    assert z.tolist() == [0, 0]


def test_solve_particular_roundtrip():
    rng = make_rng(5)
    H = FpMatrix(F7, np.concatenate(
        [np.eye(3, dtype=np.int64), rng.integers(0, 7, size=(3, 2), dtype=np.int64)], axis=1))
    e = FpVector(F7, rng.integers(0, 7, size=5, dtype=np.int64))
    s = ffmat.syndrome(H, e)
    y = ffmat.solve_particular(H, s)
    assert ffmat.syndrome(H, y) == s


def test_solve_particular_inconsistent():
    # second row is a multiple of the first: y H^T = (0, 1) has no solution
    H = FpMatrix.from_ints(F5, [[1, 2, 3], [2, 4, 6]])
    assert ffmat.solve_particular(H, FpVector(F5, [0, 1])) is None


def test_systematic_form_identity_cases():
    G = FpMatrix(F5, [[1, 0, 2, 3], [0, 1, 1, 4]])
    gs, perm = ffmat.systematic_form(G)
    assert gs == G and perm.tolist() == [0, 1, 2, 3]
    I3 = FpMatrix.identity(F5, 3)
    gs, perm = ffmat.systematic_form(I3)
    assert gs == I3 and perm.tolist() == [0, 1, 2]


def test_systematic_form_pivot_swap():
    G = FpMatrix(F5, [[0, 1, 2, 3], [0, 2, 1, 4]])  # first column zero
    gs, perm = ffmat.systematic_form(G)
    assert np.array_equal(gs.data[:, :2], np.eye(2, dtype=np.int64))
    assert perm[0] != 0
    # row space preserved: un-permute and compare rref
    unperm = np.empty_like(gs.data)
    unperm[:, perm] = gs.data
    assert ffmat.rref(FpMatrix(F5, unperm)).R == ffmat.rref(G).R


def test_systematic_form_rank_deficient():
    with pytest.raises(RankDeficient):
        ffmat.systematic_form(FpMatrix(F5, [[1, 2], [2, 4]]))


def test_invert_examples():
    I2 = FpMatrix.identity(F5, 2)
    assert ffmat.invert(I2) == I2
    X = FpMatrix(F5, [[0, 1], [1, 0]])
    assert ffmat.invert(X) == X
    A = FpMatrix(F5, [[2, 1], [1, 1]])
    Ainv = ffmat.invert(A)
    assert Ainv.data.tolist() == [[1, 4], [4, 2]]
    assert ffmat.mat_mul(A, Ainv) == I2
    with pytest.raises(Singular):
        ffmat.invert(FpMatrix(F5, [[1, 2], [2, 4]]))


def test_kernel_basis():
    rng = make_rng(9)
    H = FpMatrix(F7, rng.integers(0, 7, size=(3, 6), dtype=np.int64))
    K = ffmat.kernel_basis(H)
    assert K.rows == 6 - ffmat.rank(H)
    prod = ffmat.mat_mul(K, FpMatrix(F7, H.data.T))
    assert not prod.data.any()


def test_solve_square_fast_path():
    rng = make_rng(3)
    A = rng.integers(0, 7, size=(5, 5), dtype=np.int64)
    while ffmat.rank(FpMatrix(F7, A)) < 5:
        A = rng.integers(0, 7, size=(5, 5), dtype=np.int64)
    b = rng.integers(0, 7, size=5, dtype=np.int64)
    x = ffmat.solve_square(A, b, 7)
    assert np.array_equal(A @ x % 7, b)
    singular = np.zeros((2, 2), dtype=np.int64)
    assert ffmat.solve_square(singular, np.array([1, 0]), 7) is None


def test_perm_matrix_matches_index_application():
    rng = make_rng(4)
    M = FpMatrix(F7, rng.integers(0, 7, size=(3, 4), dtype=np.int64))
    perm = np.array([2, 0, 3, 1])
    P = ffmat.perm_matrix(F7, perm)
    assert np.array_equal(ffmat.mat_mul(M, P).data, M.data[:, perm])
    inv = ffmat.invert_perm(perm)
    assert np.array_equal(M.data[:, perm][:, inv], M.data)
