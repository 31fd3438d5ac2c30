import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from profgrp.field import GF, Field, field_make, is_prime, prime_factors
from profgrp.linalg import (Echelon, inverse, kernel, kernel_f2, left_kernel, matpow, rank, rank_f2, rref,
                            rref_f2, solve)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (5, 2)]


def random_matrix(F, rows, cols, seed, density=1.0):
    rng = np.random.default_rng(seed)
    A = F.random((rows, cols), rng)
    if density < 1:
        A[rng.random((rows, cols)) > density] = 0
    return A


@st.composite
def matrices(draw):
    p, k = draw(st.sampled_from(FIELDS))
    F = GF(p, k)
    rows = draw(st.integers(1, 9))
    cols = draw(st.integers(1, 9))
    seed = draw(st.integers(0, 2**31))
    density = draw(st.sampled_from([1.0, 0.5, 0.2]))
    return F, random_matrix(F, rows, cols, seed, density)


def test_primes_and_factors():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(2520) == [2, 3, 5, 7]
    assert prime_factors(1) == []


def test_field_examples():
    F2 = field_make(2, 1)
    assert F2.q == 2 and F2.is_prime_field
    F4 = field_make(2, 2)
    assert F4.modulus == (1, 1, 1)  # t^2 + t + 1, lowest coefficient first
    x = 2  # the class of t
    assert F4.mul(x, x) == F4.add(x, 1)
    assert field_make(5).q == 5
    assert field_make(2, 2) is GF(2, 2)


def test_field_rejects_bad_parameters():
    with pytest.raises(ValueError):
        Field(6)
    with pytest.raises(ValueError):
        Field(2, 17)


@pytest.mark.parametrize("p,k", FIELDS + [(2, 4), (3, 3), (11, 1)])
def test_field_inverses_and_distributivity(p, k):
    F = GF(p, k)
    a = F.elements()
    nz = a[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    rng = np.random.default_rng(p * 10 + k)
    x, y, z = (F.random(200, rng) for _ in range(3))
    assert np.array_equal(F.mul(x, F.add(y, z)), F.add(F.mul(x, y), F.mul(x, z)))
    assert np.array_equal(F.sub(F.add(x, y), y), x)


def test_rref_identity_and_small_kernels():
    F2, F3 = GF(2), GF(3)
    assert rref(np.eye(4, dtype=np.int64), F2)[1] == 4
    K = kernel(np.ones((1, 3), dtype=np.int64), F3)
    assert K.shape == (2, 3)
    A = random_matrix(F3, 4, 6, 1)
    assert np.array_equal(solve(A, np.zeros(4, dtype=np.int64), F3), np.zeros(6, dtype=np.int64))


def test_solve_inconsistent_and_mismatch():
    F = GF(2)
    A = np.array([[1, 0], [1, 0]])
    assert solve(A, [1, 0], F) is None
    with pytest.raises(ValueError):
        solve(A, [1, 0, 1], F)


@given(matrices())
def test_rank_nullity_and_transpose(case):
    F, A = case
    r = rank(A, F)
    assert r == rank(A.T, F)
    K = kernel(A, F)
    assert len(K) == A.shape[1] - r
    assert not F.matmul(A, K.T).any()
    assert not F.matmul(left_kernel(A, F), A).any()


@given(matrices())
def test_rref_idempotent_with_increasing_pivots(case):
    F, A = case
    R, r, piv = rref(A, F)
    assert piv == sorted(piv) and len(set(piv)) == r
    R2, r2, piv2 = rref(R, F)
    assert np.array_equal(R, R2) and r == r2 and piv == piv2


@given(matrices(), st.integers(0, 2**31))
def test_solve_finds_solutions_when_consistent(case, seed):
    F, A = case
    x0 = F.random(A.shape[1], np.random.default_rng(seed))
    b = F.matmul(A, x0.reshape(-1, 1)).ravel()
    x = solve(A, b, F)
    assert x is not None
    assert np.array_equal(F.matmul(A, x.reshape(-1, 1)).ravel(), b)


@given(st.sampled_from(FIELDS), st.integers(1, 7), st.integers(0, 2**31))
def test_inverse_and_powers(fk, n, seed):
    F = GF(*fk)
    rng = np.random.default_rng(seed)
    A = F.random((n, n), rng)
    if rank(A, F) < n:
        with pytest.raises(ZeroDivisionError):
            inverse(A, F)
        return
    Ai = inverse(A, F)
    assert np.array_equal(F.matmul(A, Ai), np.eye(n, dtype=np.int64))
    assert np.array_equal(F.matmul(matpow(A, 3, F), matpow(A, -3, F)), np.eye(n, dtype=np.int64))


@given(st.integers(1, 60), st.integers(1, 150), st.integers(0, 2**31))
def test_packed_f2_agrees_with_generic(rows, cols, seed):
    F = GF(2)
    A = random_matrix(F, rows, cols, seed, 0.3)
    R, r, piv = rref(A, F)
    R2, r2, piv2 = rref_f2(A)
    assert (r, piv) == (r2, piv2)
    assert np.array_equal(R, R2)
    assert np.array_equal(kernel(A, F), kernel_f2(A))


@pytest.mark.slow
def test_packed_f2_agrees_at_full_size():
    F = GF(2)
    A = random_matrix(F, 2000, 4000, 7, 0.01)
    assert rank(A, F) == rank_f2(A)
    K = kernel_f2(A)
    assert len(K) == 4000 - rank_f2(A)
    assert not F.matmul(A, K[:50].T).any()


def test_echelon_relations_report_dependencies():
    F = GF(3)
    E = Echelon(F, 3, extra=2)
    rows = np.array([[1, 2, 0, 1, 0], [2, 1, 0, 0, 1]])  # second = 2 * first
    added, rel = E.add(rows, return_relations=True)
    assert added == E.rank == 1
    # row2 - 2*row1 vanishes on the pivotable columns, leaving passengers (-2, 1) = (1, 1)
    assert rel.tolist() == [[1, 1]]
