import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix as SymMatrix

from rackmsr.ffield import make_extension_field, make_prime_field
from rackmsr.linalg import (
    InconsistentSystemError,
    Matrix,
    SingularMatrixError,
    inverse,
    rank,
    rank_mod_p,
    solve,
    vandermonde_solve,
)

F5 = make_prime_field(5)


def test_solve_examples():
    assert solve(Matrix(F5, [[1, 1], [1, 2]]), [0, 1]) == [4, 1]
    assert solve(Matrix.identity(F5, 3), [1, 2, 3]) == [1, 2, 3]
    with pytest.raises(SingularMatrixError):
        solve(Matrix.zeros(F5, 2, 2), [1, 0])


def test_tall_systems():
    A = Matrix(F5, [[1, 0], [0, 1], [1, 1]])
    assert solve(A, [2, 3, 0]) == [2, 3]
    with pytest.raises(InconsistentSystemError):
        solve(A, [2, 3, 1])


def test_rank_examples():
    assert rank(Matrix.identity(F5, 6)) == 6
    assert rank(Matrix.zeros(F5, 3, 4)) == 0
    assert rank(Matrix(F5, [[1, 2], [2, 4]])) == 1


def test_vandermonde_examples():
    assert vandermonde_solve([F5(1)], [F5(3)]) == [3]
    assert vandermonde_solve([F5(1), F5(2)], [0, 1]) == [4, 1]
    with pytest.raises(SingularMatrixError):
        vandermonde_solve([F5(1), F5(1)], [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32))
def test_solve_multiplies_back(n, seed):
    r = random.Random(seed)
    F = make_prime_field(101)
    A = Matrix(F, [[F.random(r) for _ in range(n)] for _ in range(n)])
    b = [F.random(r) for _ in range(n)]
    try:
        x = solve(A, b)
    except SingularMatrixError:
        assert rank(A) < n
        return
    assert A @ x == b


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_extension_field_solve(n, seed):
    r = random.Random(seed)
    F = make_extension_field(2, 8)
    A = Matrix(F, [[F.random(r) for _ in range(n)] for _ in range(n)])
    b = [F.random(r) for _ in range(n)]
    try:
        x = solve(A, b)
    except SingularMatrixError:
        return
    assert A @ x == b


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32))
def test_vandermonde_agrees_with_generic(n, seed):
    r = random.Random(seed)
    F = make_prime_field(97)
    pts = [F(x) for x in r.sample(range(97), n)]
    rhs = [F.random(r) for _ in range(n)]
    assert vandermonde_solve(pts, rhs) == solve(Matrix.vandermonde(pts), rhs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_rank_matches_sympy(rows, cols, seed):
    r = random.Random(seed)
    p = 7
    # low-rank products make rank deficiency common
    inner = r.randint(1, min(rows, cols))
    L = SymMatrix(rows, inner, lambda i, j: r.randrange(p))
    R = SymMatrix(inner, cols, lambda i, j: r.randrange(p))
    M = (L * R).applyfunc(lambda x: x % p)
    arr = [[int(M[i, j]) for j in range(cols)] for i in range(rows)]
    # oracle: rank of a square matrix equals size iff it is invertible mod p; use minors via sympy rref over GF(p)
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    dm = DomainMatrix([[GF(p)(x) for x in row] for row in arr], (rows, cols), GF(p))
    assert rank_mod_p(arr, p) == dm.rank()
    assert rank(Matrix(make_prime_field(p), arr)) == dm.rank()


def test_inverse_matches_sympy():
    r = random.Random(3)
    F = make_prime_field(13)
    for _ in range(20):
        M = [[r.randrange(13) for _ in range(4)] for _ in range(4)]
        S = SymMatrix(M)
        if S.det() % 13 == 0:
            with pytest.raises(SingularMatrixError):
                inverse(Matrix(F, M))
            continue
        want = S.inv_mod(13)
        got = inverse(Matrix(F, M))
        assert [[int(x) for x in row] for row in got.rows] == [[int(want[i, j]) for j in range(4)] for i in range(4)]


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Matrix(F5, [[1, 2], [3]])
