import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerag.ff_linalg import PreparedSolver, matvec, rank, right_kernel_basis, rref, solve_any
from powerag.finite_field import field_make

FIELDS = [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (2, 4), (3, 2)]


@st.composite
def field_and_matrix(draw, max_dim=6):
    F = field_make(*draw(st.sampled_from(FIELDS)))
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    flat = draw(st.lists(st.integers(0, F.q - 1), min_size=rows * cols, max_size=rows * cols))
    return F, np.array(flat, dtype=np.int64).reshape(rows, cols)


def brute_kernel_size(F, A):
    cols = A.shape[1]
    count = 0
    for v in itertools.product(range(F.q), repeat=cols):
        if not np.any(F.matmul(A, np.array(v))):
            count += 1
    return count


def test_rref_examples(gf4):
    F2 = field_make(2, 1)
    R, rk, piv = rref(F2, np.eye(3, dtype=np.int64))
    assert np.array_equal(R, np.eye(3)) and rk == 3 and piv == (0, 1, 2)
    R, rk, piv = rref(F2, np.zeros((2, 4), dtype=np.int64))
    assert not R.any() and rk == 0 and piv == ()
    R, rk, piv = rref(F2, [[1, 1, 0], [1, 0, 1]])
    assert R.tolist() == [[1, 0, 1], [0, 1, 1]] and rk == 2 and piv == (0, 1)


def test_kernel_examples():
    F2 = field_make(2, 1)
    assert right_kernel_basis(F2, np.eye(4, dtype=np.int64)).shape == (4, 0)
    K = right_kernel_basis(F2, np.zeros((2, 3), dtype=np.int64))
    assert K.shape == (3, 3) and rank(F2, K) == 3
    K = right_kernel_basis(F2, [[1, 1, 0], [1, 0, 1]])
    assert K[:, 0].tolist() == [1, 1, 1]


def test_solve_examples(gf4):
    F2 = field_make(2, 1)
    b = np.array([1, 0, 1])
    assert solve_any(F2, np.eye(3, dtype=np.int64), b).tolist() == [1, 0, 1]
    assert solve_any(F2, np.zeros((2, 2), dtype=np.int64), [1, 0]) is None
    x = solve_any(gf4, [[1, 2], [0, 0]], [1, 0])
    assert x.tolist() == [1, 0]
    with pytest.raises(ValueError):
        solve_any(gf4, [[1, 2]], [1, 0])


@settings(max_examples=150, deadline=None)
@given(field_and_matrix())
def test_kernel_properties(fa):
    F, A = fa
    K = right_kernel_basis(F, A)
    rk = rank(F, A)
    assert K.shape == (A.shape[1], A.shape[1] - rk)
    assert not np.any(F.matmul(A, K))
    assert rank(F, K) == K.shape[1]


@settings(max_examples=60, deadline=None)
@given(field_and_matrix(max_dim=4))
def test_kernel_size_matches_enumeration(fa):
    F, A = fa
    if F.q ** A.shape[1] > 4096:
        return
    assert brute_kernel_size(F, A) == F.q ** right_kernel_basis(F, A).shape[1]


@settings(max_examples=150, deadline=None)
@given(field_and_matrix())
def test_rref_properties(fa):
    F, A = fa
    R, rk, piv = rref(F, A)
    assert list(piv) == sorted(piv)
    R2, rk2, piv2 = rref(F, R)
    assert np.array_equal(R, R2) and rk == rk2 and piv == piv2
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert not R[rk:].any()
    assert rank(F, A.T) == rk


@settings(max_examples=150, deadline=None)
@given(field_and_matrix(), st.data())
def test_solve_properties(fa, data):
    F, A = fa
    x0 = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=A.shape[1],
                                     max_size=A.shape[1])))
    b = matvec(F, A, x0)
    x = solve_any(F, A, b)
    assert x is not None
    assert np.array_equal(matvec(F, A, x), b)
    prep = PreparedSolver(F, A)
    assert np.array_equal(prep.solve(b), x)
    b2 = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=A.shape[0],
                                     max_size=A.shape[0])))
    y = solve_any(F, A, b2)
    y2 = prep.solve(b2)
    if y is None:
        assert y2 is None
        assert rank(F, np.column_stack([A, b2])) > rank(F, A)
    else:
        assert np.array_equal(y, y2)
        assert np.array_equal(matvec(F, A, y), F.array(b2))


def test_large_kernel():
    F = field_make(2, 4)
    rng = np.random.default_rng(1)
    B = rng.integers(0, 16, (120, 90))
    C = rng.integers(0, 16, (90, 200))
    A = F.matmul(B, C)  # rank <= 90
    K = right_kernel_basis(F, A)
    assert K.shape[1] == 200 - rank(F, A) >= 110
    assert not np.any(F.matmul(A, K))
