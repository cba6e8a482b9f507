from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qclust.exact import RationalMatrix, SparseRational, kron_sparse


def rm(rows):
    return RationalMatrix.from_fractions(rows)


def test_from_fractions_and_entry():
    m = rm([[Fraction(1, 2), 1], [0, Fraction(-2, 3)]])
    assert m.entry(0, 0) == Fraction(1, 2)
    assert m.entry(1, 1) == Fraction(-2, 3)
    assert m.den == 6


def test_identity_and_matmul():
    a = rm([[1, 2], [3, 4]])
    eye = RationalMatrix.identity(2)
    assert a @ eye == a
    b = rm([[0, 1], [1, 0]])
    assert (a @ b) == rm([[2, 1], [4, 3]])


def test_add_sub_scale():
    a = rm([[Fraction(1, 2), 0], [0, 1]])
    b = rm([[Fraction(1, 3), 0], [0, 2]])
    assert (a + b).entry(0, 0) == Fraction(5, 6)
    assert (a - b).entry(1, 1) == -1
    assert a.scale(Fraction(2, 5)).entry(0, 0) == Fraction(1, 5)


def test_equality_ignores_common_factors():
    a = RationalMatrix(np.array([[2, 0], [0, 2]], dtype=object), 4)
    b = RationalMatrix(np.array([[1, 0], [0, 1]], dtype=object), 2)
    assert a == b
    a.reduce()
    assert a.den == 2


def test_idempotent_and_symmetric():
    p = rm([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]])
    assert p.is_idempotent()
    assert p.is_symmetric()
    assert p.trace() == 1
    q = rm([[1, 1], [0, 1]])
    assert not q.is_symmetric()


def test_trace_and_mul_trace():
    a = rm([[1, 2], [3, 4]])
    b = rm([[5, 6], [7, 8]])
    assert a.mul_trace(b) == (a @ b).trace()


def test_permuted_is_conjugation():
    a = rm([[1, 2, 0], [0, 5, 0], [0, 0, 9]])
    action = np.array([2, 0, 1])
    ap = a.permuted(action)
    for i in range(3):
        for j in range(3):
            assert ap.entry(action[i], action[j]) == a.entry(i, j)


def test_rank_exact():
    assert rm([[1, 2], [2, 4]]).rank_exact() == 1
    assert RationalMatrix.identity(4).rank_exact() == 4
    assert RationalMatrix.zeros(3).rank_exact() == 0
    assert rm([[1, 0, 1], [0, 1, 1], [1, 1, 2]]).rank_exact() == 2


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=3))
def test_projector_rank_equals_trace(n, seed):
    # random rational projector built from a 0/1 diagonal conjugated by a
    # permutation is about as exciting as exact arithmetic gets quickly
    rng = np.random.default_rng(seed)
    diag = rng.integers(0, 2, size=n)
    num = np.zeros((n, n), dtype=object)
    for i, v in enumerate(diag):
        num[i, i] = int(v)
    m = RationalMatrix(num, 1).permuted(rng.permutation(n))
    assert m.is_idempotent()
    assert m.rank_exact() == m.trace()


def test_sparse_roundtrip_and_trace():
    s = SparseRational([0, 1, 1], [1, 0, 1], [1, 2, 3], 4, 2)
    d = s.to_dense()
    assert d.entry(0, 1) == Fraction(1, 4)
    assert d.entry(1, 1) == Fraction(3, 4)
    assert s.trace() == Fraction(3, 4)
    assert np.allclose(s.to_float_dense(), d.to_float())


def test_sparse_matmul_dense_matches_dense():
    s = SparseRational([0, 1, 2], [2, 0, 1], [1, 2, 3], 2, 3)
    p = rm([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert s.matmul_dense(p) == (s.to_dense() @ p)


def test_sparse_trace_mul():
    s = SparseRational([0, 1], [1, 0], [1, 1], 2, 2)
    e = rm([[0, 3], [5, 0]])
    assert s.trace_mul_dense(e) == (s.to_dense() @ e).trace()
    t = SparseRational([0, 1], [1, 0], [3, 5], 1, 2)
    assert s.trace_mul_sparse(t) == (s.to_dense() @ t.to_dense()).trace()


def test_kron_sparse_matches_dense_kron():
    a = SparseRational([0, 1], [1, 0], [1, 2], 3, 2)
    b = SparseRational([0, 0], [0, 1], [1, 1], 2, 2)
    k = kron_sparse(a, b).to_dense()
    an, bn = a.to_dense(), b.to_dense()
    expected = RationalMatrix(np.kron(an.num, bn.num), an.den * bn.den)
    assert k == expected


def test_sparse_permuted():
    s = SparseRational([0], [1], [7], 1, 3)
    action = np.array([1, 2, 0])
    sp = s.permuted(action).to_dense()
    assert sp.entry(1, 2) == 7


def test_add_into_accumulator():
    s = SparseRational([0, 1], [0, 1], [1, 1], 2, 2)
    acc = np.zeros((2, 2), dtype=object)
    s.add_into(acc, acc_den=8, weight=Fraction(1, 2))
    assert acc[0, 0] == 2 and acc[1, 1] == 2
    with pytest.raises(ValueError):
        s.add_into(acc, acc_den=3, weight=Fraction(1, 2))
