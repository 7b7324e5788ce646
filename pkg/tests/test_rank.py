import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scrollcy.algebra.rank import dense_left_kernel, dense_rank, rank_csc

P = 32003


def low_rank_dense(rng, m, n, r, p=P):
    A = rng.integers(0, p, (m, r)) @ rng.integers(0, p, (r, n))
    return (A % p).astype(np.int64)


def to_csc(A):
    indptr, idx, dat = [0], [], []
    for j in range(A.shape[1]):
        nz = np.nonzero(A[:, j])[0]
        idx.extend(nz.tolist())
        dat.extend(A[nz, j].tolist())
        indptr.append(len(idx))
    return np.array(indptr, np.int64), np.array(idx, np.int64), np.array(dat, np.int64)


def sparse_low_rank(rng, m, n, r, density=0.05, p=P):
    L = (rng.random((m, r)) < density) * rng.integers(1, p, (m, r))
    R = (rng.random((r, n)) < density * 4) * rng.integers(1, p, (r, n))
    return (L @ R % p).astype(np.int64)


def test_dense_rank_known():
    rng = np.random.default_rng(0)
    assert dense_rank(low_rank_dense(rng, 40, 30, 17), P) == 17
    assert dense_rank(np.zeros((5, 5), np.int64), P) == 0


def test_left_kernel_annihilates():
    rng = np.random.default_rng(1)
    A = low_rank_dense(rng, 30, 20, 11)
    r, K = dense_left_kernel(A, P)
    assert r == 11 and K.shape[0] == 30 - 11
    assert not np.any((K.astype(object) @ A.astype(object)) % P)


def test_rank_csc_matches_dense():
    rng = np.random.default_rng(2)
    A = sparse_low_rank(rng, 300, 400, 150)
    res = rank_csc(*to_csc(A), A.shape[0], P, seed=3)
    assert res.rank == dense_rank(A, P)
    assert res.certified


def test_column_shuffle_invariance():
    """Rank must not depend on column order (100 shuffles)."""
    rng = np.random.default_rng(4)
    A = sparse_low_rank(rng, 120, 160, 70)
    ref = dense_rank(A, P)
    for k in range(100):
        B = A[:, rng.permutation(A.shape[1])]
        assert rank_csc(*to_csc(B), B.shape[0], P, seed=k).rank == ref


@given(st.integers(1, 25), st.integers(1, 25), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_rank_bounds(m, n, seed):
    rng = np.random.default_rng(seed)
    A = (rng.random((m, n)) < 0.3) * rng.integers(1, 101, (m, n))
    r = rank_csc(*to_csc(A.astype(np.int64)), m, 101, seed=seed).rank
    assert r == dense_rank(A.astype(np.int64), 101)
    assert r <= min(m, n)


def test_empty_matrix():
    res = rank_csc(np.zeros(4, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64), 6, P)
    assert res.rank == 0 and res.corank == 6
