"""Exact rank of sparse matrices over GF(p).

The matrix is given column-wise (CSC).  Elimination runs in three stages:

1. Structural pivots.  Rows get a total order; every column has a leading
   row (its first nonzero).  Keeping one column per distinct leading row
   gives a triangular block that costs nothing to factor.
2. Schur part.  The remaining columns are reduced by that block onto the K
   rows not used as pivots.  When they outnumber K they are first
   compressed by a sparse random combination to about K columns.
3. Dense elimination of the K-row Schur part, blocked so the bulk of the
   work is float64 matrix products reduced mod p (exact while
   inner_dim * p^2 < 2^53).

Compression can only lose rank, so step 3 gives a lower bound.  To make it
exact, the left kernel of the compressed block is lifted to vectors w with
w.M = 0 on every column of M; each verified vector caps the rank from
above.  When the two bounds meet the result is certified.  A failed check
triggers a retry with denser mixing.  Without compression the result is
exact by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numba as nb
import numpy as np

log = logging.getLogger(__name__)

PANEL = 192
GEMM_INNER = 4096


@dataclass(frozen=True)
class RankResult:
    rank: int
    nrows: int
    ncols: int
    pivots: int
    schur_rows: int
    certified: bool
    attempts: int

    @property
    def corank(self) -> int:
        return self.nrows - self.rank


class DegreeMismatch(ValueError):
    pass


# ---------------------------------------------------------------- kernels

@nb.njit(cache=True)
def _inv(a, p):
    # Fermat inverse; a is nonzero mod p
    r = 1
    b = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@nb.njit(cache=True)
def _lead_pivots(indptr, indices, rowpos, nrows):
    """Column chosen for each leading row (-1 if none); prefer sparse columns."""
    piv = np.full(nrows, -1, np.int64)
    ncols = indptr.size - 1
    for c in range(ncols):
        s, e = indptr[c], indptr[c + 1]
        if s == e:
            continue
        best = indices[s]
        for k in range(s + 1, e):
            if rowpos[indices[k]] < rowpos[best]:
                best = indices[k]
        cur = piv[best]
        if cur < 0 or (indptr[cur + 1] - indptr[cur]) > (e - s):
            piv[best] = c
    return piv


@nb.njit(cache=True)
def _schur_columns(indptr, indices, data, nrows, p, order, piv_of_row, piv_inv,
                   comb_ptr, comb_cols, comb_coef, other_index, out):
    """Reduce each combination of columns by the pivot block.

    Row j of ``out`` receives the reduced combination j on the non-pivot rows
    (so ``out`` is the transpose of the Schur block).
    """
    v = np.zeros(nrows, np.int64)
    ncomb = comb_ptr.size - 1
    for j in range(ncomb):
        for t in range(comb_ptr[j], comb_ptr[j + 1]):
            c = comb_cols[t]
            w = comb_coef[t]
            for k in range(indptr[c], indptr[c + 1]):
                r = indices[k]
                v[r] = (v[r] + w * data[k]) % p
        for oi in range(nrows):
            r = order[oi]
            x = v[r]
            if x == 0:
                continue
            pc = piv_of_row[r]
            if pc < 0:
                out[j, other_index[r]] = x
                v[r] = 0
                continue
            f = x * piv_inv[r] % p
            for k in range(indptr[pc], indptr[pc + 1]):
                rr = indices[k]
                v[rr] = (v[rr] - f * data[k]) % p
            v[r] = 0


@nb.njit(cache=True)
def _panel(A, r0, j0, j1, ncols_active, p, pivcols):
    """Gaussian elimination on columns j0..j1 of rows r0.. (row swaps on full rows).

    Multipliers are stored in place under each pivot.  Updates inside the
    panel are left unreduced (exact in float64 for panels up to ~8000
    columns at p < 2^16.5) and each column is reduced once, when it is
    searched for a pivot.  Returns the number of pivots found; their
    columns go to pivcols.
    """
    m = A.shape[0]
    ntot = A.shape[1]
    fp = float(p)
    k = 0
    for c in range(j0, min(j1, ncols_active)):
        pr = r0 + k
        if pr >= m:
            break
        sel = -1
        for i in range(pr, m):
            x = A[i, c]
            if x != 0.0:
                x = x - np.floor(x / fp) * fp
                A[i, c] = x
                if x != 0.0 and sel < 0:
                    sel = i
        if sel < 0:
            continue
        if sel != pr:
            for j in range(ntot):
                tmp = A[pr, j]
                A[pr, j] = A[sel, j]
                A[sel, j] = tmp
        for j in range(c + 1, j1):
            y = A[pr, j]
            A[pr, j] = y - np.floor(y / fp) * fp
        inv = _inv(np.int64(A[pr, c]), p)
        for i in range(pr + 1, m):
            x = np.int64(A[i, c])
            if x == 0:
                continue
            f = x * inv % p
            A[i, c] = f
            ff = float(f)
            for j in range(c + 1, j1):
                A[i, j] -= ff * A[pr, j]
        pivcols[k] = c
        k += 1
    # leave the non-pivot rows of the panel reduced
    for i in range(r0 + k, m):
        for j in range(j0, j1):
            x = A[i, j]
            A[i, j] = x - np.floor(x / fp) * fp
    return k


@nb.njit(cache=True)
def _unit_lower_inverse(L, p):
    k = L.shape[0]
    X = np.zeros((k, k), np.int64)
    for i in range(k):
        X[i, i] = 1
        for j in range(i):
            s = 0
            for l in range(j, i):
                s = (s + np.int64(L[i, l]) * X[l, j]) % p
            X[i, j] = (-s) % p
    return X


@nb.njit(cache=True)
def _reduce(A, p):
    """In-place reduction of a float64 matrix of integers into [0, p)."""
    fp = float(p)
    ip = 1.0 / fp
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            x = A[i, j]
            x -= np.floor(x * ip) * fp
            if x < 0.0:
                x += fp
            elif x >= fp:
                x -= fp
            A[i, j] = x
    return A


def _matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    inner = A.shape[1]
    if inner <= GEMM_INNER:
        return _reduce(A @ B, p)
    out = np.zeros((A.shape[0], B.shape[1]))
    for s in range(0, inner, GEMM_INNER):
        out += A[:, s:s + GEMM_INNER] @ B[s:s + GEMM_INNER]
        _reduce(out, p)
    return out


def _block_update(A: np.ndarray, p: int, r: int, pcs: np.ndarray, c0: int, c1: int, reduce: bool):
    """Apply the pivots of rows r..r+k (columns pcs) to columns [c0, c1)."""
    m = A.shape[0]
    k = pcs.size
    L11 = np.zeros((k, k))
    for i in range(1, k):
        L11[i, :i] = A[r + i, pcs[:i]]
    X = _unit_lower_inverse(L11, p).astype(np.float64)
    A12 = A[r:r + k, c0:c1]
    _reduce(A12, p)
    A12[:] = _matmul_mod(X, A12, p)
    if r + k >= m:
        return
    L21 = np.ascontiguousarray(A[r + k:, pcs])
    rows = m - r - k
    step = max(1, min(c1 - c0, (1 << 22) // rows))
    buf = np.empty(rows * step)
    for s in range(c0, c1, step):
        e = min(c1, s + step)
        tmp = buf[:rows * (e - s)].reshape(rows, e - s)
        np.matmul(L21, A12[:, s - c0:e - c0], out=tmp)
        blk = A[r + k:, s:e]
        blk -= tmp
        if reduce:
            _reduce(blk, p)


def _eliminate_panel(A: np.ndarray, p: int, r: int, j0: int, j1: int, inner: int, buf: np.ndarray) -> np.ndarray:
    """LU of columns [j0, j1) from row r on, in sub-panels of width ``inner``.

    Row swaps act on whole rows; multipliers stay under the pivots.
    """
    pcs = []
    for s0 in range(j0, j1, inner):
        s1 = min(s0 + inner, j1)
        rr = r + len(pcs)
        if rr >= A.shape[0]:
            break
        pan = A[rr:, s0:s1]
        _reduce(pan, p)
        k = _panel(A, rr, s0, s1, s1, p, buf)
        if k == 0:
            continue
        sub = buf[:k].copy()
        if s1 < j1:
            _block_update(A, p, rr, sub, s1, j1, reduce=False)
        pcs.extend(sub.tolist())
    return np.array(pcs, dtype=np.int64)


def dense_echelon(A: np.ndarray, p: int, ncols_active: int | None = None,
                  panel: int = PANEL, inner: int = 32) -> int:
    return dense_echelon_pivots(A, p, ncols_active, panel, inner)[0]


def dense_echelon_pivots(A: np.ndarray, p: int, ncols_active: int | None = None,
                         panel: int = PANEL, inner: int = 32) -> tuple[int, np.ndarray]:
    """Row-echelon A in place over GF(p) (float64 entries in [0, p)); return the rank.

    Columns past ``ncols_active`` are carried along but never pivoted on,
    which is how a left kernel is tracked (append an identity block).
    The trailing block is reduced mod p lazily: updates are summed in
    float64 until the accumulated bound nears 2^51.
    """
    if p * p * max(panel, GEMM_INNER) >= 2 ** 48:
        raise ValueError("prime too large for exact float64 blocking")
    m, n = A.shape
    nact = n if ncols_active is None else ncols_active
    r = 0
    pivots = []
    buf = np.empty(inner, np.int64)
    bound = float(p)
    limit = 2.0 ** 51
    for j0 in range(0, nact, panel):
        if r >= m:
            break
        j1 = min(j0 + panel, nact)
        pcs = _eliminate_panel(A, p, r, j0, j1, inner, buf)
        k = pcs.size
        if k == 0:
            continue
        if j1 < n:
            reduce_now = bound + k * (p - 1) ** 2 >= limit
            _block_update(A, p, r, pcs, j1, n, reduce_now)
            bound = float(p) if reduce_now else bound + k * (p - 1) ** 2
        # clear multipliers so the block below the pivots reads as zero
        if r + k < m:
            A[r + k:, j0:j1] = 0.0
        r += k
        pivots.extend(pcs.tolist())
    if r < m:
        rest = A[r:, :]
        _reduce(rest, p)
    return r, np.array(pivots, dtype=np.int64)


def dense_rank(A: np.ndarray, p: int) -> int:
    M = np.array(A, dtype=np.float64) % p
    return dense_echelon(M, p)


@nb.njit(cache=True)
def _upper_inverse(U, p):
    k = U.shape[0]
    X = np.zeros((k, k), np.int64)
    for i in range(k - 1, -1, -1):
        d = _inv(np.int64(U[i, i]), p)
        X[i, i] = d
        for j in range(i + 1, k):
            s = 0
            for l in range(i + 1, j + 1):
                s = (s + np.int64(U[i, l]) * X[l, j]) % p
            X[i, j] = (-s) * d % p
    return X


def _upper_solve(U: np.ndarray, B: np.ndarray, p: int, block: int = PANEL) -> np.ndarray:
    """X with U X = B over GF(p), U upper triangular with nonzero diagonal."""
    return _echelon_solve(U, np.arange(U.shape[0]), B, p, block)


def _echelon_solve(E: np.ndarray, cols: np.ndarray, B: np.ndarray, p: int,
                   block: int = PANEL) -> np.ndarray:
    """Solve E[:r, cols] X = B for the upper-triangular square part picked by cols.

    Only block-sized slices of E are gathered, so a large echelon form is
    never copied whole.
    """
    r = cols.size
    X = np.zeros((r, B.shape[1]), dtype=np.float64)
    for i1 in range(r, 0, -block):
        i0 = max(0, i1 - block)
        rhs = _reduce(np.array(B[i0:i1], dtype=np.float64), p)
        if i1 < r:
            off = E[i0:i1][:, cols[i1:]]
            rhs = _reduce(rhs - _matmul_mod(off, X[i1:], p), p)
        D = np.triu(E[i0:i1][:, cols[i0:i1]])
        Dinv = _upper_inverse(D, p).astype(np.float64)
        X[i0:i1] = _matmul_mod(Dinv, rhs, p)
    return X


def echelon_null_space(E: np.ndarray, r: int, pivots: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : A x = 0}, given E = the in-place echelon form of A."""
    n = E.shape[1]
    free = np.setdiff1d(np.arange(n), pivots)
    if free.size == 0:
        return np.zeros((0, n), dtype=np.int64)
    N = np.zeros((free.size, n), dtype=np.int64)
    if r:
        rhs = E[:r][:, free]
        # entries left of a row's pivot are elimination leftovers, not data
        rhs[free[None, :] < pivots[:r, None]] = 0.0
        Z = _echelon_solve(E, pivots[:r], _reduce(-rhs, p), p)
        N[:, pivots] = Z.T.astype(np.int64)
    N[np.arange(free.size), free] = 1
    return N


def dense_left_kernel(A: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Rank of A and a basis (rows) of {u : u A = 0}."""
    T = np.ascontiguousarray(np.asarray(A, dtype=np.float64).T) % p
    return transposed_left_kernel(T, p)


def transposed_left_kernel(T: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Given T = A^T (overwritten), return rank A and a basis of the left kernel of A."""
    r, piv = dense_echelon_pivots(T, p)
    return r, echelon_null_space(T, r, piv, p)


@nb.njit(cache=True)
def _lift_and_check(indptr, indices, data, nrows, p, piv_cols_desc, piv_lead_desc, piv_inv_desc,
                    other_rows, U, nonpiv_cols):
    """Extend each row of U (given on other_rows) to w with w.M[:, pivots] = 0.

    Returns a mask of the lifted vectors that also kill every non-pivot
    column.  Sums of at most a column's worth of products stay below 2^63.
    """
    nk = U.shape[0]
    W = np.zeros((nrows, nk), np.int64)
    for i in range(other_rows.size):
        for t in range(nk):
            W[other_rows[i], t] = U[t, i]
    acc = np.zeros(nk, np.int64)
    for s in range(piv_cols_desc.size):
        c = piv_cols_desc[s]
        lead = piv_lead_desc[s]
        acc[:] = 0
        for k in range(indptr[c], indptr[c + 1]):
            r = indices[k]
            if r != lead:
                d = data[k]
                for t in range(nk):
                    acc[t] += W[r, t] * d
        inv = piv_inv_desc[s]
        for t in range(nk):
            W[lead, t] = ((-acc[t]) % p) * inv % p
    good = np.ones(nk, np.bool_)
    for s in range(nonpiv_cols.size):
        c = nonpiv_cols[s]
        acc[:] = 0
        for k in range(indptr[c], indptr[c + 1]):
            r = indices[k]
            d = data[k]
            for t in range(nk):
                acc[t] += W[r, t] * d
        for t in range(nk):
            if acc[t] % p != 0:
                good[t] = False
    return good


# ---------------------------------------------------------------- driver

def _clean_csc(indptr, indices, data, p):
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    data = np.mod(np.asarray(data, dtype=np.int64), p)
    keep = data != 0
    if keep.all():
        return indptr, indices, data
    ncols = indptr.size - 1
    col = np.repeat(np.arange(ncols), np.diff(indptr))
    new_ptr = np.zeros_like(indptr)
    new_ptr[1:] = np.cumsum(np.bincount(col[keep], minlength=ncols))
    return new_ptr, indices[keep], data[keep]


def rank_csc(indptr, indices, data, nrows: int, prime: int, seed: int = 0,
             row_orders: list | None = None, certify: bool = True,
             memory_bytes: float = 2.5e9, mix: int = 3, slack: int = 24,
             max_attempts: int = 4) -> RankResult:
    """Rank over GF(prime) of the nrows x ncols matrix given by CSC arrays.

    ``row_orders`` lists candidate row permutations (arrays of row indices,
    most significant first) for the structural pivot search; the one giving
    the most pivots is used.
    """
    p = int(prime)
    indptr, indices, data = _clean_csc(indptr, indices, data, p)
    ncols = indptr.size - 1
    if nrows == 0 or indices.size == 0:
        return RankResult(0, nrows, ncols, 0, nrows, True, 0)
    orders = row_orders or [np.arange(nrows, dtype=np.int64)]
    best = None
    for order in orders:
        order = np.asarray(order, dtype=np.int64)
        rowpos = np.empty(nrows, np.int64)
        rowpos[order] = np.arange(nrows, dtype=np.int64)
        piv = _lead_pivots(indptr, indices, rowpos, nrows)
        npiv = int((piv >= 0).sum())
        if best is None or npiv > best[0]:
            best = (npiv, order, piv)
    P, order, piv_of_row = best
    other_rows = order[piv_of_row[order] < 0]
    K = other_rows.size
    is_piv = np.zeros(ncols, bool)
    is_piv[piv_of_row[piv_of_row >= 0]] = True
    nonpiv = np.flatnonzero(~is_piv & (np.diff(indptr) > 0)).astype(np.int64)
    if K == 0 or nonpiv.size == 0:
        return RankResult(P, nrows, ncols, P, K, True, 0)

    piv_inv = np.zeros(nrows, np.int64)
    lead_rows = np.flatnonzero(piv_of_row >= 0)
    for r in lead_rows:
        c = piv_of_row[r]
        s, e = indptr[c], indptr[c + 1]
        val = data[s + int(np.flatnonzero(indices[s:e] == r)[0])]
        piv_inv[r] = pow(int(val), -1, p)
    other_index = np.full(nrows, -1, np.int64)
    other_index[other_rows] = np.arange(K, dtype=np.int64)

    rng = np.random.default_rng(seed)
    attempts = 0
    exact_bytes = 8.0 * K * nonpiv.size
    while True:
        attempts += 1
        compress = nonpiv.size > K + slack and not (attempts > max_attempts and exact_bytes <= memory_bytes)
        if compress:
            ncomb = K + slack
            d = min(mix * 2 ** (attempts - 1), ncomb)
            targets = rng.integers(0, ncomb, size=nonpiv.size * d)
            cols = np.repeat(nonpiv, d)
            coefs = rng.integers(1, p, size=cols.size, dtype=np.int64)
            srt = np.argsort(targets, kind="stable")
            comb_cols, comb_coef = cols[srt], coefs[srt]
            comb_ptr = np.zeros(ncomb + 1, np.int64)
            comb_ptr[1:] = np.cumsum(np.bincount(targets, minlength=ncomb))
        else:
            ncomb = nonpiv.size
            comb_ptr = np.arange(ncomb + 1, dtype=np.int64)
            comb_cols = nonpiv
            comb_coef = np.ones(ncomb, np.int64)
        need = 8.0 * K * ncomb
        if need > memory_bytes:
            raise MemoryError(f"dense Schur block {K} x {ncomb} exceeds the memory budget")
        S = np.zeros((ncomb, K))
        _schur_columns(indptr, indices, data, nrows, p, order, piv_of_row, piv_inv,
                       comb_ptr, comb_cols, comb_coef, other_index, S)
        if not compress:
            r = dense_echelon(S, p)
            return RankResult(P + r, nrows, ncols, P, K, True, attempts)
        if not certify:
            r = dense_echelon(S, p)
            return RankResult(P + r, nrows, ncols, P, K, False, attempts)
        r, U = transposed_left_kernel(S, p)
        del S
        if U.shape[0] == 0:
            return RankResult(P + r, nrows, ncols, P, K, True, attempts)
        desc = lead_rows[np.argsort(-np_rowpos(order, nrows)[lead_rows])]
        good = int(_lift_and_check(indptr, indices, data, nrows, p,
                                   piv_of_row[desc], desc, piv_inv[desc], other_rows, U, nonpiv).sum())
        if good == U.shape[0]:
            return RankResult(P + r, nrows, ncols, P, K, True, attempts)
        log.info("rank certificate failed (%d/%d kernel vectors), retrying", good, U.shape[0])
        if attempts > max_attempts + 1:
            raise RuntimeError("rank certificate could not be established")


def np_rowpos(order: np.ndarray, nrows: int) -> np.ndarray:
    rowpos = np.empty(nrows, np.int64)
    rowpos[order] = np.arange(nrows, dtype=np.int64)
    return rowpos


def columns_to_csc(columns, index: dict, prime: int, degree=None):
    """Coefficient vectors of polynomials in a monomial basis, as CSC arrays."""
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for f in columns:
        if degree is not None and f.terms and f.degree is not None and tuple(f.degree) != tuple(degree):
            raise DegreeMismatch(f"column of degree {f.degree} in target {tuple(degree)}")
        for e, c in f.terms.items():
            try:
                indices.append(index[e])
            except KeyError:
                raise DegreeMismatch(f"monomial {e} is not in the target basis") from None
            data.append(prime_residue(c, prime))
        indptr.append(len(indices))
    return np.array(indptr, np.int64), np.array(indices, np.int64), np.array(data, np.int64)


def prime_residue(c, prime: int) -> int:
    if isinstance(c, int):
        return c % prime
    num, den = getattr(c, "numerator", None), getattr(c, "denominator", None)
    if num is not None:
        return num % prime * pow(den, -1, prime) % prime
    return int(c) % prime


def sparse_rank(columns, target, prime: int, seed: int = 0) -> int:
    """Rank of the span of ``columns`` inside the graded piece ``target``."""
    indptr, indices, data = columns_to_csc(columns, target.index, prime, target.degree)
    return rank_csc(indptr, indices, data, len(target), prime, seed=seed).rank
