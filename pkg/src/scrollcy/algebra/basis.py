"""Monomial bases of graded pieces S_d for the scroll and Cayley gradings."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fields import PrimeField
from .poly import SparsePoly


def compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, in lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class GradedPieceBasis:
    degree: tuple
    monomials: list
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.monomials = sorted(self.monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        if len(self.index) != len(self.monomials):
            raise ValueError("duplicate monomials in basis")

    def __len__(self) -> int:
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m) -> bool:
        return tuple(m) in self.index

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def as_array(self) -> np.ndarray:
        if not self.monomials:
            return np.zeros((0, 0), dtype=np.int64)
        return np.array(self.monomials, dtype=np.int64)


def _scroll_piece(a: tuple, d1: int, d2: int, extra: tuple = ()) -> list:
    out = []
    if d2 < 0:
        return out
    for q in compositions(d2, 5):
        D = d1 + sum(x * y for x, y in zip(q, a))
        for e6 in range(D + 1):
            out.append(q + (e6, D - e6) + extra)
    return out


def enumerate_basis(W, d) -> GradedPieceBasis:
    """Monomials of multidegree ``d`` for a scroll or Cayley weight matrix."""
    d = tuple(int(x) for x in d)
    if len(d) != W.nrows:
        raise ValueError(f"degree {d} does not match a {W.nrows}-row grading")
    if W.kind == "scroll":
        return GradedPieceBasis(d, _scroll_piece(W.a, d[0], d[1]))
    if W.kind == "cayley":
        data = W.data
        d1, d2, d3 = d
        mons = []
        if d3 >= 0:
            for u in range(d3 + 1):
                v = d3 - u
                base = d1 + data.p * u + (2 - data.p - data.sum_a) * v
                mons.extend(_scroll_piece(data.a, base, d2 + 2 * u + 3 * v, (u, v)))
        return GradedPieceBasis(d, mons)
    raise NotImplementedError("structured enumeration needs a scroll or Cayley grading")


def default_bounds(W, d) -> list[int]:
    """Per-variable exponent bounds valid for every monomial of degree d."""
    d = tuple(d)
    a5 = max(W.a) if W.a else 0
    if W.kind == "scroll":
        fib = max(d[1], 0)
        base = max(d[0] + fib * a5, 0)
        return [fib] * 5 + [base, base]
    if W.kind == "cayley":
        data = W.data
        n = max(d[2], 0)
        fib = max(d[1] + 3 * n, 0)
        base = max(d[0] + fib * a5 + n * max(abs(data.p), abs(2 - data.p - data.sum_a)), 0)
        return [fib] * 5 + [base, base, n, n]
    raise NotImplementedError("no default bounds for a generic grading")


def _unimodular_solver(W):
    """Pick variables whose columns form a unimodular block and return its inverse."""
    r, n = W.nrows, W.nvars
    for solved in itertools.combinations(range(n - 1, -1, -1), r):
        M = [[Fraction(W.columns[j][k]) for j in solved] for k in range(r)]
        inv = _inverse(M)
        if inv is not None and all(x.denominator == 1 for row in inv for x in row):
            return list(solved), np.array([[int(x) for x in row] for row in inv], dtype=np.int64)
    raise ValueError("no unimodular block of columns")


def _inverse(M):
    n = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def brute_force_basis(W, d, bounds=None, chunk: int = 1 << 20) -> list:
    """Independent oracle: scan a bounded box of exponent vectors.

    The free variables range over their whole box; the remaining ``nrows``
    variables are solved for from the degree equations and kept when they
    are non-negative integers within bounds.
    """
    d = np.array(d, dtype=np.int64)
    bounds = list(bounds) if bounds is not None else default_bounds(W, tuple(d))
    solved, inv = _unimodular_solver(W)
    free = [j for j in range(W.nvars) if j not in solved]
    cols = np.array(W.columns, dtype=np.int64).T  # nrows x nvars
    ranges = [np.arange(bounds[j] + 1, dtype=np.int64) for j in free]
    grids = np.meshgrid(*ranges, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    out = []
    for start in range(0, flat.shape[0], chunk):
        block = flat[start:start + chunk]
        rest = d[None, :] - block @ cols[:, free].T
        sol = rest @ inv.T
        ok = np.all(sol >= 0, axis=1) & np.all(sol <= np.array([bounds[j] for j in solved]), axis=1)
        full = np.zeros((int(ok.sum()), W.nvars), dtype=np.int64)
        full[:, free] = block[ok]
        full[:, solved] = sol[ok]
        out.extend(tuple(int(x) for x in row) for row in full)
    return sorted(out)


def random_section(W, d, prime: int, seed: int, field=None) -> SparsePoly:
    """A general section: every monomial of degree d with a random nonzero coefficient."""
    basis = enumerate_basis(W, d)
    if not basis.monomials:
        raise ValueError(f"graded piece {tuple(d)} is empty")
    field = field or PrimeField(prime)
    rng = random.Random(f"{prime}:{seed}:{tuple(d)}:{W.columns}")
    terms = {m: rng.randrange(1, prime) for m in basis.monomials}
    return SparsePoly(field, W.nvars, terms, W)
