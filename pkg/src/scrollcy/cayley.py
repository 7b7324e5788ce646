"""Cayley trick: the hypersurface F = y1 f1 + y2 f2 in G_B and its Jacobian ring.

Two ideals are available for the graded quotient R = S / I:

``"jacobian"``  I = J(F), generated by the nine partials dF/dz.  Its pieces
                (0,0,0), (0,0,1), (0,0,3) carry h30, h21, h03 (and (0,0,2)
                the conjugate piece of h21).  These are the pieces used for
                Hodge numbers.
``"euler"``     I = J1(F), generated by the nine z * dF/dz, all of degree
                (0,0,1).  Kept because it is the ideal named in the original
                recipe; its quotient is much larger than R(F) (no colon by
                the product of the variables is taken).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algebra.basis import enumerate_basis, random_section
from .algebra.fields import PrimeField
from .algebra.poly import SparsePoly
from .algebra.rank import RankResult, rank_csc
from .chern import cy_chern_classes
from .scroll import Multidegree, ScrollData, WeightMatrix, base_loci

ARBITRATION_PRIMES = (32003, 32009, 32027)
H11_NOTE = "h11 = 2 assumed (Lefschetz-type restriction from the scroll); not computed"


class NotSmoothFamily(ValueError):
    pass


class RankDisagreement(RuntimeError):
    pass


def _lift(f: SparsePoly, yexp: tuple, G: WeightMatrix) -> SparsePoly:
    terms = {e + yexp: c for e, c in f.terms.items()}
    return SparsePoly(f.field, 9, terms, G)


@dataclass
class CayleySetup:
    data: ScrollData
    B: WeightMatrix
    F: SparsePoly
    f1: SparsePoly
    f2: SparsePoly
    euler_generators: list
    jacobian_generators: list
    prime: int
    seed: int

    def generators(self, ideal: str) -> list:
        if ideal == "euler":
            return self.euler_generators
        if ideal == "jacobian":
            return self.jacobian_generators
        raise ValueError(f"unknown ideal {ideal!r}")


def build_cayley(data: ScrollData, prime: int = ARBITRATION_PRIMES[0], seed: int = 1,
                 allow_singular: bool = False) -> CayleySetup:
    """Random F = y1 f1 + y2 f2 for a base-point-free family, with audits."""
    bq, bc = base_loci(data)
    if not (bq.empty and bc.empty) and not allow_singular:
        raise NotSmoothFamily(f"{data.label()}: base loci not empty, general X is not known to be smooth")
    A = WeightMatrix.scroll(data.a)
    G = WeightMatrix.cayley(data)
    field_ = PrimeField(prime)
    f1 = random_section(A, data.deg_Q, prime, seed, field_)
    f2 = random_section(A, data.deg_C, prime, seed + 7919, field_)
    F = _lift(f1, (1, 0), G) + _lift(f2, (0, 1), G)
    if F.degree != (0, 0, 1):
        raise AssertionError(f"Cayley polynomial has degree {F.degree}")
    euler = [F.euler_derivative(i) for i in range(9)]
    jac = [F.partial_derivative(i) for i in range(9)]
    for g in euler:
        if g.terms and g.degree != (0, 0, 1):
            raise AssertionError("Euler generator off degree (0,0,1)")
    setup = CayleySetup(data, G, F, f1, f2, euler, jac, prime, seed)
    for k, ok in enumerate(euler_identities(setup)):
        if not ok:
            raise AssertionError(f"Euler identity fails for grading row {k}")
    return setup


def euler_identities(setup: CayleySetup) -> list[bool]:
    """sum_i B[k][i] z_i dF/dz_i == deg(F)[k] F for each grading row k."""
    out = []
    for k in range(3):
        acc = setup.F.scale(0)
        for i, g in enumerate(setup.euler_generators):
            w = setup.B.columns[i][k]
            if w and g.terms:
                acc = acc + g.scale(w)
        out.append(acc == setup.F.scale(setup.F.degree[k]))
    return out


# --------------------------------------------------------- matrix assembly

class _KeyedBasis:
    """A graded piece with monomials encoded as mixed-radix integer keys."""

    def __init__(self, G: WeightMatrix, degree, radix: int):
        basis = enumerate_basis(G, degree)
        self.basis = basis
        self.radix = radix
        self.weights = radix ** np.arange(G.nvars - 1, -1, -1, dtype=np.int64)
        self.exps = basis.as_array().reshape(len(basis), G.nvars)
        self.keys = self.exps @ self.weights if len(basis) else np.zeros(0, np.int64)
        if np.any(np.diff(self.keys) <= 0):
            raise AssertionError("basis keys not strictly increasing")


def _radix_for(G: WeightMatrix, n: int) -> int:
    from .algebra.basis import default_bounds
    return max(default_bounds(G, (0, 0, n))) + 2


def _row_orders(exps: np.ndarray) -> list[np.ndarray]:
    nr = exps.shape[0]
    u = exps[:, 7]
    tot = exps[:, :7].sum(axis=1)
    # lexsort: last key is primary
    grev = np.lexsort(tuple(exps[:, j] for j in range(7)) + (-tot, -u))
    revlex = np.lexsort(tuple(exps[:, j] for j in range(9)))
    return [np.arange(nr, dtype=np.int64), grev.astype(np.int64), revlex.astype(np.int64)]


@dataclass
class PieceResult:
    n: int
    ideal: str
    dim_S: int
    rank: int
    columns: int
    certified: bool
    seconds: float
    prime: int
    seed: int

    @property
    def dim(self) -> int:
        return self.dim_S - self.rank


def assemble(setup: CayleySetup, n: int, ideal: str = "euler"):
    """CSC coefficient matrix of I_(0,0,n) = sum_g S_(deg target - deg g) * g."""
    G = setup.B
    target = Multidegree((0, 0, n))
    radix = _radix_for(G, n)
    rows = _KeyedBasis(G, target, radix)
    cols_ptr = [np.zeros(1, np.int64)]
    idx_parts, dat_parts = [], []
    total = 0
    ncols = 0
    p = setup.prime
    for g in setup.generators(ideal):
        if not g.terms:
            continue
        mdeg = target - g.degree
        if mdeg[2] < 0:
            continue
        mult = _KeyedBasis(G, mdeg, radix)
        if not len(mult.basis):
            continue
        texp = np.array(list(g.terms.keys()), dtype=np.int64)
        tcoef = np.array([c % p for c in g.terms.values()], dtype=np.int64)
        tkeys = texp @ rows.weights
        prod = mult.keys[:, None] + tkeys[None, :]
        pos = np.searchsorted(rows.keys, prod)
        if np.any(pos >= rows.keys.size) or np.any(rows.keys[np.minimum(pos, rows.keys.size - 1)] != prod):
            raise AssertionError("product monomial outside the target piece")
        m, t = prod.shape
        idx_parts.append(pos.ravel())
        dat_parts.append(np.broadcast_to(tcoef, (m, t)).ravel())
        cols_ptr.append(total + t * np.arange(1, m + 1, dtype=np.int64))
        total += m * t
        ncols += m
    indptr = np.concatenate(cols_ptr)
    indices = np.concatenate(idx_parts) if idx_parts else np.zeros(0, np.int64)
    data = np.concatenate(dat_parts) if dat_parts else np.zeros(0, np.int64)
    return rows, indptr, indices, data


def graded_jacobian_piece(setup: CayleySetup, n: int, ideal: str = "euler", seed: int = 0) -> PieceResult:
    if n < 0:
        raise ValueError("n must be non-negative")
    t0 = time.perf_counter()
    rows, indptr, indices, data = assemble(setup, n, ideal)
    nrows = len(rows.basis)
    res: RankResult = rank_csc(indptr, indices, data, nrows, setup.prime, seed=seed,
                               row_orders=_row_orders(rows.exps) if nrows else None)
    return PieceResult(n, ideal, nrows, res.rank, indptr.size - 1, res.certified,
                       time.perf_counter() - t0, setup.prime, setup.seed)


def graded_jacobian_dim(setup: CayleySetup, n: int, ideal: str = "euler") -> int:
    """dim S_(0,0,n) / I_(0,0,n) for the chosen ideal."""
    return graded_jacobian_piece(setup, n, ideal).dim


# ------------------------------------------------------------------ Hodge

HODGE_PIECES = {"h30": 0, "h21": 1, "h12": 2, "h03": 3}


@dataclass
class HodgeResult:
    data: ScrollData
    h30: int
    h21: int | None = None
    h03: int | None = None
    h12: int | None = None
    h11: int = 2
    h11_note: str = H11_NOTE
    chi: int | None = None
    chi_chern: int | None = None
    chi_consistent: bool | None = None
    primes: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    pieces: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "p": self.data.p, "a": list(self.data.a),
            "h30": self.h30, "h21": self.h21, "h12": self.h12, "h03": self.h03,
            "h11": self.h11, "h11_note": self.h11_note,
            "chi": self.chi, "chi_chern": self.chi_chern, "chi_consistent": self.chi_consistent,
            "primes": list(self.primes), "seeds": list(self.seeds),
            "pieces": [{k: v for k, v in vars(x).items() if k != "seconds"} | {"dim": x.dim}
                       for x in self.pieces],
            "extra": self.extra,
        }


def _arbitrated(data: ScrollData, n: int, ideal: str, primes, seeds) -> tuple[int, list]:
    """Dimension of one piece, recomputed over primes x seeds; disagreement is arbitrated."""
    results = []
    values = {}
    for prime in primes[:2]:
        for seed in seeds:
            r = graded_jacobian_piece(build_cayley(data, prime, seed, allow_singular=True), n, ideal)
            results.append(r)
            values.setdefault(r.dim, []).append((prime, seed))
    if len(values) > 1 and len(primes) > 2:
        for seed in seeds:
            r = graded_jacobian_piece(build_cayley(data, primes[2], seed, allow_singular=True), n, ideal)
            results.append(r)
            values.setdefault(r.dim, []).append((primes[2], seed))
    if len(values) > 1:
        # generic rank is the maximum, so the generic quotient is the minimum
        counts = sorted(values.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        if len(counts) > 1 and len(counts[0][1]) == len(counts[1][1]):
            raise RankDisagreement(f"piece (0,0,{n}) of {data.label()}: {values}")
        return counts[0][0], results
    return next(iter(values)), results


def hodge(data: ScrollData, primes=ARBITRATION_PRIMES, seeds=(1, 2), include_h12: bool = True,
          literal_euler: tuple = (), pieces=tuple(HODGE_PIECES)) -> HodgeResult:
    """Hodge numbers of a smooth family from R(F) = S/J(F).

    ``pieces`` selects which of h30, h21, h12, h03 to compute; the chi
    cross-check needs h21.  ``literal_euler`` lists extra pieces (0,0,n)
    of S/J1(F) to compute and report unlabeled.
    """
    bq, bc = base_loci(data)
    if not (bq.empty and bc.empty):
        raise NotSmoothFamily(f"{data.label()}: smoothness hypothesis fails (base loci non-empty)")
    t0 = time.perf_counter()
    runs = []
    vals = {}
    for name, n in HODGE_PIECES.items():
        if name not in pieces or (name == "h12" and not include_h12):
            continue
        v, rs = _arbitrated(data, n, "jacobian", primes, seeds)
        vals[name] = v
        runs.extend(rs)
    extra = {}
    for n in literal_euler:
        v, rs = _arbitrated(data, n, "euler", primes, seeds)
        extra[f"euler_(0,0,{n})"] = v
        runs.extend(rs)
    chern = cy_chern_classes(data)
    chi = 2 * (2 - vals["h21"]) if "h21" in vals else None
    return HodgeResult(
        data, vals.get("h30"), vals.get("h21"), vals.get("h03"), vals.get("h12"),
        chi=chi, chi_chern=chern.chi, chi_consistent=None if chi is None else chern.chi == chi,
        primes=list(primes[:2]), seeds=list(seeds), pieces=runs, extra=extra,
        seconds=time.perf_counter() - t0,
    )


def hodge_h30(data: ScrollData, primes=ARBITRATION_PRIMES, seeds=(1, 2)) -> HodgeResult:
    """Light mode: only the holomorphic 3-form piece."""
    return hodge(data, primes, seeds, pieces=("h30",))
