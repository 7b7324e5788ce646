"""Singularity oracle for random instances X = V(f1, f2) in F(a).

Ground truth is the full rank condition on the 2x7 Jacobian: a point of X
is singular iff every 2x2 minor vanishes there.  The torus acts freely on
the semistable cone, so the affine charts below compute the singular
scheme of the quotient directly.

Chart (i, b) sets x_i = x_b = 1, kills the fibre coordinates before x_i and
kills x6 when b = 7.  Every point lies in exactly one chart (first nonzero
fibre coordinate, first nonzero base coordinate), so counts simply add.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import univariate as uv
from .algebra.basis import random_section
from .algebra.fields import PrimeField, is_prime
from .algebra.groebner import (GroebnerAbort, GroebnerBasis, dimension_and_length, groebner,
                               minimal_polynomial, multiplication_matrix, standard_monomials)
from .algebra.poly import SparsePoly
from .classify import Verdict, classify_candidate
from .scroll import ScrollData, WeightMatrix, base_loci

COLUMNS = (5, 6, 0, 1, 2, 3, 4)
VAR_NAMES = ("x1", "x2", "x3", "x4", "x5", "x6", "x7")
CHARTS = tuple((i, b) for i in range(1, 6) for b in (6, 7))
DEFAULT_PRIME = 101
DEFAULT_SEEDS = (1, 2, 3)
MAX_POINT_TUPLES = 200000


@dataclass(frozen=True)
class InstancePair:
    data: ScrollData
    f1: SparsePoly
    f2: SparsePoly
    prime: int
    seed: int


def make_instance(data: ScrollData, prime: int = DEFAULT_PRIME, seed: int = 1) -> InstancePair:
    """Random sections with nonzero coefficients on every realizable monomial."""
    if not is_prime(prime) or prime == 2:
        raise ValueError(f"need an odd prime, got {prime}")
    A = WeightMatrix.scroll(data.a)
    F = PrimeField(prime)
    f1 = random_section(A, data.deg_Q, prime, seed, F)
    f2 = random_section(A, data.deg_C, prime, seed + 7919, F)
    return InstancePair(data, f1, f2, prime, seed)


def jacobian_matrix(inst: InstancePair) -> list:
    """Rows f1, f2; columns x6, x7, x1, ..., x5."""
    return [[f.partial_derivative(v) for v in COLUMNS] for f in (inst.f1, inst.f2)]


def _minor(J, i: int, j: int) -> SparsePoly:
    return J[0][i] * J[1][j] - J[0][j] * J[1][i]


def full_minor_ideal(inst: InstancePair) -> list:
    """The 21 maximal minors followed by f1 and f2."""
    J = jacobian_matrix(inst)
    return [_minor(J, i, j) for i, j in itertools.combinations(range(7), 2)] + [inst.f1, inst.f2]


def _case_kind(case) -> int:
    if case in (Verdict.SINGULAR_2LOCUS, 2, "2", "2Locus"):
        return 2
    if case in (Verdict.SINGULAR_3LOCUS, 3, "3", "3Locus"):
        return 3
    raise ValueError(f"unknown locus case {case!r}")


def transverse_delta_locus(inst: InstancePair, case) -> list:
    """f2 on the stratum plus the minors of the transverse derivative block.

    Case 3: stratum V(x4, x5), block m_ij = df_i/dx_{j+3}, one determinant.
    Case 2: stratum V(x3, x4, x5), block n_ij = df_i/dx_{j+2}, three minors.
    """
    kind = _case_kind(case)
    verdict = classify_candidate(inst.data).verdict
    expected = Verdict.SINGULAR_2LOCUS if kind == 2 else Verdict.SINGULAR_3LOCUS
    if verdict != expected:
        raise ValueError(f"{inst.data.label()}: verdict {verdict.value}, not {expected.value}")
    stratum = tuple(range(kind, 5))
    block = [[f.partial_derivative(v).restrict_zero(stratum) for v in stratum] for f in (inst.f1, inst.f2)]
    minors = [_minor(block, i, j) for i, j in itertools.combinations(range(len(stratum)), 2)]
    return [inst.f2.restrict_zero(stratum)] + minors


def euler_residuals(f: SparsePoly) -> list:
    """sum_i W[k][i] x_i df/dx_i - deg_k(f) f for each grading row k."""
    W = f.weights
    out = []
    for k in range(len(f.degree)):
        acc = f.scale(-f.degree[k]) if f.degree[k] else None
        for i in range(f.nvars):
            w = W.columns[i][k]
            if w:
                t = f.euler_derivative(i).scale(w)
                acc = t if acc is None else acc + t
        out.append(acc if acc is not None else f.scale(0))
    return out


def stratum_euler_check(inst: InstancePair, stratum=(3, 4)) -> bool:
    """Restriction to a coordinate stratum must stay homogeneous of the same degree."""
    g = inst.f2.restrict_zero(stratum)
    if g.is_zero():
        return True
    return all(r.is_zero() for r in euler_residuals(g))


@dataclass
class ChartIdeal:
    chart: tuple
    values: dict
    keep: list
    generators: list

    @property
    def nvars(self) -> int:
        return len(self.keep)

    def lift(self, point) -> tuple:
        """Homogeneous representative (x1, ..., x7) of an affine chart point."""
        full = [0] * 7
        for i, v in self.values.items():
            full[i] = v
        for i, v in zip(self.keep, point):
            full[i] = int(v)
        return tuple(full)


def chart_values(chart) -> dict:
    i, b = chart
    vals = {i - 1: 1, b - 1: 1}
    for j in range(1, i):
        vals[j - 1] = 0
    if b == 7:
        vals[5] = 0
    return vals


def chart_ideals(gens: list) -> list:
    out = []
    for chart in CHARTS:
        vals = chart_values(chart)
        keep = [k for k in range(7) if k not in vals]
        cg = [g.substitute(vals).drop_variables(keep) for g in gens]
        out.append(ChartIdeal(chart, vals, keep, [g for g in cg if g.terms]))
    return out


def affine_point_count(polys: list, nvars: int, prime: int, max_vars: int = 3) -> int:
    """F_p-points of V(polys) in affine n-space, by enumeration of the occurring variables."""
    if any(g.terms and all(not any(e) for e in g.terms) for g in polys):
        return 0
    used = sorted({i for g in polys for e in g.terms for i, k in enumerate(e) if k})
    if len(used) > max_vars:
        raise ValueError(f"{len(used)} variables occur; enumeration capped at {max_vars}")
    free = nvars - len(used)
    hits = 0
    for vals in itertools.product(range(prime), repeat=len(used)):
        pt = [0] * nvars
        for i, v in zip(used, vals):
            pt[i] = v
        if all(g.evaluate(pt) % prime == 0 for g in polys):
            hits += 1
    return hits * prime ** free


def partition_point_count(gens: list, prime: int) -> int:
    """Points of V(gens) in F(a) over F_p, summed over the partition charts."""
    return sum(affine_point_count(c.generators, c.nvars, prime) for c in chart_ideals(gens))


def _eval_dict(f: dict, pt, p: int) -> int:
    total = 0
    for e, c in f.items():
        v = c
        for x, k in zip(pt, e):
            if k:
                v = v * pow(x, k, p) % p
        total += v
    return total % p


def _rational_points(gb: GroebnerBasis, basis: list, minpolys: list) -> list:
    p = gb.prime
    roots = [uv.roots(mp, p) for mp in minpolys]
    if any(not r for r in roots):
        return []
    if np.prod([len(r) for r in roots], dtype=float) > MAX_POINT_TUPLES:
        raise ValueError("too many candidate rational points")
    return [pt for pt in itertools.product(*roots) if all(_eval_dict(g, pt, p) == 0 for g in gb.polys)]


def _is_nilpotent(mp: list) -> bool:
    return len(mp) >= 2 and all(c == 0 for c in mp[:-1])


@dataclass
class ChartResult:
    chart: tuple
    nvars: int
    dim: int
    length: int | None = None
    distinct: int | None = None
    eliminants: dict | None = None
    basis_size: int = 0
    steps: int = 0
    points: list = field(default_factory=list)
    outside_locus: bool | None = None
    seconds: float = 0.0

    @property
    def empty(self) -> bool:
        return self.dim < 0

    def as_dict(self) -> dict:
        return {"chart": list(self.chart), "nvars": self.nvars, "dim": self.dim, "length": self.length,
                "distinct": self.distinct, "eliminants": self.eliminants, "basis_size": self.basis_size,
                "steps": self.steps, "rational_points": [list(q) for q in self.points],
                "outside_locus": self.outside_locus}


def _outside_locus(ci: ChartIdeal, gb: GroebnerBasis, k: int, minpolys) -> bool:
    """Does the chart's zero set leave the sub-scroll V(x_k, ..., x5)?"""
    if gb.is_unit:
        return False
    if ci.chart[0] >= k:
        return True
    watch = [ci.keep.index(j) for j in range(k - 1, 5) if j in ci.keep]
    if minpolys is not None:
        return not all(_is_nilpotent(minpolys[v]) for v in watch)
    # Rabinowitsch: x_j is nowhere zero on V(I) iff I + (t x_j - 1) is the unit ideal
    n = ci.nvars
    base = [dict(g) for g in gb.polys]
    for v in watch:
        t_exp = tuple(int(i == v) for i in range(n)) + (1,)
        extra = {t_exp: 1, (0,) * (n + 1): gb.prime - 1}
        gens = [{e + (0,): c for e, c in g.items()} for g in base] + [extra]
        if not groebner(gens, n + 1, gb.prime, max_vars=n + 1).is_unit:
            return True
    return False


def analyze_chart(ci: ChartIdeal, prime: int, locus_k: int | None = None) -> ChartResult:
    t0 = time.perf_counter()
    gb = groebner(ci.generators, ci.nvars, prime)
    info = dimension_and_length(gb)
    res = ChartResult(ci.chart, ci.nvars, info.dim, info.length, info.distinct, info.eliminants,
                      len(gb), gb.steps)
    minpolys = None
    if info.dim == 0:
        basis = standard_monomials(gb)
        minpolys = []
        for v in range(ci.nvars):
            e = tuple(int(k == v) for k in range(ci.nvars))
            minpolys.append(minimal_polynomial(multiplication_matrix(gb, {e: 1}, basis), prime))
        res.points = [ci.lift(q) for q in _rational_points(gb, basis, minpolys)]
    if locus_k is not None:
        res.outside_locus = _outside_locus(ci, gb, locus_k, minpolys)
    res.seconds = time.perf_counter() - t0
    return res


@dataclass
class SchemeSummary:
    """Aggregate over the 10 charts."""

    dim: int
    is_empty: bool
    is_isolated: bool
    total_length: int | None
    distinct_point_count: int | None
    charts: list

    @classmethod
    def from_charts(cls, charts: list) -> "SchemeSummary":
        dim = max(c.dim for c in charts)
        iso = dim <= 0
        length = sum(c.length for c in charts) if iso else None
        distinct = sum(c.distinct for c in charts) if iso else None
        return cls(dim, dim < 0, iso, length, distinct, charts)

    @property
    def signature(self) -> tuple:
        return (self.dim, self.total_length, self.distinct_point_count)

    @property
    def points(self) -> list:
        return [q for c in self.charts for q in c.points]

    def as_dict(self) -> dict:
        return {"dim": self.dim, "is_empty": self.is_empty, "is_isolated": self.is_isolated,
                "total_length": self.total_length, "distinct_point_count": self.distinct_point_count,
                "charts": [c.as_dict() for c in self.charts]}


def singular_scheme(inst: InstancePair, locus_k: int | None = None) -> SchemeSummary:
    charts = [analyze_chart(ci, inst.prime, locus_k) for ci in chart_ideals(full_minor_ideal(inst))]
    return SchemeSummary.from_charts(charts)


def delta_scheme(inst: InstancePair, case) -> SchemeSummary:
    """Zero scheme of the Δ system on its stratum, for comparison only."""
    kind = _case_kind(case)
    F = inst.f1.field
    stratum = [SparsePoly.variable(F, 7, v, inst.f1.weights) for v in range(kind, 5)]
    gens = transverse_delta_locus(inst, kind) + stratum
    return SchemeSummary.from_charts([analyze_chart(ci, inst.prime) for ci in chart_ideals(gens)])


def _combined_locus_k(data: ScrollData) -> int:
    # B_Q and B_C are nested coordinate sub-scrolls; their union is the larger one
    bq, bc = base_loci(data)
    return max(bq.k, bc.k)


@dataclass
class InstanceRun:
    prime: int
    seed: int
    scheme: SchemeSummary | None
    contained: bool | None
    delta: SchemeSummary | None = None
    delta_consistent: bool | None = None
    error: str | None = None
    seconds: float = 0.0

    @property
    def signature(self):
        return None if self.scheme is None else self.scheme.signature

    def as_dict(self) -> dict:
        return {"prime": self.prime, "seed": self.seed,
                "scheme": None if self.scheme is None else self.scheme.as_dict(),
                "contained_in_base_locus": self.contained,
                "delta_locus": None if self.delta is None else self.delta.as_dict(),
                "delta_consistent": self.delta_consistent, "error": self.error}


def run_instance(data: ScrollData, prime: int, seed: int, with_delta: bool = True) -> InstanceRun:
    t0 = time.perf_counter()
    inst = make_instance(data, prime, seed)
    k = _combined_locus_k(data)
    try:
        scheme = singular_scheme(inst, k)
    except GroebnerAbort as exc:
        return InstanceRun(prime, seed, None, None, error=f"groebner abort: {exc}",
                           seconds=time.perf_counter() - t0)
    contained = not any(c.outside_locus for c in scheme.charts)
    run = InstanceRun(prime, seed, scheme, contained)
    verdict = classify_candidate(data).verdict
    if with_delta and verdict in (Verdict.SINGULAR_2LOCUS, Verdict.SINGULAR_3LOCUS):
        kind = _case_kind(verdict)
        try:
            run.delta = delta_scheme(inst, kind)
        except GroebnerAbort as exc:
            run.error = f"delta locus abort: {exc}"
        gens = transverse_delta_locus(inst, kind)
        on_stratum = [q for q in scheme.points if all(q[v] == 0 for v in range(kind, 5))]
        if on_stratum:
            run.delta_consistent = all(g.evaluate(q) == 0 for q in on_stratum for g in gens)
    run.seconds = time.perf_counter() - t0
    return run


@dataclass
class SingularityReport:
    data: ScrollData
    table_row: int | None
    verdict: str
    primes: tuple
    seeds: tuple
    runs: list
    stable: bool
    contained: bool
    reference_expected: int | None
    match: bool | None
    status: str
    diagnostics: list = field(default_factory=list)

    @property
    def summary(self) -> SchemeSummary | None:
        return self.runs[0].scheme if self.runs else None

    @property
    def signature(self):
        return self.runs[0].signature if self.runs else None

    def as_dict(self) -> dict:
        s = self.summary
        agg = None if s is None else {k: v for k, v in s.as_dict().items() if k != "charts"}
        return {"kind": "singularity", "family": self.data.as_dict(), "table_row": self.table_row,
                "verdict": self.verdict, "primes": list(self.primes), "seeds": list(self.seeds),
                "aggregate": agg, "stable": self.stable, "contained_in_base_locus": self.contained,
                "reference_expected": self.reference_expected, "match": self.match, "status": self.status,
                "diagnostics": list(self.diagnostics), "runs": [r.as_dict() for r in self.runs]}


def singularity_report(data: ScrollData, prime=DEFAULT_PRIME, seeds=DEFAULT_SEEDS,
                       extra_seeds: int = 2, with_delta: bool = True) -> SingularityReport:
    """Singular scheme of random instances, checked for stability and containment.

    ``prime`` may be a single prime or several; every (prime, seed) pair must
    give the same (dim, length, distinct) signature.  On disagreement two more
    seeds are drawn for the record, but the report stays unstable.
    """
    primes = (prime,) if isinstance(prime, int) else tuple(prime)
    seeds = tuple(seeds)
    if len(seeds) < 1:
        raise ValueError("need at least one seed")
    rec = classify_candidate(data)
    if rec.verdict == Verdict.REJECTED:
        raise ValueError(f"{data.label()} is rejected: {rec.reason}")
    runs = [run_instance(data, q, s, with_delta) for q in primes for s in seeds]
    diags = [f"p={r.prime} seed={r.seed}: {r.error}" for r in runs if r.error]
    sigs = {r.signature for r in runs}
    stable = len(sigs) == 1 and None not in sigs
    if not stable and None not in sigs:
        top = max(seeds)
        extra = [run_instance(data, q, top + j, with_delta) for q in primes for j in range(1, extra_seeds + 1)]
        diags.append("signatures disagree: " + ", ".join(f"p={r.prime} seed={r.seed} -> {r.signature}"
                                                          for r in runs + extra))
        runs += extra
        seeds = seeds + tuple(top + j for j in range(1, extra_seeds + 1))
    contained = all(r.contained for r in runs if r.scheme is not None)
    if not contained:
        diags.append("singular points outside the base locus")
    if any(r.delta_consistent is False for r in runs):
        diags.append("a singular point on the stratum misses the delta system")

    expected = rec.predicted_sing.get("reference_count") if rec.predicted_sing else None
    if rec.table_row is not None and expected is None:
        expected = 0
    first = runs[0].scheme
    match = None
    if expected is not None and first is not None:
        match = first.is_isolated and first.distinct_point_count == expected
    if not stable or not contained or any(r.scheme is None for r in runs):
        status = "fail"
    elif match is False and expected == 0:
        status = "fail"
    elif match is False:
        status = "warn"
    else:
        status = "pass"
    return SingularityReport(data, rec.table_row, rec.verdict.value, primes, seeds, runs, stable,
                             contained, expected, match, status, diags)
