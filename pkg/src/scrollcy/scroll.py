"""Fivefold scrolls F(a1,...,a5): gradings, divisor degrees and base loci.

The Cox ring of F_A has variables x1..x5 (fibre) and x6, x7 (base P^1),
bigraded by the columns (-a_j, 1) and (1, 0).  The Cayley variety G_B adds
y1, y2 and a third grading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

FIBRE_DEGREES = (2, 3)
SCROLL_NAMES = ("x1", "x2", "x3", "x4", "x5", "x6", "x7")
CAYLEY_NAMES = SCROLL_NAMES + ("y1", "y2")


class Multidegree(tuple):
    """An integer vector with componentwise + and -."""

    def __new__(cls, values: Iterable[int]):
        return super().__new__(cls, (int(v) for v in values))

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError("multidegrees of different length")
        return Multidegree(x + y for x, y in zip(self, other))

    def __sub__(self, other):
        if len(self) != len(other):
            raise ValueError("multidegrees of different length")
        return Multidegree(x - y for x, y in zip(self, other))

    def __neg__(self):
        return Multidegree(-x for x in self)

    def scale(self, k: int) -> "Multidegree":
        return Multidegree(k * x for x in self)

    def __repr__(self) -> str:
        return "(" + ",".join(str(x) for x in self) + ")"


@dataclass(frozen=True)
class ScrollData:
    """The datum (p; a1..a5) of a quadric-cubic complete intersection in F(a)."""

    p: int
    a: tuple
    fibre_degrees: tuple = FIBRE_DEGREES

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "fibre_degrees", tuple(self.fibre_degrees))
        if len(a) != 5:
            raise ValueError(f"expected 5 twist weights, got {len(a)}")
        if a[0] != 0 or any(x > y for x, y in zip(a, a[1:])):
            raise ValueError(f"weights must satisfy 0 = a1 <= ... <= a5, got {a}")
        if self.fibre_degrees != FIBRE_DEGREES:
            raise NotImplementedError("only fibre degrees (2, 3) are implemented")

    @property
    def sum_a(self) -> int:
        return sum(self.a)

    @property
    def deg_Q(self) -> Multidegree:
        return Multidegree((self.p, self.fibre_degrees[0]))

    @property
    def deg_C(self) -> Multidegree:
        return Multidegree((2 - self.p - self.sum_a, self.fibre_degrees[1]))

    def label(self) -> str:
        return f"p={self.p} a={''.join(str(x) for x in self.a)}"

    def as_dict(self) -> dict:
        return {"p": self.p, "a": list(self.a)}


class WeightMatrix:
    """Integer grading of a polynomial ring: one degree column per variable."""

    def __init__(self, columns: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                 kind: str = "generic", data: ScrollData | None = None, a: tuple | None = None):
        cols = tuple(tuple(int(x) for x in c) for c in columns)
        if not cols:
            raise ValueError("empty weight matrix")
        rows = {len(c) for c in cols}
        if len(rows) != 1:
            raise ValueError("columns of unequal length")
        self.columns = cols
        self.nvars = len(cols)
        self.nrows = rows.pop()
        self.names = tuple(names) if names else tuple(f"z{i + 1}" for i in range(self.nvars))
        if len(self.names) != self.nvars:
            raise ValueError("one name per variable required")
        self.kind = kind
        self.data = data
        self.a = a

    @classmethod
    def scroll(cls, a: Sequence[int]) -> "WeightMatrix":
        a = tuple(int(x) for x in a)
        cols = [(-x, 1) for x in a] + [(1, 0), (1, 0)]
        return cls(cols, SCROLL_NAMES, kind="scroll", a=a)

    @classmethod
    def cayley(cls, data: ScrollData) -> "WeightMatrix":
        cols = [(-x, 1, 0) for x in data.a] + [(1, 0, 0), (1, 0, 0)]
        cols += [(-data.p, -2, 1), (-2 + data.p + data.sum_a, -3, 1)]
        return cls(cols, CAYLEY_NAMES, kind="cayley", data=data, a=data.a)

    def column(self, i: int) -> Multidegree:
        return Multidegree(self.columns[i])

    def degree_of(self, exps: Sequence[int]) -> Multidegree:
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector of length {len(exps)}, expected {self.nvars}")
        return Multidegree(sum(e * c[k] for e, c in zip(exps, self.columns)) for k in range(self.nrows))

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightMatrix) and self.columns == other.columns

    def __hash__(self) -> int:
        return hash(self.columns)

    def __repr__(self) -> str:
        return f"WeightMatrix({self.kind}, {self.nrows}x{self.nvars})"


def monomial_multidegree(W: WeightMatrix, m: Sequence[int]) -> Multidegree:
    if len(m) != W.nvars:
        raise ValueError(f"exponent vector of length {len(m)}, expected {W.nvars}")
    if any(e < 0 for e in m):
        raise ValueError("negative exponent")
    return W.degree_of(m)


def anticanonical(data: ScrollData) -> Multidegree:
    return Multidegree((2 - data.sum_a, 5))


def coefficient_degree_quadric(q: Sequence[int], data: ScrollData) -> int:
    """Degree in (x6, x7) of the coefficient of x^q in f1; negative means absent."""
    if len(q) != 5 or sum(q) != 2 or min(q) < 0:
        raise ValueError(f"{tuple(q)} is not a quadric fibre exponent")
    return data.p + sum(x * y for x, y in zip(q, data.a))


def coefficient_degree_cubic(q: Sequence[int], data: ScrollData) -> int:
    if len(q) != 5 or sum(q) != 3 or min(q) < 0:
        raise ValueError(f"{tuple(q)} is not a cubic fibre exponent")
    return 2 - data.p + sum((x - 1) * y for x, y in zip(q, data.a))


@dataclass(frozen=True)
class BaseLocus:
    """Base locus of |(d1, d2)| on F(a): the sub-scroll V(x_k, ..., x5).

    k = 6 means no monomial of the class is realizable (no sections at all).
    """

    k: int
    degree: tuple = field(default=())

    @property
    def empty(self) -> bool:
        return self.k == 1

    @property
    def no_sections(self) -> bool:
        return self.k == 6

    @property
    def vanishing_vars(self) -> tuple:
        return tuple(range(self.k, 6)) if self.k <= 5 else (1, 2, 3, 4, 5)

    @property
    def dim(self) -> int:
        if self.k == 1:
            return -1
        return self.k - 1

    def describe(self) -> str:
        if self.empty:
            return "empty"
        if self.no_sections:
            return "no sections"
        return "V(" + ",".join(f"x{j}" for j in self.vanishing_vars) + f"), dim {self.dim}"


def base_locus(d: Sequence[int], a: Sequence[int]) -> BaseLocus:
    d1, d2 = int(d[0]), int(d[1])
    if d2 <= 0:
        raise ValueError("fibre degree must be positive")
    a = tuple(a)
    if any(x > y for x, y in zip(a, a[1:])):
        raise ValueError("weights must be sorted")
    k = next((j + 1 for j, aj in enumerate(a) if d1 + d2 * aj >= 0), 6)
    loc = BaseLocus(k, (d1, d2))
    assert loc.dim != 0
    return loc


def base_loci(data: ScrollData) -> tuple[BaseLocus, BaseLocus]:
    """(B_Q, B_C): base loci of the quadric and the cubic systems."""
    return base_locus(data.deg_Q, data.a), base_locus(data.deg_C, data.a)
