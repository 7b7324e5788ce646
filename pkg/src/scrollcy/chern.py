"""Intersection ring of F(a) and Chern classes of the complete intersections X.

H^*(F(a)) = Z[T, H] / (T^2, prod_j (H - a_j T)), with T the fibre class of
F -> P^1 and H the relative hyperplane class.  With m fibre variables the
second relation reads H^m = (sum a) H^(m-1) T, and H^(m-1) T integrates to 1.
Sub-scrolls V(x_k, ..., x5) have the same presentation with the first k-1
weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scroll import ScrollData, anticanonical


class IntersectionRing:
    def __init__(self, a: Sequence[int]):
        self.a = tuple(int(x) for x in a)
        self.m = len(self.a)
        if self.m < 1:
            raise ValueError("need at least one fibre variable")
        self.s = sum(self.a)
        self.dim = self.m

    def __eq__(self, other) -> bool:
        return isinstance(other, IntersectionRing) and other.a == self.a

    def __hash__(self) -> int:
        return hash(self.a)

    def reduce_monomial(self, i: int, j: int) -> dict:
        """Normal form of H^i T^j as {(i, j): coeff}."""
        coeff = 1
        while j < 2 and i >= self.m:
            # H^m = s H^(m-1) T
            i, j = i - 1, j + 1
            coeff *= self.s
        if j >= 2 or coeff == 0:
            return {}
        return {(i, j): coeff}

    def cls(self, terms: dict | None = None) -> "CohomologyClass":
        return CohomologyClass(self, terms or {})

    def one(self) -> "CohomologyClass":
        return self.cls({(0, 0): 1})

    def T(self) -> "CohomologyClass":
        return self.cls({(0, 1): 1})

    def H(self) -> "CohomologyClass":
        return self.cls({(1, 0): 1})

    def divisor(self, d: Sequence[int]) -> "CohomologyClass":
        return self.cls({(0, 1): d[0], (1, 0): d[1]})


class CohomologyClass:
    """An element of the intersection ring, always kept in normal form."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: IntersectionRing, terms: dict):
        self.ring = ring
        out: dict = {}
        for (i, j), c in terms.items():
            if c == 0:
                continue
            for key, k in ring.reduce_monomial(i, j).items():
                out[key] = out.get(key, 0) + c * k
        self.terms = {k: v for k, v in out.items() if v != 0}

    def _check(self, other: "CohomologyClass"):
        if other.ring != self.ring:
            raise ValueError("classes from different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return CohomologyClass(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return CohomologyClass(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CohomologyClass(self.ring, {k: v * other for k, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                for key, k in self.ring.reduce_monomial(i1 + i2, j1 + j2).items():
                    t[key] = t.get(key, 0) + c1 * c2 * k
        return CohomologyClass(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.one() * other
        return isinstance(other, CohomologyClass) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def component(self, k: int) -> "CohomologyClass":
        return CohomologyClass(self.ring, {(i, j): c for (i, j), c in self.terms.items() if i + j == k})

    def truncate(self, k: int) -> "CohomologyClass":
        return CohomologyClass(self.ring, {(i, j): c for (i, j), c in self.terms.items() if i + j <= k})

    def degrees(self) -> set:
        return {i + j for i, j in self.terms}

    def integrate(self) -> int:
        """Coefficient of H^(m-1) T, the point class; lower-degree parts integrate to 0."""
        return self.terms.get((self.ring.m - 1, 1), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return {_name(i, j): c for (i, j), c in sorted(self.terms.items())}

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{_name(i, j)}" for (i, j), c in sorted(self.terms.items()))


def _name(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("H" if i == 1 else f"H^{i}")
    if j:
        parts.append("T")
    return "*".join(parts) or "1"


def scroll_ring(data_or_a) -> IntersectionRing:
    a = data_or_a.a if isinstance(data_or_a, ScrollData) else data_or_a
    return IntersectionRing(a)


def divisor_class(d: Sequence[int], ring: IntersectionRing) -> CohomologyClass:
    if len(d) != 2:
        raise ValueError("divisor classes need a bidegree")
    return ring.divisor(d)


def tangent_chern_total(data: ScrollData) -> CohomologyClass:
    """c(T_F) = (1+T)^2 prod_j (1 + H - a_j T)."""
    R = scroll_ring(data)
    c = (R.one() + R.T()) ** 2
    for aj in data.a:
        c = c * (R.one() + R.H() - R.T() * aj)
    return c


def _inverse_series(x: CohomologyClass, order: int) -> CohomologyClass:
    """(1 + x)^(-1) for x of positive degree, up to the given degree."""
    R = x.ring
    out = R.one()
    term = R.one()
    for _ in range(order):
        term = (term * (-x)).truncate(order)
        out = out + term
    return out.truncate(order)


@dataclass
class EulerReport:
    data: ScrollData
    c1_vanishes: bool
    c1: CohomologyClass
    c2: CohomologyClass
    c3: CohomologyClass
    chi: int
    routes_agree: bool

    def as_dict(self) -> dict:
        return {
            "p": self.data.p, "a": list(self.data.a),
            "c1_vanishes": self.c1_vanishes,
            "c1": self.c1.as_dict(), "c2": self.c2.as_dict(), "c3": self.c3.as_dict(),
            "chi": self.chi, "routes_agree": self.routes_agree,
        }


class ChernRouteMismatch(AssertionError):
    pass


def expansion_routes(data: ScrollData) -> tuple[CohomologyClass, CohomologyClass]:
    """c(T_X) pushed to F, truncated at degree 3, computed two ways."""
    R = scroll_ring(data)
    D1 = divisor_class(data.deg_Q, R)
    D2 = divisor_class(data.deg_C, R)
    cF = tangent_chern_total(data)
    # route 1: invert each normal factor separately
    c_a = (cF * _inverse_series(D1, 3) * _inverse_series(D2, 3)).truncate(3)
    # route 2: invert the product (1 + D1)(1 + D2) in one go
    prod = (R.one() + D1) * (R.one() + D2)
    c_b = (cF * _inverse_series(prod - R.one(), 3)).truncate(3)
    return c_a, c_b


def cy_chern_classes(data: ScrollData) -> EulerReport:
    R = scroll_ring(data)
    D1 = divisor_class(data.deg_Q, R)
    D2 = divisor_class(data.deg_C, R)
    c_a, c_b = expansion_routes(data)
    agree = all(c_a.component(k) == c_b.component(k) for k in range(4))
    if not agree:
        raise ChernRouteMismatch(f"expansion routes disagree for {data.label()}")
    c1, c2, c3 = (c_a.component(k) for k in (1, 2, 3))
    chi = (c3 * D1 * D2).integrate()
    c1_zero = c1.is_zero()
    if not c1_zero:
        raise AssertionError(f"c1(T_X) = {c1} for {data.label()}: D1 + D2 is not anticanonical")
    return EulerReport(data, c1_zero, c1, c2, c3, chi, agree)


def anticanonical_class(data: ScrollData) -> CohomologyClass:
    return divisor_class(anticanonical(data), scroll_ring(data))


class DegreeMismatchError(ValueError):
    pass


def expected_intersection_count(classes: Sequence, stratum: Sequence[int]) -> int:
    """Bezout number of divisor classes on the sub-scroll with fibre weights ``stratum``.

    ``classes`` are bidegrees (d1, d2) or classes of any intersection ring
    (pulled back by T -> T, H -> H).  The total degree must equal the
    stratum's dimension; nothing is padded.
    """
    R = IntersectionRing(stratum)
    prod = R.one()
    total = 0
    for c in classes:
        if isinstance(c, CohomologyClass):
            cls = CohomologyClass(R, c.terms)
            degs = c.degrees()
            if len(degs) != 1:
                raise DegreeMismatchError("classes must be homogeneous")
            total += degs.pop()
        else:
            cls = R.divisor(c)
            total += 1
        prod = prod * cls
    if total != R.dim:
        raise DegreeMismatchError(f"classes of total degree {total} on a stratum of dimension {R.dim}")
    return prod.integrate()
