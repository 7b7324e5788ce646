"""Sparse multivariate polynomials with an optional multigrading."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .fields import QQ


class HomogeneityError(ValueError):
    pass


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class SparsePoly:
    """A polynomial stored as ``{exponent tuple: raw coefficient}``.

    ``weights`` is an optional weight matrix (anything with ``nvars`` and
    ``degree_of(exponents)``).  When given, the polynomial must be homogeneous
    and its multidegree is cached in ``degree``; pass ``homogeneous=False`` to
    allow mixed degrees (then ``degree`` is None).
    """

    __slots__ = ("field", "nvars", "terms", "weights", "degree")

    def __init__(self, field, nvars: int, terms: Mapping[tuple, object] | None = None,
                 weights=None, homogeneous: bool = True):
        self.field = field
        self.nvars = nvars
        self.weights = weights
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if min(e, default=0) < 0:
                raise ValueError(f"negative exponent in {e}")
            c = field.convert(c)
            if not field.is_zero(c):
                clean[e] = c
        self.terms = clean
        self.degree = None
        if weights is not None:
            if weights.nvars != nvars:
                raise ValueError("weight matrix does not match the number of variables")
            if homogeneous:
                self.degree = self._check_homogeneous()

    def _check_homogeneous(self):
        degs = {self.weights.degree_of(e) for e in self.terms}
        if len(degs) > 1:
            raise HomogeneityError(f"mixed multidegrees {sorted(degs)}")
        return degs.pop() if degs else None

    @classmethod
    def _raw(cls, field, nvars, terms, weights, degree):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms, obj.weights, obj.degree = field, nvars, terms, weights, degree
        return obj

    @classmethod
    def monomial(cls, field, exps: tuple, coeff=1, weights=None) -> "SparsePoly":
        return cls(field, len(exps), {tuple(exps): coeff}, weights)

    @classmethod
    def variable(cls, field, nvars: int, i: int, weights=None) -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1}, weights)

    def _like(self, terms: dict, degree) -> "SparsePoly":
        return SparsePoly._raw(self.field, self.nvars, terms, self.weights, degree)

    def _compatible(self, other: "SparsePoly"):
        if self.field != other.field or self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def support(self) -> list[tuple]:
        return sorted(self.terms)

    def coefficient(self, exps: tuple):
        return self.terms.get(tuple(exps), self.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._compatible(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(out[e], c) if e in out else c
            if f.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return self._merged(out, other)

    def __neg__(self) -> "SparsePoly":
        f = self.field
        return self._like({e: f.neg(c) for e, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def _merged(self, terms: dict, other: "SparsePoly") -> "SparsePoly":
        if self.weights is None:
            return self._like(terms, None)
        if self.degree is not None and other.degree is not None and self.degree != other.degree:
            if self.terms and other.terms:
                raise HomogeneityError(f"adding degree {self.degree} to degree {other.degree}")
        degree = self.degree if self.terms else other.degree
        return self._like(terms, degree if terms else None)

    def scale(self, c) -> "SparsePoly":
        f = self.field
        c = f.convert(c)
        if f.is_zero(c):
            return self._like({}, None)
        return self._like({e: f.mul(v, c) for e, v in self.terms.items()}, self.degree)

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        self._compatible(other)
        f = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = f.mul(c1, c2)
                if e in out:
                    v = f.add(out[e], v)
                    if f.is_zero(v):
                        del out[e]
                        continue
                out[e] = v
        degree = None
        if self.degree is not None and other.degree is not None and out:
            degree = tuple(x + y for x, y in zip(self.degree, other.degree))
        return self._like(out, degree)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly(self.field, self.nvars, {(0,) * self.nvars: 1}, self.weights)
        for _ in range(n):
            result = result * self
        return result

    def partial_derivative(self, i: int) -> "SparsePoly":
        f = self.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = f.mul(c, f.convert(k))
                if not f.is_zero(v):
                    d = list(e)
                    d[i] -= 1
                    out[tuple(d)] = v
        degree = None
        if self.degree is not None and out:
            col = self.weights.column(i)
            degree = tuple(x - y for x, y in zip(self.degree, col))
        return self._like(out, degree)

    def euler_derivative(self, i: int) -> "SparsePoly":
        """x_i * d/dx_i, which keeps the multidegree."""
        f = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = f.mul(c, f.convert(e[i]))
                if not f.is_zero(v):
                    out[e] = v
        return self._like(out, self.degree if out else None)

    def multiply_monomial(self, exps: tuple, coeff=None) -> "SparsePoly":
        f = self.field
        c = f.one if coeff is None else f.convert(coeff)
        out = {_add_exp(e, exps): f.mul(v, c) for e, v in self.terms.items()}
        degree = None
        if self.degree is not None and out:
            degree = tuple(x + y for x, y in zip(self.degree, self.weights.degree_of(exps)))
        return self._like(out, degree)

    def substitute(self, values: Mapping[int, object]) -> "SparsePoly":
        """Replace variables by field constants; substituted variables keep exponent 0.

        The result is generally not homogeneous, so it carries no grading
        unless every substituted value is zero (a restriction to a stratum).
        """
        f = self.field
        vals = {i: f.convert(v) for i, v in values.items()}
        restriction = all(f.is_zero(v) for v in vals.values())
        out: dict = {}
        for e, c in self.terms.items():
            v = c
            d = list(e)
            for i, x in vals.items():
                if e[i]:
                    if f.is_zero(x):
                        v = f.zero
                        break
                    v = f.mul(v, _field_pow(f, x, e[i]))
                    d[i] = 0
            if f.is_zero(v):
                continue
            t = tuple(d)
            if t in out:
                v = f.add(out[t], v)
                if f.is_zero(v):
                    del out[t]
                    continue
            out[t] = v
        if restriction:
            return self._like(out, self.degree if out else None)
        return SparsePoly._raw(f, self.nvars, out, None, None)

    def restrict_zero(self, variables: Iterable[int]) -> "SparsePoly":
        return self.substitute({i: 0 for i in variables})

    def drop_variables(self, keep: list[int]) -> "SparsePoly":
        """Project exponents onto ``keep`` (callers ensure dropped exponents are 0)."""
        out: dict = {}
        f = self.field
        for e, c in self.terms.items():
            t = tuple(e[i] for i in keep)
            if t in out:
                v = f.add(out[t], c)
                if f.is_zero(v):
                    del out[t]
                else:
                    out[t] = v
            else:
                out[t] = c
        return SparsePoly._raw(f, len(keep), out, None, None)

    def evaluate(self, point) -> object:
        f = self.field
        pt = [f.convert(x) for x in point]
        total = f.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = f.mul(v, _field_pow(f, x, k))
            total = f.add(total, v)
        return total

    def map_coefficients(self, fn: Callable, field=None) -> "SparsePoly":
        field = field or self.field
        return SparsePoly(field, self.nvars, {e: fn(c) for e, c in self.terms.items()}, self.weights)

    def to_string(self, names: list[str] | None = None) -> str:
        names = names or [f"z{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            c = self.terms[e]
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        tag = f" deg {self.degree}" if self.degree is not None else ""
        return f"SparsePoly({len(self.terms)} terms over {self.field!r}{tag})"


def _field_pow(field, x, k: int):
    result = field.one
    for _ in range(k):
        result = field.mul(result, x)
    return result


def from_terms(terms: Mapping[tuple, object], weights, field=QQ) -> SparsePoly:
    return SparsePoly(field, weights.nvars, terms, weights)
