"""Exact coefficient fields: rationals, prime fields GF(p) and extensions GF(p^k).

Every field exposes the same small arithmetic protocol on *raw* values
(``add``, ``sub``, ``mul``, ``neg``, ``inv``, ``is_zero``, ``zero``, ``one``)
so that polynomial code can stay generic.  Prime-field raw values are plain
``int`` residues in ``[0, p)``; extension-field raw values are tuples of
residues (low degree first); rationals use :class:`fractions.Fraction`.

Wrapped element types (:class:`FpElement`, :class:`ExtElement`) are provided
for interactive use and property tests.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

DEFAULT_POINT_PRIME = 101
DEFAULT_RANK_PRIME = 32003


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The field QQ with Fraction raw values."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("QQ")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    def convert(self, value) -> Fraction:
        return Fraction(value)


QQ = Rationals()


class PrimeField:
    """GF(p) for an odd prime p; raw values are ints in [0, p)."""

    def __init__(self, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __call__(self, value) -> "FpElement":
        return FpElement(self, self.convert(value))

    def convert(self, value) -> int:
        if isinstance(value, Fraction):
            return value.numerator % self.p * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    @staticmethod
    def is_zero(a: int) -> bool:
        return a == 0

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)

    def elements(self):
        return range(self.p)

    def non_residue(self) -> int:
        """Smallest quadratic non-residue, found by exhaustive search."""
        for g in range(2, self.p):
            if pow(g, (self.p - 1) // 2, self.p) == self.p - 1:
                return g
        raise ArithmeticError("no non-residue")  # unreachable for odd p


class FpElement:
    __slots__ = ("field", "value")

    def __init__(self, field: PrimeField, value: int):
        self.field = field
        self.value = value % field.p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.field != self.field:
                raise TypeError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.field, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.field, self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.field, o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.field, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(self.field, -self.value)

    def inverse(self) -> "FpElement":
        return FpElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElement(self.field, self.value * self.field.inv(o))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(self.field, pow(self.value, e, self.field.p))

    def __eq__(self, other) -> bool:
        if isinstance(other, FpElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} mod {self.field.p}"


class ExtensionField:
    """GF(p^k) = GF(p)[t]/(m(t)) for a monic irreducible m of degree k.

    Raw values are length-k tuples of residues, constant term first.
    """

    def __init__(self, base: PrimeField, modulus):
        from .univariate import is_irreducible, normalize

        m = normalize(list(modulus), base.p)
        if len(m) < 2 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if not is_irreducible(m, base.p):
            raise ValueError(f"modulus {m} is reducible over GF({base.p})")
        self.base = base
        self.p = base.p
        self.modulus = tuple(m)
        self.degree = len(m) - 1
        self.order = self.p ** self.degree
        self.characteristic = self.p
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)

    @classmethod
    def of_degree(cls, base: PrimeField, k: int, seed: int = 0) -> "ExtensionField":
        """Some GF(p^k), with a modulus found by seeded random search."""
        from .univariate import random_irreducible

        return cls(base, random_irreducible(k, base.p, random.Random(seed)))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtensionField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash(("GFq", self.p, self.modulus))

    def __call__(self, value) -> "ExtElement":
        return ExtElement(self, self.convert(value))

    def convert(self, value) -> tuple:
        if isinstance(value, ExtElement):
            return value.value
        if isinstance(value, int):
            return (value % self.p,) + (0,) * (self.degree - 1)
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.degree:
            return self._reduce(coeffs)
        return tuple(coeffs + [0] * (self.degree - len(coeffs)))

    def generator(self) -> tuple:
        """The class of t (not necessarily a multiplicative generator)."""
        if self.degree == 1:
            return (-self.modulus[0] % self.p,)
        return (0, 1) + (0,) * (self.degree - 2)

    def _reduce(self, c: list) -> tuple:
        p, m, k = self.p, self.modulus, self.degree
        c = [x % p for x in c]
        for i in range(len(c) - 1, k - 1, -1):
            lead = c[i]
            if lead:
                for j in range(k):
                    c[i - k + j] = (c[i - k + j] - lead * m[j]) % p
            c[i] = 0
        c = c[:k]
        return tuple(c + [0] * (k - len(c)))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def inv(self, a):
        from .univariate import ext_gcd

        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = ext_gcd(list(a), list(self.modulus), self.p)
        # g is a nonzero constant because the modulus is irreducible
        c = pow(g[0], -1, self.p)
        return self.convert([x * c for x in s])

    def pow(self, a, e: int):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    @staticmethod
    def is_zero(a) -> bool:
        return not any(a)

    def random_element(self, rng: random.Random) -> tuple:
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def elements(self):
        import itertools

        return (tuple(c) for c in itertools.product(range(self.p), repeat=self.degree))


class ExtElement:
    __slots__ = ("field", "value")

    def __init__(self, field: ExtensionField, value: tuple):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.field != self.field:
                raise TypeError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.convert(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ExtElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ExtElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ExtElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ExtElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return ExtElement(self.field, self.field.neg(self.value))

    def inverse(self) -> "ExtElement":
        return ExtElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ExtElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __hash__(self) -> int:
        return hash((self.field.modulus, self.value))

    def __repr__(self) -> str:
        return f"{list(self.value)} in {self.field!r}"
