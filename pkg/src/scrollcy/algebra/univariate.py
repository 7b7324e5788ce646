"""Dense univariate polynomials over GF(p).

A polynomial is a list of residues, constant term first, with no trailing
zeros (the zero polynomial is ``[]``).  Only what the point-counting code
needs is here: gcd, squarefree part, distinct-degree factorization, roots.
"""

from __future__ import annotations

import random
from collections import Counter


def normalize(f: list, p: int) -> list:
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: list) -> int:
    return len(f) - 1


def monic(f: list, p: int) -> list:
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def add(f: list, g: list, p: int) -> list:
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def sub(f: list, g: list, p: int) -> list:
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def mul(f: list, g: list, p: int) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return normalize(out, p)


def divmod_poly(f: list, g: list, p: int) -> tuple[list, list]:
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return normalize(q, p), normalize(r[:dg], p)


def rem(f: list, g: list, p: int) -> list:
    return divmod_poly(f, g, p)[1]


def gcd(f: list, g: list, p: int) -> list:
    """Monic gcd; gcd(0, 0) = 0."""
    f, g = normalize(f, p), normalize(g, p)
    while g:
        f, g = g, rem(f, g, p)
    return monic(f, p)


def lcm(f: list, g: list, p: int) -> list:
    f, g = normalize(f, p), normalize(g, p)
    if not f or not g:
        return []
    return monic(divmod_poly(mul(f, g, p), gcd(f, g, p), p)[0], p)


def ext_gcd(f: list, g: list, p: int) -> tuple[list, list, list]:
    """Return (d, s, t) with s*f + t*g = d (d not normalized to monic)."""
    r0, r1 = normalize(f, p), normalize(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    return r0, s0, t0


def derivative(f: list, p: int) -> list:
    return normalize([i * c for i, c in enumerate(f)][1:], p)


def powmod(f: list, e: int, m: list, p: int) -> list:
    result, base = [1], rem(f, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        base = rem(mul(base, base, p), m, p)
        e >>= 1
    return result


def _pth_root(f: list, p: int) -> list:
    # f(x) = g(x^p) over GF(p); coefficients are fixed by Frobenius
    return [f[i] for i in range(0, len(f), p)]


def squarefree_part(f: list, p: int) -> list:
    """Product of the distinct monic irreducible factors of f."""
    f = monic(normalize(f, p), p)
    if not f:
        raise ValueError("zero polynomial")
    if len(f) == 1:
        return [1]
    df = derivative(f, p)
    if not df:
        return squarefree_part(_pth_root(f, p), p)
    g = gcd(f, df, p)
    h = divmod_poly(f, g, p)[0]
    # h holds the factors of multiplicity prime to p; the rest hide in g
    rest = g
    while True:
        common = gcd(rest, h, p)
        if len(common) == 1:
            break
        rest = divmod_poly(rest, common, p)[0]
    if len(rest) > 1:
        # rest is a p-th power coprime to h
        h = mul(h, squarefree_part(_pth_root(rest, p), p), p)
    return monic(h, p)


def distinct_degree_factorization(f: list, p: int) -> dict[int, int]:
    """Map d -> total degree of the product of irreducible factors of degree d.

    Factors are counted without multiplicity (the squarefree part is used).
    """
    f = squarefree_part(f, p)
    out: dict[int, int] = {}
    x = [0, 1]
    h = x
    d = 0
    while len(f) > 1:
        d += 1
        if 2 * d > len(f) - 1:
            out[len(f) - 1] = out.get(len(f) - 1, 0) + len(f) - 1
            break
        h = powmod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if len(g) > 1:
            out[d] = len(g) - 1
            f = divmod_poly(f, g, p)[0]
            h = rem(h, f, p)
    return out


def roots(f: list, p: int, rng: random.Random | None = None) -> list[int]:
    """Distinct roots of f in GF(p), sorted (Cantor-Zassenhaus splitting)."""
    rng = rng or random.Random(0)
    f = monic(normalize(f, p), p)
    if not f:
        raise ValueError("zero polynomial")
    lin = gcd(sub(powmod([0, 1], p, f, p), [0, 1], p), f, p)
    found: list[int] = []
    stack = [lin]
    while stack:
        g = stack.pop()
        if len(g) <= 1:
            continue
        if len(g) == 2:
            found.append(-g[0] % p)
            continue
        while True:
            a = rng.randrange(p)
            s = sub(powmod([a, 1], (p - 1) // 2, g, p), [1], p)
            h = gcd(s, g, p)
            if 1 < len(h) < len(g):
                stack.append(h)
                stack.append(divmod_poly(g, h, p)[0])
                break
    return sorted(found)


def is_irreducible(f: list, p: int) -> bool:
    f = normalize(f, p)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    return distinct_degree_factorization(f, p) == {n: n} and squarefree_part(f, p) == monic(f, p)


def random_irreducible(k: int, p: int, rng: random.Random) -> list:
    while True:
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if is_irreducible(f, p):
            return f


def degree_multiset(ddf: dict[int, int]) -> Counter:
    """Number of irreducible factors per degree, from DDF output."""
    return Counter({d: t // d for d, t in ddf.items()})
