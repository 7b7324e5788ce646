"""Buchberger's algorithm over GF(p) for affine ideals in a handful of variables.

Polynomials are dicts {exponent tuple: coefficient in [1, p)}.  Pairs are
pruned with the Gebauer-Moeller criteria and chosen by the normal strategy
(lowest sugar degree first); S-polynomials are fully reduced.  The result is the
reduced (monic, inter-reduced) basis.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass

import numba as nb
import numpy as np

from . import univariate as uv
from .rank import dense_left_kernel

MAX_STEPS = 10 ** 6


class GroebnerAbort(RuntimeError):
    """Raised when the reduction-step cap is exceeded."""


def _grevlex_neg(e):
    # min-heap key: larger monomial -> smaller key
    return (-sum(e),) + tuple(reversed(e))


def _lex_neg(e):
    return tuple(-x for x in e)


ORDERS = {"grevlex": _grevlex_neg, "lex": _lex_neg}


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def as_dict_poly(f, prime: int) -> dict:
    """Accept a dict or anything with ``.terms``; reduce coefficients mod prime."""
    terms = f.terms if hasattr(f, "terms") else f
    out = {}
    for e, c in terms.items():
        c = int(c) % prime
        if c:
            out[tuple(e)] = c
    return out


class _Reducer:
    def __init__(self, prime: int, order: str, max_steps: int):
        self.p = prime
        self.neg = ORDERS[order]
        self.steps = 0
        self.max_steps = max_steps

    def lm(self, f: dict):
        return min(f, key=self.neg)

    def monic(self, f: dict) -> dict:
        m = self.lm(f)
        c = f[m]
        if c == 1:
            return f
        inv = pow(c, -1, self.p)
        return {e: v * inv % self.p for e, v in f.items()}

    def reduce(self, f: dict, G: list, lms: list, full: bool = True) -> dict:
        """Normal form of f modulo the monic polynomials G (leading monomials lms)."""
        p, neg = self.p, self.neg
        f = dict(f)
        heap = [(neg(e), e) for e in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if c is None:
                continue
            for g, lm in zip(G, lms):
                if _divides(lm, m):
                    break
            else:
                rem[m] = c
                del f[m]
                if not full:
                    rem.update(f)
                    return rem
                continue
            self.steps += 1
            if self.steps > self.max_steps:
                raise GroebnerAbort(f"more than {self.max_steps} reduction steps")
            q = _sub(m, lm)
            for e, gc in g.items():
                e2 = _add(e, q)
                v = (f.get(e2, 0) - c * gc) % p
                if v:
                    if e2 not in f:
                        heapq.heappush(heap, (neg(e2), e2))
                    f[e2] = v
                else:
                    f.pop(e2, None)
        return rem


@dataclass
class GroebnerBasis:
    polys: list
    nvars: int
    prime: int
    order: str
    steps: int = 0

    @property
    def leading_monomials(self) -> list:
        neg = ORDERS[self.order]
        return [min(g, key=neg) for g in self.polys]

    @property
    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading_monomials)

    def reduce(self, f) -> dict:
        r = _Reducer(self.prime, self.order, MAX_STEPS)
        return r.reduce(as_dict_poly(f, self.prime), self.polys, self.leading_monomials)

    def contains(self, f) -> bool:
        return not self.reduce(f)

    def __len__(self) -> int:
        return len(self.polys)


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(pairs: list, lms: list, alive: list, k: int) -> list:
    """Gebauer-Moeller update of the pair list for a new basis element k."""
    h = lms[k]
    C = [(i, _lcm(lms[i], h)) for i in range(k) if alive[i]]
    D = []
    while C:
        i, l = C.pop(0)
        if _coprime(lms[i], h) or not any(_divides(l2, l) for _, l2 in C + D):
            D.append((i, l))
    E = [(i, l) for i, l in D if not _coprime(lms[i], h)]
    out = [
        (i, j, l) for (i, j, l) in pairs
        if not (_divides(h, l) and _lcm(lms[i], h) != l and _lcm(lms[j], h) != l)
    ]
    out.extend((i, k, l) for i, l in E)
    for i in range(k):
        if alive[i] and _divides(h, lms[i]):
            alive[i] = False
    return out


# ------------------------------------------------------------ packed kernel
#
# Monomials in n <= 6 variables are packed 8 bits per exponent (exponents
# stay below 128, the top bit of each field is a borrow guard).  P is the
# packed exponent vector; the order key is an integer, additive under
# multiplication, whose natural order is the monomial order:
#   lex      key = sum e_i 2^(w(n-1-i))
#   grevlex  key = deg * 2^48 - sum e_i 2^(wi)

MIN_FIELD, MAX_FIELD = 8, 16


def field_width(nvars: int) -> int:
    # all fields must fit in 48 bits; fewer variables get wider fields
    return max(MIN_FIELD, min(MAX_FIELD, 48 // max(nvars, 1)))


class _Packer:
    def __init__(self, nvars: int, order: str):
        if nvars > 6:
            raise ValueError("packed monomials support at most 6 variables")
        self.n = nvars
        self.order = order
        self.width = w = field_width(nvars)
        self.limit = 1 << (w - 1)
        self.guard = sum(self.limit << (w * i) for i in range(nvars))

    def P(self, e) -> int:
        return sum(x << (self.width * i) for i, x in enumerate(e))

    def key(self, e) -> int:
        if self.order == "lex":
            return sum(x << (self.width * (self.n - 1 - i)) for i, x in enumerate(e))
        return (sum(e) << 48) - self.P(e)

    def decode(self, P: int) -> tuple:
        mask = (1 << self.width) - 1
        return tuple((P >> (self.width * i)) & mask for i in range(self.n))

    def pack(self, f: dict):
        items = sorted(((self.key(e), self.P(e), c) for e, c in f.items()), reverse=True)
        return (np.array([t[0] for t in items], np.int64), np.array([t[1] for t in items], np.int64),
                np.array([t[2] for t in items], np.int64))

    def unpack(self, g) -> dict:
        return {self.decode(int(P)): int(c) for P, c in zip(g[1], g[2])}


@nb.njit(cache=True)
def _merge_sub(ak, ap, ac, bk, bp, bc, c, p):
    """a - c*b for term arrays sorted by decreasing key."""
    n = ak.size + bk.size
    ok = np.empty(n, np.int64)
    op = np.empty(n, np.int64)
    oc = np.empty(n, np.int64)
    i = 0
    j = 0
    t = 0
    while i < ak.size and j < bk.size:
        if ak[i] > bk[j]:
            ok[t] = ak[i]
            op[t] = ap[i]
            oc[t] = ac[i]
            i += 1
            t += 1
        elif ak[i] < bk[j]:
            ok[t] = bk[j]
            op[t] = bp[j]
            oc[t] = (p - c * bc[j] % p) % p
            j += 1
            t += 1
        else:
            v = (ac[i] - c * bc[j]) % p
            if v != 0:
                ok[t] = ak[i]
                op[t] = ap[i]
                oc[t] = v
                t += 1
            i += 1
            j += 1
    while i < ak.size:
        ok[t] = ak[i]
        op[t] = ap[i]
        oc[t] = ac[i]
        i += 1
        t += 1
    while j < bk.size:
        ok[t] = bk[j]
        op[t] = bp[j]
        oc[t] = (p - c * bc[j] % p) % p
        j += 1
        t += 1
    return ok[:t], op[:t], oc[:t]


@nb.njit(cache=True)
def _normal_form(fk, fp, fc, Bk, Bp, Bc, lmp, guard, p, max_steps, steps, full):
    """Reduce f by the monic polynomials B; returns the remainder and the step count."""
    rk = np.empty(fk.size, np.int64)
    rp = np.empty(fk.size, np.int64)
    rc = np.empty(fk.size, np.int64)
    t = 0
    while fk.size > 0:
        m = fp[0]
        s = -1
        for k in range(lmp.size):
            if ((m | guard) - lmp[k]) & guard == guard:
                s = k
                break
        if s < 0:
            if t == rk.size:
                nk = np.empty(2 * t + 1, np.int64)
                np_ = np.empty(2 * t + 1, np.int64)
                nc = np.empty(2 * t + 1, np.int64)
                nk[:t] = rk[:t]
                np_[:t] = rp[:t]
                nc[:t] = rc[:t]
                rk, rp, rc = nk, np_, nc
            rk[t] = fk[0]
            rp[t] = fp[0]
            rc[t] = fc[0]
            t += 1
            fk, fp, fc = fk[1:], fp[1:], fc[1:]
            if not full:
                break
            continue
        steps += 1
        if steps > max_steps:
            return rk[:0], rp[:0], rc[:0], -1
        gk, gp, gc = Bk[s], Bp[s], Bc[s]
        qk = fk[0] - gk[0]
        qp = fp[0] - gp[0]
        fk, fp, fc = _merge_sub(fk[1:], fp[1:], fc[1:], gk[1:] + qk, gp[1:] + qp, gc[1:], fc[0], p)
    if fk.size:
        # partial reduction: append the untouched tail
        n = t + fk.size
        ok = np.empty(n, np.int64)
        op = np.empty(n, np.int64)
        oc = np.empty(n, np.int64)
        ok[:t] = rk[:t]
        op[:t] = rp[:t]
        oc[:t] = rc[:t]
        ok[t:] = fk
        op[t:] = fp
        oc[t:] = fc
        return ok, op, oc, steps
    return rk[:t], rp[:t], rc[:t], steps


class _PackedReducer:
    def __init__(self, packer: _Packer, prime: int, max_steps: int):
        self.pk = packer
        self.p = prime
        self.max_steps = max_steps
        self.steps = 0

    def monic(self, g):
        c = int(g[2][0])
        if c == 1:
            return g
        inv = pow(c, -1, self.p)
        return (g[0], g[1], g[2] * inv % self.p)

    def reduce(self, f, basis: list, full: bool = True):
        if not basis:
            return f
        Bk = nb.typed.List([g[0] for g in basis])
        Bp = nb.typed.List([g[1] for g in basis])
        Bc = nb.typed.List([g[2] for g in basis])
        lmp = np.array([g[1][0] for g in basis], np.int64)
        rk, rp, rc, steps = _normal_form(f[0], f[1], f[2], Bk, Bp, Bc, lmp, self.pk.guard,
                                         self.p, self.max_steps, self.steps, full)
        if steps < 0:
            raise GroebnerAbort(f"more than {self.max_steps} reduction steps")
        self.steps = steps
        return (rk, rp, rc)


def groebner(gens, nvars: int, prime: int, order: str = "grevlex",
             max_steps: int = MAX_STEPS, max_vars: int = 5) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``max_vars`` may be raised to 6 for Rabinowitsch-style membership tests.
    Lex bases of zero-dimensional ideals are obtained from the grevlex basis
    by FGLM; direct lex Buchberger is used only in positive dimension.
    """
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    if nvars > max_vars:
        raise ValueError(f"the Groebner engine is limited to {max_vars} variables")
    if order == "lex":
        g = _buchberger(gens, nvars, prime, "grevlex", max_steps)
        if g.is_unit:
            return GroebnerBasis(g.polys, nvars, prime, "lex", g.steps)
        if krull_dimension(g) == 0:
            return fglm(g, "lex")
    return _buchberger(gens, nvars, prime, order, max_steps)


def _buchberger(gens, nvars: int, prime: int, order: str, max_steps: int) -> GroebnerBasis:
    pk = _Packer(nvars, order)
    red = _PackedReducer(pk, prime, max_steps)
    F = [as_dict_poly(g, prime) for g in gens]
    F = [f for f in F if f]
    for f in F:
        for e in f:
            if len(e) != nvars:
                raise ValueError("exponent vector length does not match nvars")
            if max(e, default=0) >= pk.limit // 2:
                raise GroebnerAbort("input exponent too large for packed monomials")
    if not F:
        return GroebnerBasis([], nvars, prime, order)
    one = tuple([0] * nvars)
    packed = sorted((pk.pack(f) for f in F), key=lambda g: int(g[0][0]))
    G, lms, alive, sugar = [], [], [], []
    pairs: list = []

    def active():
        return [g for g, a in zip(G, alive) if a]

    def add(h, s):
        h = red.monic(h)
        G.append(h)
        lms.append(pk.decode(int(h[1][0])))
        alive.append(True)
        sugar.append(max(s, max(sum(pk.decode(int(P))) for P in h[1])))
        nonlocal pairs
        pairs = _update(pairs, lms, alive, len(G) - 1)

    def unit():
        return GroebnerBasis([{one: 1}], nvars, prime, order, red.steps)

    for f in packed:
        h = red.reduce(f, active())
        if h[0].size:
            if pk.decode(int(h[1][0])) == one:
                return unit()
            add(h, 0)

    def pair_key(t):
        i, j, l = pairs[t]
        s = max(sugar[i] + sum(l) - sum(lms[i]), sugar[j] + sum(l) - sum(lms[j]))
        return (s, ORDERS[order](l))

    while pairs:
        # sugar strategy, ties broken by the smallest lcm
        best = min(range(len(pairs)), key=pair_key)
        s_pair = pair_key(best)[0]
        i, j, l = pairs.pop(best)
        if max(l) >= pk.limit - 1:
            raise GroebnerAbort("exponent overflow in packed monomials")
        gi, gj = G[i], G[j]
        qi, qj = _sub(l, lms[i]), _sub(l, lms[j])
        ki, pi_ = pk.key(qi), pk.P(qi)
        kj, pj = pk.key(qj), pk.P(qj)
        s = _merge_sub(gi[0][1:] + ki, gi[1][1:] + pi_, gi[2][1:],
                       gj[0][1:] + kj, gj[1][1:] + pj, gj[2][1:], 1, prime)
        if not s[0].size:
            continue
        h = red.reduce(s, active())
        if h[0].size:
            if pk.decode(int(h[1][0])) == one:
                return unit()
            add(h, s_pair)
    basis = [g for g, a in zip(G, alive) if a]
    reduced = _interreduce_packed(basis, red)
    return GroebnerBasis([pk.unpack(g) for g in reduced], nvars, prime, order, red.steps)


def _interreduce_packed(G: list, red: _PackedReducer) -> list:
    pk = red.pk
    G = [red.monic(g) for g in G]
    lms = [pk.decode(int(g[1][0])) for g in G]
    keep = []
    for i, m in enumerate(lms):
        if any(j != i and _divides(lms[j], m) and (lms[j] != m or j < i) for j in range(len(G))):
            continue
        keep.append(i)
    G = [G[i] for i in keep]
    out = []
    for i, g in enumerate(G):
        head = (g[0][:1], g[1][:1], g[2][:1])
        tail = red.reduce((g[0][1:], g[1][1:], g[2][1:]), G[:i] + G[i + 1:])
        out.append((np.concatenate([head[0], tail[0]]), np.concatenate([head[1], tail[1]]),
                    np.concatenate([head[2], tail[2]])))
    return sorted(out, key=lambda g: -int(g[0][0]))


# ----------------------------------------------------------- zero-dim analysis

def krull_dimension(gb: GroebnerBasis) -> int:
    """Dimension of the affine zero set via maximal independent variable sets; -1 if empty."""
    if gb.is_unit:
        return -1
    lms = gb.leading_monomials
    n = gb.nvars
    for size in range(n, -1, -1):
        for U in itertools.combinations(range(n), size):
            Us = set(U)
            if not any(all(i in Us for i, x in enumerate(m) if x) for m in lms):
                return size
    return 0


def standard_monomials(gb: GroebnerBasis, limit: int = 200000) -> list:
    """Monomials outside the initial ideal of a zero-dimensional ideal."""
    lms = gb.leading_monomials
    n = gb.nvars
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if all(x == 0 for k, x in enumerate(m) if k != i) and m[i] > 0]
        if not pure:
            raise ValueError("ideal is not zero-dimensional")
        bounds.append(min(pure))
    out = []
    stack = [tuple([0] * n)]
    seen = set(stack)
    while stack:
        m = stack.pop()
        if any(_divides(l, m) for l in lms):
            continue
        out.append(m)
        if len(out) > limit:
            raise GroebnerAbort("too many standard monomials")
        for i in range(n):
            if m[i] + 1 < bounds[i]:
                m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                if m2 not in seen:
                    seen.add(m2)
                    stack.append(m2)
    return sorted(out, key=ORDERS[gb.order])


def _normal_vector(gb, f: dict, index: dict) -> np.ndarray:
    v = np.zeros(len(index), np.int64)
    for e, c in gb.reduce(f).items():
        v[index[e]] = c
    return v


def multiplication_matrix(gb: GroebnerBasis, form: dict, basis: list) -> np.ndarray:
    """Matrix of multiplication by ``form`` on k[x]/I in the standard-monomial basis (columns)."""
    index = {m: i for i, m in enumerate(basis)}
    cols = []
    p = gb.prime
    for m in basis:
        prod = {}
        for e, c in form.items():
            e2 = _add(e, m)
            prod[e2] = (prod.get(e2, 0) + c) % p
        cols.append(_normal_vector(gb, {e: c for e, c in prod.items() if c}, index))
    return np.array(cols, dtype=np.int64).T


def minimal_polynomial(M: np.ndarray, p: int) -> list:
    """Minimal polynomial (constant-first, monic) of a square matrix over GF(p), via Krylov spaces."""
    n = M.shape[0]
    if n == 0:
        return [1]
    # the minimal polynomial is the lcm of the minimal polynomials of e_i;
    # Krylov sequences of a few random vectors give it with high probability,
    # and we confirm by evaluating it at M.
    rng = np.random.default_rng(12345)
    mp = [1]
    for _ in range(4):
        v = rng.integers(0, p, n)
        mp = uv.lcm(mp, _krylov_minpoly(M, v, p), p)
        if not np.any(_poly_at_matrix(mp, M, p)):
            return mp
    for i in range(n):
        v = np.zeros(n, np.int64)
        v[i] = 1
        mp = uv.lcm(mp, _krylov_minpoly(M, v, p), p)
    return mp


def fglm(gb: GroebnerBasis, order: str = "lex") -> GroebnerBasis:
    """Change of ordering for a zero-dimensional ideal (Faugere-Gianni-Lazard-Mora).

    Monomials are visited in increasing target order; each one's normal form
    (a vector over the source standard monomials, obtained by multiplication
    matrices) is either independent of the earlier ones, giving a new standard
    monomial, or a dependency, giving a basis element.
    """
    p = gb.prime
    basis = standard_monomials(gb)
    n = gb.nvars
    dim = len(basis)
    mats = [multiplication_matrix(gb, {tuple(int(k == i) for k in range(n)): 1}, basis) for i in range(n)]
    key = ORDERS[order]
    one = tuple([0] * n)
    vec = {one: np.eye(dim, dtype=np.int64)[:, basis.index(one)] if one in basis else np.zeros(dim, np.int64)}
    rows: list = []      # echelon rows: (pivot, reduced vector, combination over std)
    std: list = []
    lead: list = []
    out: list = []
    todo = [one]
    seen = {one}
    while todo:
        todo.sort(key=key)
        m = todo.pop()
        if any(_divides(l, m) for l in lead):
            continue
        nf = vec.pop(m) % p
        v = nf
        comb = np.zeros(len(std) + 1, np.int64)
        comb[-1] = 1
        for piv, r, c in rows:
            if v[piv]:
                f = v[piv]
                v = (v - f * r) % p
                comb[:c.size] = (comb[:c.size] - f * c) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            # m + sum comb[k] std[k] lies in the ideal
            g = {m: 1}
            for k, c in enumerate(comb[:-1]):
                if c:
                    g[std[k]] = int(c)
            out.append(g)
            lead.append(m)
            continue
        piv = int(nz[0])
        inv = pow(int(v[piv]), -1, p)
        rows.append((piv, v * inv % p, comb * inv % p))
        std.append(m)
        for i in range(n):
            m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
            if m2 not in seen:
                seen.add(m2)
                vec[m2] = mats[i] @ nf % p
                todo.append(m2)
    return GroebnerBasis(out, n, p, order, gb.steps)


def _krylov_minpoly(M, v, p) -> list:
    vecs = [v % p]
    while True:
        A = np.array(vecs, dtype=np.int64)  # k x n
        _, K = dense_left_kernel(A.astype(np.float64), p)
        if K.shape[0]:
            c = K[-1] % p
            top = int(np.flatnonzero(c)[-1])
            c = c[:top + 1] * pow(int(c[top]), -1, p) % p
            return [int(x) for x in c]
        vecs.append(M @ vecs[-1] % p)


def _poly_at_matrix(f: list, M: np.ndarray, p: int) -> np.ndarray:
    n = M.shape[0]
    R = np.zeros((n, n), np.int64)
    for c in reversed(f):
        R = (R @ M) % p
        R[np.arange(n), np.arange(n)] = (R[np.arange(n), np.arange(n)] + c) % p
    return R


@dataclass
class ZeroDimInfo:
    dim: int
    length: int | None = None
    distinct: int | None = None
    eliminants: dict | None = None
    rational_points: int | None = None

    def as_dict(self) -> dict:
        return {"dim": self.dim, "length": self.length, "distinct": self.distinct,
                "eliminants": self.eliminants, "rational_points": self.rational_points}


def dimension_and_length(gb: GroebnerBasis, seed: int = 0, tries: int = 6) -> ZeroDimInfo:
    """Krull dimension; for a zero-dimensional ideal also length and distinct points.

    Per-variable eliminants are minimal polynomials of the coordinate
    multiplication maps (the generators of I meet k[x_i]).  The distinct
    count is the largest squarefree degree seen over the coordinates and
    a few random linear forms; a separating form attains the true count.
    """
    d = krull_dimension(gb)
    if d != 0:
        return ZeroDimInfo(d, 0 if d < 0 else None, 0 if d < 0 else None)
    p = gb.prime
    basis = standard_monomials(gb)
    n = gb.nvars
    elim = {}
    best = 0
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        mp = minimal_polynomial(multiplication_matrix(gb, {e: 1}, basis), p)
        sq = uv.squarefree_part(mp, p)
        elim[f"v{i + 1}"] = {"degree": len(mp) - 1, "squarefree_degree": len(sq) - 1,
                             "factor_degrees": {int(k): int(v) for k, v in uv.distinct_degree_factorization(sq, p).items()}}
        best = max(best, len(sq) - 1)
    rng = random.Random(f"{p}:{seed}:{len(basis)}")
    for _ in range(tries):
        if best == len(basis):
            break
        form = {tuple(int(k == i) for k in range(n)): rng.randrange(1, p) for i in range(n)}
        mp = minimal_polynomial(multiplication_matrix(gb, form, basis), p)
        best = max(best, len(uv.squarefree_part(mp, p)) - 1)
    return ZeroDimInfo(0, len(basis), best, elim)
