import random

import pytest
import sympy

from scrollcy.algebra.groebner import (GroebnerAbort, dimension_and_length, groebner, krull_dimension,
                                       minimal_polynomial, standard_monomials)

P = 101


def gb(gens, n, order="grevlex", **kw):
    return groebner(gens, n, P, order, **kw)


def test_fixture_xy():
    g = gb([{(1, 0): 1}, {(0, 1): 1}], 2)
    assert sorted(g.polys, key=lambda f: sorted(f)) == [{(0, 1): 1}, {(1, 0): 1}]
    info = dimension_and_length(g)
    assert (info.dim, info.length, info.distinct) == (0, 1, 1)


def test_fixture_x2_minus_1():
    info = dimension_and_length(gb([{(2,): 1, (0,): P - 1}], 1))
    assert (info.dim, info.length, info.distinct) == (0, 2, 2)


def test_fixture_fat_point():
    # y - x^2, y^2 -> x^4 = 0
    info = dimension_and_length(gb([{(0, 1): 1, (2, 0): P - 1}, {(0, 2): 1}], 2))
    assert (info.dim, info.length, info.distinct) == (0, 4, 1)


def test_positive_dimension():
    assert krull_dimension(gb([{(1, 0): 1}], 2)) == 1
    info = dimension_and_length(gb([{(1, 0, 0): 1}], 3))
    assert info.dim == 2 and info.length is None


def test_x2_y():
    info = dimension_and_length(gb([{(2, 0): 1}, {(0, 1): 1}], 2))
    assert (info.dim, info.length, info.distinct) == (0, 2, 1)


def test_three_rational_points():
    info = dimension_and_length(gb([{(3, 0): 1, (1, 0): P - 1}, {(0, 1): 1, (2, 0): P - 1}], 2))
    assert (info.dim, info.length, info.distinct) == (0, 3, 3)
    assert info.eliminants["v1"]["factor_degrees"] == {1: 3}


def test_unit_ideal():
    g = gb([{(1, 0): 1}, {(1, 0): 1, (0, 0): 1}], 2)
    assert g.is_unit
    assert dimension_and_length(g).dim == -1


def test_irrational_points_counted():
    # x^2 + 1 has no root mod 103 but two geometric points
    info = dimension_and_length(groebner([{(2,): 1, (0,): 1}], 1, 103))
    assert info.distinct == 2
    assert info.eliminants["v1"]["factor_degrees"] == {2: 2}


def test_minimal_polynomial_of_companion():
    import numpy as np
    M = np.array([[0, 0, 6], [1, 0, 0], [0, 1, 0]], dtype=np.int64)  # x^3 - 6
    assert minimal_polynomial(M, P) == [P - 6, 0, 0, 1]


def test_step_cap():
    gens = [{(2, 1, 0): 1, (0, 1, 3): 3, (1, 1, 1): 5}, {(3, 0, 1): 2, (0, 3, 0): 1, (1, 0, 0): 1},
            {(0, 2, 2): 1, (1, 1, 0): 7, (0, 0, 1): 1}]
    with pytest.raises(GroebnerAbort):
        gb(gens, 3, max_steps=5)


def test_reduce_and_contains():
    g = gb([{(1, 0): 1, (0, 1): P - 1}, {(0, 2): 1, (0, 0): P - 1}], 2)
    assert g.contains({(2, 0): 1, (0, 0): P - 1})
    assert not g.contains({(1, 0): 1})


def _random_system(rng, n):
    gens = []
    for _ in range(rng.randint(n - 1, n + 1)):
        f = {}
        for _ in range(rng.randint(2, 4)):
            f[tuple(rng.randint(0, 2) for _ in range(n))] = rng.randrange(1, P)
        gens.append(f)
    return gens


def _to_sympy(f, xs):
    return sum(c * sympy.prod([x ** k for x, k in zip(xs, e)]) for e, c in f.items())


@pytest.mark.parametrize("order", ["grevlex", "lex"])
@pytest.mark.parametrize("seed", range(15))
def test_against_sympy(seed, order):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    gens = _random_system(rng, n)
    xs = sympy.symbols(f"x0:{n}")
    ref = sympy.groebner([_to_sympy(f, xs) for f in gens], *xs, modulus=P, order=order)
    mine = gb(gens, n, order)
    got = {sympy.Poly(_to_sympy(f, xs), *xs, modulus=P).monic() for f in mine.polys}
    want = {sympy.Poly(g, *xs, modulus=P).monic() for g in ref.exprs}
    assert got == want


def test_standard_monomials_count_matches_length():
    g = gb([{(2, 0): 1, (0, 0): 1}, {(0, 3): 1, (1, 0): 2}], 2)
    assert len(standard_monomials(g)) == dimension_and_length(g).length == 6
