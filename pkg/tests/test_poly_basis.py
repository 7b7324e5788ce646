import pytest
from hypothesis import given, settings, strategies as st

from scrollcy.algebra.basis import brute_force_basis, enumerate_basis, random_section
from scrollcy.algebra.fields import PrimeField
from scrollcy.algebra.poly import HomogeneityError, SparsePoly
from scrollcy.scroll import ScrollData, WeightMatrix

F = PrimeField(101)
W = WeightMatrix.scroll((0, 0, 0, 1, 1))


def poly(terms):
    return SparsePoly(F, 7, terms, W)


def test_homogeneity_enforced():
    with pytest.raises(HomogeneityError):
        poly({(1, 0, 0, 0, 0, 0, 0): 1, (0, 0, 0, 0, 0, 1, 0): 1})


def test_derivatives_and_degree():
    f = random_section(W, (1, 2), 101, 3)
    assert f.degree == (1, 2)
    g = f.partial_derivative(5)
    assert g.is_zero() or g.degree == (0, 2)
    e = f.euler_derivative(0)
    assert e.is_zero() or e.degree == f.degree


def test_restrict_keeps_grading():
    f = random_section(W, (0, 2), 101, 1)
    g = f.restrict_zero((3, 4))
    assert g.degree == (0, 2)
    assert all(e[3] == e[4] == 0 for e in g.terms)


@given(st.integers(0, 20), st.integers(0, 20))
@settings(max_examples=25, deadline=None)
def test_ring_axioms(s, t):
    f = random_section(W, (0, 1), 101, s)
    g = random_section(W, (1, 1), 101, t)
    h = random_section(W, (1, 0), 101, s + t)
    assert f * (g + g) == f * g + f * g
    assert (f * h) * g == f * (h * g)
    assert f * h == h * f
    assert (f - f).is_zero()


def test_evaluate_matches_substitute():
    f = random_section(W, (0, 2), 101, 5)
    pt = [3, 1, 4, 1, 5, 9, 2]
    full = f.substitute(dict(enumerate(pt)))
    assert full.terms.get((0,) * 7, 0) == f.evaluate(pt)


@pytest.mark.parametrize("a,deg,expected", [
    ((0, 0, 0, 0, 0), (0, 2), 15),
    ((0, 0, 0, 0, 0), (2, 3), 105),
    ((0, 0, 1, 1, 1), (-1, 2), 18),
    ((0, 0, 0, 1, 1), (-3, 2), 0),
])
def test_scroll_piece_dims(a, deg, expected):
    Wa = WeightMatrix.scroll(a)
    assert enumerate_basis(Wa, deg).dim == expected
    assert len(brute_force_basis(Wa, deg)) == expected


def test_cayley_piece_matches_bruteforce():
    G = WeightMatrix.cayley(ScrollData(0, (0, 0, 0, 0, 1)))
    for n in range(3):
        assert enumerate_basis(G, (0, 0, n)).monomials == brute_force_basis(G, (0, 0, n))


def test_random_section_full_support():
    b = enumerate_basis(W, (0, 3))
    f = random_section(W, (0, 3), 101, 7)
    assert set(f.terms) == set(b.monomials)
    assert all(c % 101 for c in f.terms.values())
    assert random_section(W, (0, 3), 101, 7) == f


def test_empty_piece_raises():
    with pytest.raises(ValueError):
        random_section(W, (-5, 1), 101, 0)
