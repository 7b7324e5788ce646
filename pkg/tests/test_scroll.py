import pytest
from hypothesis import given, strategies as st

from scrollcy.scroll import (Multidegree, ScrollData, WeightMatrix, anticanonical, base_locus,
                             base_loci, coefficient_degree_cubic, coefficient_degree_quadric,
                             monomial_multidegree)

from conftest import row

weights = st.lists(st.integers(0, 5), min_size=4, max_size=4).map(lambda t: (0,) + tuple(sorted(t)))
exps7 = st.lists(st.integers(0, 6), min_size=7, max_size=7)


def test_scroll_columns():
    W = WeightMatrix.scroll((0, 0, 1, 1, 1))
    assert W.columns[2] == (-1, 1)
    assert W.columns[5] == W.columns[6] == (1, 0)


def test_cayley_columns():
    d = ScrollData(-1, (0, 0, 0, 1, 1))
    G = WeightMatrix.cayley(d)
    assert G.nvars == 9
    assert G.columns[7] == (1, -2, 1)
    assert G.columns[8] == (-2 - 1 + 2, -3, 1)


def test_degrees_of_sections():
    d = row(12)
    assert d.deg_Q == (-1, 2)
    assert d.deg_C == (0, 3)
    assert anticanonical(d) == d.deg_Q + d.deg_C


@given(weights, exps7, exps7)
def test_multidegree_additive(a, e, f):
    W = WeightMatrix.scroll(a)
    s = [x + y for x, y in zip(e, f)]
    assert monomial_multidegree(W, s) == monomial_multidegree(W, e) + monomial_multidegree(W, f)


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        monomial_multidegree(WeightMatrix.scroll((0,) * 5), (0, 0, 0, 0, 0, -1, 0))


def test_bad_weights():
    with pytest.raises(ValueError):
        ScrollData(0, (1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        ScrollData(0, (0, 0, 2, 1, 1))


def test_coefficient_degrees():
    d = row(9)
    assert coefficient_degree_quadric((0, 0, 0, 1, 1), d) == 2
    assert coefficient_degree_quadric((0, 0, 2, 0, 0), d) == -2
    assert coefficient_degree_cubic((3, 0, 0, 0, 0), d) == 0
    with pytest.raises(ValueError):
        coefficient_degree_cubic((1, 1, 0, 0, 0), d)


def test_base_locus_examples():
    assert base_locus((0, 2), (0,) * 5).empty
    b = base_locus((-2, 2), (0, 0, 0, 2, 2))
    assert (b.k, b.dim) == (4, 3)
    assert b.describe().startswith("V(x4,x5)")
    assert base_locus((-5, 2), (0, 0, 0, 1, 1)).no_sections
    bq, bc = base_loci(row(12))
    assert (bq.dim, bc.dim) == (2, -1)


@given(weights, st.integers(-8, 8), st.integers(1, 3))
def test_base_locus_antitone(a, d1, d2):
    # raising the first grading can only shrink the base locus
    lo, hi = base_locus((d1, d2), a), base_locus((d1 + 1, d2), a)
    assert hi.k <= lo.k
    assert lo.dim != 0


def test_multidegree_ops():
    m = Multidegree((1, 2))
    assert m - m == (0, 0)
    assert -m == (-1, -2)
    assert m.scale(3) == (3, 6)
