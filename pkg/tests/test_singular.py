import itertools

import pytest

from scrollcy.algebra.fields import PrimeField
from scrollcy.algebra.poly import SparsePoly
from scrollcy.scroll import ScrollData, WeightMatrix
from scrollcy.singular import (CHARTS, COLUMNS, affine_point_count, chart_ideals, full_minor_ideal,
                               jacobian_matrix, make_instance, transverse_delta_locus, partition_point_count,
                               run_instance, singularity_report, stratum_euler_check, _minor)

from conftest import row

P = 101


def test_jacobian_family1_support():
    J = jacobian_matrix(make_instance(row(1), P, 1))
    assert len(J) == 2 and all(len(r) == 7 for r in J)
    # f1 has bidegree (0, 2): constant coefficients, no base derivatives
    assert [e.is_zero() for e in J[0]] == [True, True] + [False] * 5
    assert all(not e.is_zero() for e in J[1])
    J5 = jacobian_matrix(make_instance(row(5), P, 1))
    assert all(not e.is_zero() for r in J5 for e in r)


def test_jacobian_entry_degree():
    d = row(9)
    J = jacobian_matrix(make_instance(d, P, 1))
    assert J[0][0].degree == (d.p - 1, 2)


def test_family9_row1_on_stratum():
    J = jacobian_matrix(make_instance(row(9), P, 1))
    restricted = [e.restrict_zero((3, 4)) for e in J[0]]
    # columns are x6, x7, x1, x2, x3, x4, x5
    assert [not e.is_zero() for e in restricted] == [False] * 5 + [True, True]


def test_full_minor_ideal_shape_and_degrees():
    d = row(12)
    inst = make_instance(d, P, 2)
    gens = full_minor_ideal(inst)
    assert len(gens) == 23
    W = WeightMatrix.scroll(d.a)
    total = d.deg_Q + d.deg_C
    for (i, j), g in zip(itertools.combinations(range(7), 2), gens):
        if g.is_zero():
            continue
        want = total - W.column(COLUMNS[i]) - W.column(COLUMNS[j])
        assert g.degree == want


def test_rank_one_minors_vanish():
    F = PrimeField(P)
    W = WeightMatrix.scroll((0,) * 5)
    x = [SparsePoly.variable(F, 7, i, W) for i in range(7)]
    c = x[5]
    rows = [[x[0], x[1]], [x[0] * c, x[1] * c]]
    assert _minor(rows, 0, 1).is_zero()


def test_delta_family9_degree():
    gens = transverse_delta_locus(make_instance(row(9), P, 1), 3)
    assert len(gens) == 2
    assert gens[1].degree == (2, 3)
    assert all(e[3] == e[4] == 0 for g in gens for e in g.terms)


def test_delta_family12_minors_among_full():
    inst = make_instance(row(12), P, 1)
    gens = transverse_delta_locus(inst, "2Locus")
    assert len(gens) == 4 and all(g.degree == (1, 3) for g in gens[1:])
    full = [g.restrict_zero((2, 3, 4)) for g in full_minor_ideal(inst)]
    for g in gens[1:]:
        assert any(g == h for h in full)


def test_delta_wrong_case():
    with pytest.raises(ValueError):
        transverse_delta_locus(make_instance(row(9), P, 1), 2)
    with pytest.raises(ValueError):
        transverse_delta_locus(make_instance(row(1), P, 1), 3)


@pytest.mark.parametrize("n", [9, 11, 12, 1])
def test_stratum_euler(n):
    inst = make_instance(row(n), P, 3)
    assert stratum_euler_check(inst, (3, 4))
    assert stratum_euler_check(inst, (2, 3, 4))


def test_chart_partition_whole_scroll():
    q = 7
    assert partition_point_count([], q) == (q + 1) * sum(q ** k for k in range(5))


def test_chart_partition_sub_scroll():
    F = PrimeField(P)
    W = WeightMatrix.scroll((0,) * 5)
    x = [SparsePoly.variable(F, 7, i, W) for i in range(7)]
    assert partition_point_count([x[3], x[4]], P) == (P + 1) * (P * P + P + 1)
    # products of coordinate hyperplanes: V(x4 x5) = V(x4) u V(x5)
    n4 = partition_point_count([x[3]], P)
    assert partition_point_count([x[3] * x[4]], P) == 2 * n4 - (P + 1) * (P * P + P + 1)


def test_affine_count_basic():
    F = PrimeField(5)
    W = WeightMatrix.scroll((0,) * 5)
    x0 = SparsePoly.variable(F, 7, 0, W).drop_variables([0, 1])
    assert affine_point_count([x0], 2, 5) == 5
    assert affine_point_count([], 3, 5) == 125


def test_chart_ids():
    assert len(CHARTS) == 10
    ideals = chart_ideals(full_minor_ideal(make_instance(row(1), P, 1)))
    assert [c.nvars for c in ideals] == [5, 4, 4, 3, 3, 2, 2, 1, 1, 0]


def test_smooth_family4_all_charts_unit():
    run = run_instance(row(4), P, 1)
    assert run.scheme.is_empty
    assert all(c.dim == -1 for c in run.scheme.charts)


def test_determinism():
    a, b = run_instance(row(11), P, 2), run_instance(row(11), P, 2)
    assert a.signature == b.signature
    assert a.scheme.points == b.scheme.points


def test_row11_points_on_locus():
    run = run_instance(row(11), P, 1)
    assert run.contained
    assert run.scheme.is_isolated
    pts = run.scheme.points
    assert pts and all(q[3] == q[4] == 0 for q in pts)
    assert run.delta_consistent is True
    assert run.scheme.distinct_point_count <= run.scheme.total_length


def test_report_rejects_rejected():
    with pytest.raises(ValueError):
        singularity_report(ScrollData(-1, (0, 0, 0, 0, 2)), P, (1,))


def test_report_structure():
    rep = singularity_report(row(12), P, (1, 2, 3))
    d = rep.as_dict()
    assert d["stable"] and d["contained_in_base_locus"]
    assert d["reference_expected"] == 2
    assert d["status"] in ("pass", "warn")
    assert len(d["runs"]) == 3
