import json

import pytest
from hypothesis import given, strategies as st

from scrollcy.classify import (CaseCell, Verdict, boundedness_check, candidates, classify_candidate,
                               compare_with_fixture, enumerate_box, fixture_json, load_fixture,
                               table_fixture)
from scrollcy.scroll import ScrollData, base_loci

from conftest import ROWS, row


def test_row4_smooth():
    r = classify_candidate(row(4))
    assert r.verdict is Verdict.SMOOTH_BPF and r.table_row == 4


def test_row9_three_locus():
    r = classify_candidate(row(9))
    assert r.verdict is Verdict.SINGULAR_3LOCUS
    assert r.predicted_sing["reference_count"] == 6
    assert r.predicted_sing["locus"] == "V(x4,x5)"


def test_row12_two_locus():
    r = classify_candidate(row(12))
    assert r.verdict is Verdict.SINGULAR_2LOCUS
    assert r.predicted_sing["reference_count"] == 2
    assert r.cell.as_tuple() == (2, -1)


def test_rejected_example():
    r = classify_candidate(ScrollData(-1, (0, 0, 0, 0, 2)))
    assert r.verdict is Verdict.REJECTED
    assert "reducible" in r.reason


def test_default_box_matches_fixture():
    recs = enumerate_box()
    assert [r.table_row for r in recs] == list(range(1, 13))
    cmp = compare_with_fixture(recs)
    assert cmp["ok"] and cmp["matched"] == 12
    verdicts = [r.verdict for r in recs]
    assert verdicts.count(Verdict.SMOOTH_BPF) == 7
    assert verdicts.count(Verdict.SINGULAR_3LOCUS) == 4
    assert verdicts.count(Verdict.SINGULAR_2LOCUS) == 1


def test_small_boxes():
    assert [r.table_row for r in enumerate_box(0, 2, 2)] == list(range(1, 8))
    assert [r.table_row for r in enumerate_box(0, 0, 0)] == [1]
    assert compare_with_fixture(enumerate_box(0, 2, 2), subset=True)["ok"]
    assert not compare_with_fixture(enumerate_box(0, 2, 2))["ok"]


def test_bad_box():
    with pytest.raises(ValueError):
        list(candidates(2, 1, 3))
    with pytest.raises(ValueError):
        list(candidates(0, 1, -1))


def test_boundedness():
    assert boundedness_check() == []


def test_symmetric_cells_flagged():
    recs = enumerate_box(include_oracle=True)
    swapped = sorted((r.data.p, r.data.a) for r in recs if r.roles_exchanged and r.predicates
                     and r.verdict is Verdict.NEEDS_ORACLE)
    # the mirrors of rows 9-12 under p -> 2 - p - sum(a)
    assert swapped == [(0, (0, 0, 0, 1, 2)), (0, (0, 0, 0, 2, 2)), (0, (0, 0, 1, 1, 1)), (1, (0, 0, 0, 1, 1))]
    for p, a in swapped:
        mirror = ScrollData(2 - p - sum(a), a)
        assert classify_candidate(mirror).is_family


@given(st.integers(-6, 6), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_smooth_iff_bpf(p, rest):
    d = ScrollData(p, (0,) + tuple(sorted(rest)))
    r = classify_candidate(d)
    bpf = p >= 0 and 2 - p - d.sum_a >= 0
    assert (r.verdict is Verdict.SMOOTH_BPF) == bpf
    assert classify_candidate(d) == r


@given(st.integers(-6, 6), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_cell_from_base_loci(p, rest):
    d = ScrollData(p, (0,) + tuple(sorted(rest)))
    r = classify_candidate(d)
    bq, bc = base_loci(d)
    if not (bq.no_sections or bc.no_sections):
        assert r.cell.as_tuple() == (bq.dim, bc.dim)


def test_cell_validation():
    with pytest.raises(AssertionError):
        CaseCell(0, -1)
    assert CaseCell(3, -1).swapped() == CaseCell(-1, 3)
    assert CaseCell(-1, 2).symmetric


def test_fixture_contents():
    fx = {r["row"]: r for r in table_fixture()}
    assert (fx[8]["p"], tuple(fx[8]["a"]), fx[8]["dim_BQ"], fx[8]["singular_points"]) == (-3, (0, 0, 1, 2, 2), 3, 0)
    assert fx[11]["singular_points"] == 6
    assert fx[5]["singular_points"] == 0 and fx[5]["dim_BQ"] == -1
    assert {r: (fx[r]["p"], tuple(fx[r]["a"])) for r in fx} == ROWS


def test_shipped_fixture_roundtrip(tmp_path):
    assert load_fixture() == table_fixture()
    path = tmp_path / "t.json"
    path.write_text(fixture_json())
    assert load_fixture(path) == table_fixture()
    path.write_text(json.dumps(table_fixture()))
    assert load_fixture(path) == table_fixture()


def test_record_json():
    d = classify_candidate(row(10)).as_dict()
    assert json.loads(json.dumps(d)) == d
    assert d["verdict"] == "SingularCandidate3Locus"
