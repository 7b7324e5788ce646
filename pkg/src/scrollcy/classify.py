"""Case-grid classification of quadric-cubic data (p; a) on fivefold scrolls.

Each candidate gets a cell (dim B_Q, dim B_C) from the two base loci and a
verdict.  The base-point-free cell yields smooth families; the cells (2, -1)
and (3, -1) are filtered by coefficient-presence inequalities; every other
reachable mixed cell is left to the singularity oracle.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .scroll import ScrollData, base_loci


class Verdict(str, Enum):
    SMOOTH_BPF = "SmoothBPF"
    SINGULAR_2LOCUS = "SingularCandidate2Locus"
    SINGULAR_3LOCUS = "SingularCandidate3Locus"
    NEEDS_ORACLE = "NeedsOracle"
    REJECTED = "Rejected"


FAMILY_VERDICTS = (Verdict.SMOOTH_BPF, Verdict.SINGULAR_2LOCUS, Verdict.SINGULAR_3LOCUS)


@dataclass(frozen=True)
class CaseCell:
    dim_BQ: int
    dim_BC: int

    def __post_init__(self):
        for d in (self.dim_BQ, self.dim_BC):
            if d == 0:
                raise AssertionError("0-dimensional base locus is unreachable")
            if not -1 <= d <= 4:
                raise ValueError(f"base-locus dimension {d} out of range")

    @property
    def symmetric(self) -> bool:
        """Cells where the cubic system carries the larger base locus."""
        return self.dim_BQ < self.dim_BC

    def swapped(self) -> "CaseCell":
        return CaseCell(self.dim_BC, self.dim_BQ)

    def as_tuple(self) -> tuple:
        return (self.dim_BQ, self.dim_BC)


@dataclass(frozen=True)
class FamilyRecord:
    data: ScrollData
    cell: CaseCell
    verdict: Verdict
    reason: str = ""
    predicted_sing: dict | None = None
    table_row: int | None = None
    roles_exchanged: bool = False
    predicates: dict = field(default_factory=dict)

    @property
    def is_family(self) -> bool:
        return self.verdict in FAMILY_VERDICTS

    def as_dict(self) -> dict:
        return {
            "p": self.data.p, "a": list(self.data.a),
            "cell": list(self.cell.as_tuple()),
            "verdict": self.verdict.value, "reason": self.reason,
            "predicted_sing": self.predicted_sing, "table_row": self.table_row,
            "roles_exchanged": self.roles_exchanged,
            "predicates": dict(self.predicates),
        }


# ------------------------------------------------------------ predicates
#
# The inequalities below are written with L the first grading of the system
# that carries the base locus and O that of the other one.  For the quadric
# carrying the locus (L = p, O = 2 - p - sum a, a1 = 0) they read literally
#   p + 2a2 < 0, p + 2a3 >= 0, 2 - p - a2 - a3 - a4 - a5 >= 0        (2-locus)
#   p + a2 + a4 >= 0, 2 - p - a2 - a3 - a4 >= 0
#   p + 2a3 < 0, p + 2a4 >= 0, 2 - p - a2 - a3 - a4 - a5 >= 0        (3-locus)
#   p + a3 + a4 >= 0, 2 - p - a2 + a3 - a5 >= 0

def irreducibility(data: ScrollData) -> bool:
    """Both systems have a pure power of x4 (dim of each base locus <= 3)."""
    a4 = data.a[3]
    return data.deg_Q[0] + 2 * a4 >= 0 and data.deg_C[0] + 3 * a4 >= 0


def both_bpf(data: ScrollData) -> bool:
    return data.p >= 0 and 2 - data.p - data.sum_a >= 0


def two_locus_presence(L: int, O: int, a) -> bool:
    _, a2, a3, _, _ = a
    return L + 2 * a2 < 0 and L + 2 * a3 >= 0 and O >= 0


def two_locus_transverse(L: int, O: int, a) -> bool:
    _, a2, _, a4, a5 = a
    return L + a2 + a4 >= 0 and O + a5 >= 0


def three_locus_presence(L: int, O: int, a) -> bool:
    _, _, a3, a4, _ = a
    return L + 2 * a3 < 0 and L + 2 * a4 >= 0 and O >= 0


def three_locus_transverse(L: int, O: int, a) -> bool:
    _, _, a3, a4, _ = a
    return L + a3 + a4 >= 0 and O + 2 * a3 + a4 >= 0


def _cell_predicates(kind: int, L: int, O: int, a) -> dict:
    if kind == 2:
        return {"b1bpf0b1": two_locus_presence(L, O, a), "thfold2": two_locus_transverse(L, O, a)}
    return {"b1bpf0b": three_locus_presence(L, O, a), "bineq41cia": three_locus_transverse(L, O, a)}


# ------------------------------------------------------------ fixture

TABLE1 = [
    # row, p, a, (dim B_Q, dim B_C), singular points claimed
    (1, 0, (0, 0, 0, 0, 0), (-1, -1), 0),
    (2, 0, (0, 0, 0, 0, 1), (-1, -1), 0),
    (3, 0, (0, 0, 0, 0, 2), (-1, -1), 0),
    (4, 0, (0, 0, 0, 1, 1), (-1, -1), 0),
    (5, 1, (0, 0, 0, 0, 0), (-1, -1), 0),
    (6, 1, (0, 0, 0, 0, 1), (-1, -1), 0),
    (7, 2, (0, 0, 0, 0, 0), (-1, -1), 0),
    (8, -3, (0, 0, 1, 2, 2), (3, -1), 0),
    (9, -2, (0, 0, 0, 2, 2), (3, -1), 6),
    (10, -1, (0, 0, 0, 1, 1), (3, -1), 0),
    (11, -1, (0, 0, 0, 1, 2), (3, -1), 6),
    (12, -1, (0, 0, 1, 1, 1), (2, -1), 2),
]


def _fixture_row(row, p, a, dims, count) -> dict:
    smooth = dims == (-1, -1)
    return {
        "row": row, "p": p, "a": list(a),
        "dim_BQ": dims[0], "dim_BC": dims[1],
        # printed table attaches the locus to the other divisor label
        "printed_dims": {"D1": dims[1], "D2": dims[0]},
        "singular_points": count,
        "claim": "smooth, base-point free" if smooth else (
            "nonsingular" if count == 0 else f"{count} isolated singular points on B_Q"),
    }


def table_fixture() -> list[dict]:
    """The 12 expected rows, embedded."""
    return [_fixture_row(*r) for r in TABLE1]


def load_fixture(path: str | Path | None = None) -> list[dict]:
    """Fixture rows from a JSON file, or the shipped resource when path is None."""
    if path is None:
        text = resources.files("scrollcy").joinpath("fixtures/table1.json").read_text()
    else:
        text = Path(path).read_text()
    rows = json.loads(text)
    if isinstance(rows, dict):
        rows = rows["rows"]
    return rows


def _row_lookup(fixture) -> dict:
    return {(r["p"], tuple(r["a"])): r for r in fixture}


_EMBEDDED = _row_lookup(table_fixture())


# ------------------------------------------------------------ classifier

def _locus_text(k: int) -> str:
    return "V(" + ",".join(f"x{j}" for j in range(k, 6)) + ")"


def classify_candidate(data: ScrollData, fixture=None) -> FamilyRecord:
    lookup = _EMBEDDED if fixture is None else _row_lookup(fixture)
    bq, bc = base_loci(data)
    if bq.no_sections or bc.no_sections:
        cell = CaseCell(min(bq.dim, 4), min(bc.dim, 4))
        return FamilyRecord(data, cell, Verdict.REJECTED, "empty linear system")
    cell = CaseCell(bq.dim, bc.dim)
    fx = lookup.get((data.p, data.a))
    row = fx["row"] if fx else None

    def rec(verdict, reason, **kw):
        return FamilyRecord(data, cell, verdict, reason, table_row=row if verdict in FAMILY_VERDICTS else None, **kw)

    if not irreducibility(data):
        return rec(Verdict.REJECTED, "base locus of dimension 4: f1 or f2 reducible")
    if bq.empty and bc.empty:
        return rec(Verdict.SMOOTH_BPF, "both systems base-point free",
                   predicted_sing={"locus": "empty", "reference_count": 0})
    if cell.dim_BQ == cell.dim_BC:
        return rec(Verdict.REJECTED, "equal positive base-locus dimensions: singular along a curve")

    exchanged = cell.symmetric
    eff = cell.swapped() if exchanged else cell
    L, O = (data.deg_C[0], data.deg_Q[0]) if exchanged else (data.deg_Q[0], data.deg_C[0])
    if eff.dim_BC == -1 and eff.dim_BQ in (2, 3):
        kind = eff.dim_BQ
        preds = _cell_predicates(kind, L, O, data.a)
        if not all(preds.values()):
            failed = ",".join(k for k, v in preds.items() if not v)
            return rec(Verdict.REJECTED, f"cell {cell.as_tuple()}: fails {failed}",
                       predicates=preds, roles_exchanged=exchanged)
        if exchanged:
            return rec(Verdict.NEEDS_ORACLE,
                       f"symmetric cell {cell.as_tuple()} passes the exchanged predicates",
                       predicates=preds, roles_exchanged=True)
        locus = bq if not exchanged else bc
        sing = {"locus": _locus_text(locus.k), "locus_dim": locus.dim,
                "reference_count": fx["singular_points"] if fx else None}
        verdict = Verdict.SINGULAR_2LOCUS if kind == 2 else Verdict.SINGULAR_3LOCUS
        return rec(verdict, f"cell {cell.as_tuple()}: predicates hold", predicted_sing=sing, predicates=preds)
    return rec(Verdict.NEEDS_ORACLE, f"mixed cell {cell.as_tuple()} has no predicate set",
               roles_exchanged=exchanged)


def candidates(p_min: int, p_max: int, a_max: int):
    """All (p; 0, a2..a5) in the box, ordered by a then p."""
    if p_min > p_max:
        raise ValueError("p_min > p_max")
    if a_max < 0:
        raise ValueError("a_max must be non-negative")
    for tail in itertools.combinations_with_replacement(range(a_max + 1), 4):
        for p in range(p_min, p_max + 1):
            yield ScrollData(p, (0,) + tail)


def _order_key(r: FamilyRecord):
    return (r.table_row is None, r.table_row or 0, r.data.a, r.data.p)


def enumerate_box(p_min: int = -6, p_max: int = 6, a_max: int = 4,
                  include_oracle: bool = False, fixture=None) -> list[FamilyRecord]:
    """Family records in the box, Table rows first.

    NeedsOracle records are returned only with ``include_oracle``; they are
    not families until the singularity oracle has looked at them.
    """
    out = []
    for data in candidates(p_min, p_max, a_max):
        r = classify_candidate(data, fixture)
        if r.is_family or (include_oracle and r.verdict is Verdict.NEEDS_ORACLE):
            out.append(r)
    return sorted(out, key=_order_key)


def compare_with_fixture(records, fixture=None, subset: bool = False) -> dict:
    """Match family records against the fixture on (p, a, dims).

    With ``subset`` only rows inside the searched box are expected.
    """
    fixture = fixture if fixture is not None else table_fixture()
    got = {(r.data.p, r.data.a): r for r in records if r.is_family}
    want = _row_lookup(fixture)
    extra = sorted(k for k in got if k not in want)
    missing = sorted(k for k in want if k not in got)
    if subset:
        missing = []
    wrong_dims = []
    for k, r in got.items():
        if k in want:
            w = want[k]
            if r.cell.as_tuple() != (w["dim_BQ"], w["dim_BC"]):
                wrong_dims.append(k)
    return {"ok": not (extra or missing or wrong_dims), "matched": len(got) - len(extra),
            "extra": [list(x) for x in extra], "missing": [list(x) for x in missing],
            "wrong_dims": [list(x) for x in wrong_dims]}


def boundedness_check(p_min: int = -10, p_max: int = 10, a_max: int = 6) -> list[FamilyRecord]:
    """Family records of the enlarged box that the default box does not contain."""
    base = {(r.data.p, r.data.a) for r in enumerate_box()}
    return [r for r in enumerate_box(p_min, p_max, a_max) if (r.data.p, r.data.a) not in base]


def fixture_json(fixture=None) -> str:
    return json.dumps({"rows": fixture or table_fixture()}, indent=1) + "\n"
