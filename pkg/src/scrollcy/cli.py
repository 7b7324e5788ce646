"""Command line: classify | sing | hodge | euler | table | basis.

Every command prints one report envelope (JSON by default).  Exit codes:
0 all items pass, 10 warnings only, 20 at least one failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources

import jsonschema

from . import cayley, chern, classify, singular
from .algebra.basis import enumerate_basis
from .algebra.fields import is_prime
from .scroll import ScrollData, WeightMatrix

SCHEMA_VERSION = "report.v1"
EXIT_PASS, EXIT_WARN, EXIT_FAIL, EXIT_CONFIG = 0, 10, 20, 2
COMMANDS = ("classify", "sing", "hodge", "euler", "table", "basis")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    p_min: int = -6
    p_max: int = 6
    a_max: int = 4
    families: list = field(default_factory=list)
    primes: tuple = ()
    seeds: int = 3
    heavy: bool = False
    fmt: str = "json"
    out: str | None = None
    threads: int = 1
    fixture: list | None = None
    degree: tuple | None = None
    cayley: bool = False

    def args_echo(self) -> dict:
        return {"p_min": self.p_min, "p_max": self.p_max, "a_max": self.a_max,
                "families": [f.as_dict() for f in self.families], "primes": list(self.primes),
                "seeds": self.seeds, "heavy": self.heavy, "format": self.fmt,
                "degree": None if self.degree is None else list(self.degree), "cayley": self.cayley}


def parse_weights(text: str) -> tuple:
    text = text.strip()
    parts = text.split(",") if "," in text else list(text)
    try:
        return tuple(int(x) for x in parts)
    except ValueError:
        raise ConfigError(f"cannot parse weights {text!r}") from None


def _row_data(row: int, fixture) -> ScrollData:
    for r in fixture:
        if r["row"] == row:
            return ScrollData(r["p"], tuple(r["a"]))
    raise ConfigError(f"no row {row} in the fixture")


def _fixture_rows(fixture) -> list:
    return [ScrollData(r["p"], tuple(r["a"])) for r in sorted(fixture, key=lambda r: r["row"])]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scrollcy", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p-min", type=int, default=-6)
    ap.add_argument("--p-max", type=int, default=6)
    ap.add_argument("--a-max", type=int, default=4)
    ap.add_argument("--row", type=int, action="append", help="Table row (repeatable)")
    ap.add_argument("--p", type=int, help="explicit family: first grading of the quadric")
    ap.add_argument("--a", help="explicit family: weights, e.g. 00011 or 0,0,0,1,1")
    ap.add_argument("--prime", type=int, action="append", help="prime(s) for oracles")
    ap.add_argument("--seeds", type=int, default=None, help="number of random instances")
    ap.add_argument("--heavy", action="store_true")
    ap.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--out")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--fixture", help="override the reference table fixture JSON")
    ap.add_argument("--degree", help="basis: multidegree, e.g. 0,2 or 0,0,4")
    return ap


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.p_min > ns.p_max:
        raise ConfigError(f"empty box: p_min {ns.p_min} > p_max {ns.p_max}")
    if ns.a_max < 0:
        raise ConfigError("a_max must be non-negative")
    fixture = classify.load_fixture(ns.fixture) if ns.fixture else classify.table_fixture()
    fams = []
    for r in ns.row or []:
        fams.append(_row_data(r, fixture))
    if (ns.p is None) != (ns.a is None):
        raise ConfigError("--p and --a go together")
    if ns.p is not None:
        try:
            fams.append(ScrollData(ns.p, parse_weights(ns.a)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    primes = tuple(ns.prime or ())
    for q in primes:
        if q < 3 or not is_prime(q):
            raise ConfigError(f"{q} is not an odd prime")
    seeds = ns.seeds if ns.seeds is not None else (1 if ns.command == "table" else 3)
    if seeds < 1:
        raise ConfigError("seeds must be >= 1")
    threads = ns.threads if ns.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    degree = None
    if ns.degree is not None:
        degree = tuple(int(x) for x in ns.degree.split(","))
        if len(degree) not in (2, 3):
            raise ConfigError("degree needs 2 (scroll) or 3 (Cayley) entries")
    if ns.command == "basis" and degree is None:
        raise ConfigError("basis needs --degree")
    return RunConfig(ns.command, ns.p_min, ns.p_max, ns.a_max, fams, primes, seeds, ns.heavy, ns.fmt,
                     ns.out, threads, fixture, degree, degree is not None and len(degree) == 3)


# ------------------------------------------------------------------ commands

def _summary(items: list, notes=()) -> dict:
    out = {s: sum(1 for it in items if it["status"] == s) for s in ("pass", "warn", "fail")}
    if notes:
        out["notes"] = list(notes)
    return out


def envelope(cfg: RunConfig, items: list, notes=()) -> dict:
    env = {"schema_version": SCHEMA_VERSION,
           "command": {"name": cfg.command, "args": cfg.args_echo()},
           "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
           "items": items, "summary": _summary(items, notes)}
    # normalize tuples and keys so the envelope equals its own JSON
    return json.loads(json.dumps(env))


def _default_box(cfg: RunConfig) -> bool:
    want = {(r["p"], tuple(r["a"])) for r in cfg.fixture}
    return all(cfg.p_min <= p <= cfg.p_max and max(a) <= cfg.a_max for p, a in want)


def cmd_classify(cfg: RunConfig) -> dict:
    records = classify.enumerate_box(cfg.p_min, cfg.p_max, cfg.a_max, fixture=cfg.fixture)
    cmp = classify.compare_with_fixture(records, cfg.fixture, subset=not _default_box(cfg))
    wrong = {(x[0], tuple(x[1])) for x in cmp["extra"] + cmp["wrong_dims"]}
    items = []
    for r in records:
        bad = (r.data.p, r.data.a) in wrong
        items.append({"kind": "family", **r.as_dict(), "status": "fail" if bad else "pass"})
    items.append({"kind": "comparison", **cmp, "status": "pass" if cmp["ok"] else "fail"})
    return envelope(cfg, items)


def _sing_item(data: ScrollData, primes: tuple, seeds: tuple) -> dict:
    try:
        rep = singular.singularity_report(data, primes, seeds)
    except ValueError as exc:
        return {"kind": "singularity", "family": data.as_dict(), "table_row": None, "verdict": "Rejected",
                "primes": list(primes), "seeds": list(seeds), "aggregate": None, "stable": False,
                "contained_in_base_locus": None, "reference_expected": None, "match": None, "runs": [],
                "diagnostics": [str(exc)], "status": "fail"}
    return rep.as_dict()


def _map(cfg: RunConfig, fn, args: list) -> list:
    if cfg.threads > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.threads, len(args))) as ex:
            return list(ex.map(fn, *zip(*args)))
    return [fn(*a) for a in args]


def cmd_sing(cfg: RunConfig) -> dict:
    fams = cfg.families or _fixture_rows(cfg.fixture)
    primes = cfg.primes or (singular.DEFAULT_PRIME,)
    seeds = tuple(range(1, cfg.seeds + 1))
    items = _map(cfg, _sing_item, [(d, primes, seeds) for d in fams])
    return envelope(cfg, items)


def _hodge_item(data: ScrollData, cfg: RunConfig) -> dict:
    primes = cfg.primes or cayley.ARBITRATION_PRIMES
    base = {"kind": "hodge", "p": data.p, "a": list(data.a)}
    try:
        if cfg.heavy:
            res = cayley.hodge(data, primes, seeds=(1, 2))
        else:
            res = cayley.hodge_h30(data, primes, seeds=(1, 2))
    except cayley.NotSmoothFamily as exc:
        return base | {"status": "fail", "rejected": True, "reason": str(exc)}
    d = base | res.as_dict()
    ok = res.h30 == 1 and (res.chi_consistent is not False)
    return d | {"status": "pass" if ok else "fail"}


def cmd_hodge(cfg: RunConfig) -> dict:
    fams = cfg.families or _fixture_rows(cfg.fixture)[:7]
    return envelope(cfg, [_hodge_item(d, cfg) for d in fams])


def _euler_item(data: ScrollData) -> dict:
    rep = chern.cy_chern_classes(data)
    ok = rep.c1_vanishes and rep.routes_agree
    return {"kind": "euler", **rep.as_dict(), "status": "pass" if ok else "fail"}


def cmd_euler(cfg: RunConfig) -> dict:
    fams = cfg.families or _fixture_rows(cfg.fixture)
    return envelope(cfg, [_euler_item(d) for d in fams])


def cmd_table(cfg: RunConfig) -> dict:
    """classify + light singularity oracle + Chern numbers, row by row."""
    primes = cfg.primes or (singular.DEFAULT_PRIME,)
    seeds = tuple(range(1, cfg.seeds + 1))
    rows = sorted(cfg.fixture, key=lambda r: r["row"])
    if cfg.families:
        wanted = {(d.p, d.a) for d in cfg.families}
        rows = [r for r in rows if (r["p"], tuple(r["a"])) in wanted]
    fams = [ScrollData(r["p"], tuple(r["a"])) for r in rows]
    sings = _map(cfg, _sing_item, [(d, primes, seeds) for d in fams])
    items = []
    for r, d, s in zip(rows, fams, sings):
        rec = classify.classify_candidate(d, cfg.fixture)
        dims_ok = rec.is_family and rec.cell.as_tuple() == (r["dim_BQ"], r["dim_BC"])
        e = _euler_item(d)
        agg = s["aggregate"] or {}
        computed = agg.get("distinct_point_count") if agg.get("is_isolated") else None
        if not dims_ok or e["status"] == "fail":
            status = "fail"
        else:
            status = s["status"]
        items.append({
            "kind": "table_row", "row": r["row"], "p": d.p, "a": list(d.a),
            "classification": {"verdict": rec.verdict.value, "cell": list(rec.cell.as_tuple()),
                               "fixture_dims": [r["dim_BQ"], r["dim_BC"]], "ok": dims_ok},
            "singularity": {"reference_count": r["singular_points"], "dim": agg.get("dim"),
                            "length": agg.get("total_length"), "distinct": computed,
                            "stable": s["stable"], "contained": s["contained_in_base_locus"],
                            "status": s["status"]},
            "euler": {"chi": e["chi"], "c1_vanishes": e["c1_vanishes"]},
            "status": status})
    return envelope(cfg, items)


def cmd_basis(cfg: RunConfig) -> dict:
    fams = cfg.families or [ScrollData(0, (0,) * 5)]
    items = []
    for d in fams:
        W = WeightMatrix.cayley(d) if cfg.cayley else WeightMatrix.scroll(d.a)
        items.append({"kind": "basis", "p": d.p, "a": list(d.a), "ring": "cayley" if cfg.cayley else "scroll",
                      "degree": list(cfg.degree), "dim": enumerate_basis(W, cfg.degree).dim,
                      "status": "pass"})
    return envelope(cfg, items)


HANDLERS = {"classify": cmd_classify, "sing": cmd_sing, "hodge": cmd_hodge,
            "euler": cmd_euler, "table": cmd_table, "basis": cmd_basis}


# ----------------------------------------------------------------- output

def load_schema() -> dict:
    return json.loads(resources.files("scrollcy").joinpath("schema/report.v1.json").read_text())


def validate(env: dict) -> None:
    jsonschema.validate(env, load_schema())


def exit_code(env: dict) -> int:
    s = env["summary"]
    if s["fail"]:
        return EXIT_FAIL
    if s["warn"]:
        return EXIT_WARN
    return EXIT_PASS


def _flat(item: dict) -> dict:
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
            for k, v in item.items() if k != "runs"}


def to_csv(env: dict) -> str:
    rows = [_flat(it) for it in env["items"]]
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _text_line(it: dict) -> str:
    fam = it.get("family") or {"p": it.get("p"), "a": it.get("a")}
    who = f"p={fam['p']} a={''.join(map(str, fam['a']))}" if fam.get("a") is not None else ""
    bits = {
        "family": lambda: f"{it['verdict']} cell={tuple(it['cell'])} row={it['table_row']}",
        "comparison": lambda: f"matched={it['matched']} extra={it['extra']} missing={it['missing']}",
        "singularity": lambda: f"aggregate={it['aggregate']} stable={it['stable']} reference={it['reference_expected']}",
        "hodge": lambda: " ".join(f"{k}={it.get(k)}" for k in ("h30", "h21", "h12", "h03", "chi", "chi_chern")),
        "euler": lambda: f"chi={it['chi']} c1_vanishes={it['c1_vanishes']}",
        "table_row": lambda: f"row {it['row']}: {it['classification']['verdict']} sing={it['singularity']}",
        "basis": lambda: f"dim S_{tuple(it['degree'])} = {it['dim']}",
    }
    detail = bits[it["kind"]]() if "rejected" not in it else it.get("reason", "")
    return f"[{it['status'].upper():4}] {it['kind']:11} {who:14} {detail}"


def to_text(env: dict) -> str:
    lines = [_text_line(it) for it in env["items"]]
    s = env["summary"]
    lines.append(f"pass={s['pass']} warn={s['warn']} fail={s['fail']}")
    return "\n".join(lines) + "\n"


def render(env: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(env)
    if fmt == "text":
        return to_text(env)
    return json.dumps(env, indent=1, sort_keys=False) + "\n"


def run(argv=None) -> tuple[int, dict | None]:
    try:
        cfg = config_from_args(argv)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    env = HANDLERS[cfg.command](cfg)
    validate(env)
    text = render(env, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(env), env


def main(argv=None) -> int:
    try:
        return run(argv)[0]
    except SystemExit as exc:
        # argparse reports usage errors with status 2
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
