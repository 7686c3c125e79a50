import csv
import io
import json
from dataclasses import replace

import pytest

from jobshop.bench import (
    REFERENCE,
    SUITES,
    SummaryRow,
    compare_to_reference,
    emit_table,
    run_suite,
    summarize,
    summary_table,
)
from jobshop.bfo import BfoParams, RunResult
from jobshop.errors import InvalidParameter, MissingReference
from jobshop.hbfo import HbfoParams
from jobshop.instance import load_builtin

FAST = HbfoParams(bfo=BfoParams(population=4, chemotactic_steps=3, reproductions=2, dispersals=1))


def test_reference_rows():
    kinds = [r.reference_kind for r in REFERENCE.values()]
    assert len(REFERENCE) == 21 and kinds.count("IBFO") == 10 and kinds.count("OPTIMAL") == 11
    assert all(r.hbfo_published <= r.bfo_published for r in REFERENCE.values())
    assert all(r.reference <= r.hbfo_published for r in REFERENCE.values() if r.reference_kind == "OPTIMAL")
    assert REFERENCE["ABZ9"].reference == 707 and REFERENCE["ABZ9"].reference_kind == "OPTIMAL"
    assert (REFERENCE["LA01"].bfo_published, REFERENCE["LA01"].hbfo_published, REFERENCE["LA01"].reference) == (694, 693, 666)
    assert (REFERENCE["ABZ5"].bfo_published, REFERENCE["ABZ5"].hbfo_published, REFERENCE["ABZ5"].reference) == (1323, 1321, 1234)
    for name, row in REFERENCE.items():
        inst = load_builtin(name)
        assert (inst.n_jobs, inst.n_machines) == row.size


def test_suites_cover_reference():
    assert sorted(n for s in SUITES.values() for n in s) == sorted(REFERENCE)
    assert len(SUITES["la-small"]) == 10


def test_trivial_suite(tiny1):
    rows = run_suite([tiny1], ["bfo", "hbfo"], runs=3, params=FAST, budget=100)
    assert len(rows) == 2
    for r in rows:
        assert r.best == r.mean == 5 and r.std == 0 and r.runs == 3


def test_suite_determinism_and_records(pinned3x3):
    buf = io.StringIO()
    a = run_suite([pinned3x3], ["bfo", "hbfo"], runs=3, base_seed=5, params=FAST, budget=300, records=buf)
    b = run_suite([pinned3x3], ["bfo", "hbfo"], runs=3, base_seed=5, params=FAST, budget=300)
    assert [replace(r, mean_wall_time=0) for r in a] == [replace(r, mean_wall_time=0) for r in b]
    recs = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert [(r["algo"], r["seed"]) for r in recs] == [(a, s) for a in ("bfo", "hbfo") for s in (5, 6, 7)]
    assert all(r["budget"] == 300 and r["evaluations"] <= 300 for r in recs)
    again = summarize([RunResult(**{k: v for k, v in r.items() if k != "budget"}) for r in recs[:3]], 300)
    assert again.best == a[0].best and again.mean == a[0].mean and again.std == a[0].std


def test_workers_do_not_change_results(pinned3x3):
    one = run_suite([pinned3x3], ["bfo", "hbfo"], runs=2, params=FAST, budget=200)
    two = run_suite([pinned3x3], ["bfo", "hbfo"], runs=2, params=FAST, budget=200, workers=2)
    strip = lambda rows: [replace(r, mean_wall_time=0) for r in rows]
    assert strip(one) == strip(two)


def test_bad_arguments(tiny1):
    with pytest.raises(InvalidParameter):
        run_suite([tiny1], ["bfo"], runs=0)
    with pytest.raises(InvalidParameter):
        run_suite([tiny1], ["ga"], runs=1)


def row(instance, algo, best):
    return SummaryRow(instance, algo, 1, best, best, 0.0, 1.0, 0.0)


def test_gap_arithmetic():
    cmp = compare_to_reference([row("LA01", "hbfo", 690), row("LA05", "hbfo", 593), row("LA05", "bfo", 600)])
    la01, la05 = cmp
    assert f"{100 * la01.gap_hbfo:+.2f}%" == "+3.60%"
    assert la05.gap_hbfo == 0.0 and la05.bfo == 600
    assert la01.bfo is None and la01.gap_bfo is None
    assert not la01.flag
    assert compare_to_reference([row("LA01", "hbfo", 695)])[0].flag
    with pytest.raises(MissingReference):
        compare_to_reference([row("FT10", "hbfo", 930)])


def test_emit_formats():
    cmp = compare_to_reference([row("LA01", "hbfo", 690), row("LA01", "bfo", 700)])
    text = emit_table(cmp, "csv")
    lines = text.split("\n")
    assert len(lines) == 3 and lines[2] == "" and "\r" not in text
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert parsed == [{
        "INSTANCE": "LA01", "SIZE": "10x5", "BFO": "694", "HBFO": "693", "REFERENCE": "666", "KIND": "IBFO",
        "OUR_BFO": "700", "OUR_HBFO": "690", "GAP_BFO": "+5.11%", "GAP_HBFO": "+3.60%", "FLAG": "",
    }]
    md = emit_table(cmp, "markdown").splitlines()
    assert md[0].startswith("| INSTANCE | SIZE | BFO | HBFO | REFERENCE |")
    assert json.loads(emit_table(cmp, "json"))[0]["hbfo"] == 690
    assert emit_table(cmp, "csv") == text


def test_summary_table():
    text = summary_table([row("X", "bfo", 5), row("X", "hbfo", 4)])
    assert text.splitlines()[0].startswith("instance,algo,runs,best")
    assert len(text.splitlines()) == 3
