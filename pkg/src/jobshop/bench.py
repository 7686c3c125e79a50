"""Seeded benchmark suites and comparison against published results.

A suite run executes ``runs`` seeded repetitions per (instance, algorithm),
writes one JSON line per run, then reduces the runs to summary rows. Output
order is always (instance, algo, seed), whatever order workers finish in.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from statistics import mean, pstdev

from .bfo import RunResult, run_bfo
from .errors import InvalidParameter, MissingReference
from .hbfo import HbfoParams, run_hbfo
from .instance import JsspInstance, load_builtin

ALGOS = ("bfo", "hbfo")
DEFAULT_BUDGET = 20_000


@dataclass(frozen=True)
class ReferenceRow:
    instance: str
    size: tuple[int, int]
    bfo_published: int
    hbfo_published: int
    reference: int
    reference_kind: str  # "IBFO" or "OPTIMAL", as printed with the table


def _rows(kind, text):
    out = {}
    for line in text.strip().splitlines():
        name, n, m, bfo, hbfo, ref = line.split()
        out[name] = ReferenceRow(name, (int(n), int(m)), int(bfo), int(hbfo), int(ref), kind)
    return out


# Published makespans, verbatim. Lawrence 10x5/15x5 rows compare against IBFO,
# the larger ones against the optimum column printed next to them.
REFERENCE: dict[str, ReferenceRow] = {
    **_rows("IBFO", """
        LA01 10 5 694 693 666
        LA02 10 5 692 683 668
        LA03 10 5 639 634 617
        LA04 10 5 641 624 604
        LA05 10 5 593 593 593
        LA06 15 5 926 926 926
        LA07 15 5 923 903 890
        LA08 15 5 877 873 863
        LA09 15 5 954 951 951
        LA10 15 5 958 958 958
    """),
    **_rows("OPTIMAL", """
        ABZ7 20 15 787 784 668
        ABZ8 20 15 822 792 687
        ABZ9 20 15 856 840 707
        LA27 20 10 1455 1446 1269
        LA29 20 10 1409 1390 1195
        ABZ5 10 10 1323 1321 1234
        ABZ6 10 10 1012 979 943
        LA19 10 10 926 894 842
        LA21 15 10 1247 1207 1053
        LA24 15 10 1102 1102 935
        LA25 15 10 1147 1131 977
    """),
}

SUITES = {
    "la-small": [f"LA{i:02d}" for i in range(1, 11)],
    "table3": ["ABZ7", "ABZ8", "ABZ9", "LA27", "LA29"],
    "table4": ["ABZ5", "ABZ6", "LA19", "LA21", "LA24", "LA25"],
}


@dataclass(frozen=True)
class SummaryRow:
    instance: str
    algo: str
    runs: int
    best: int
    mean: float
    std: float
    mean_evaluations: float
    mean_wall_time: float
    budget: int | None = None


@dataclass(frozen=True)
class ComparisonRow:
    instance: str
    size: tuple[int, int]
    bfo_published: int
    hbfo_published: int
    reference: int
    reference_kind: str
    bfo: int | None
    hbfo: int | None
    gap_bfo: float | None
    gap_hbfo: float | None
    # our HBFO best is worse than the published BFO value
    flag: bool


def resolve(name_or_instance) -> JsspInstance:
    if isinstance(name_or_instance, JsspInstance):
        return name_or_instance
    return load_builtin(name_or_instance)


def solve(instance: JsspInstance, algo: str, params: HbfoParams, seed: int) -> RunResult:
    params = params.with_seed(seed)
    if algo == "bfo":
        return run_bfo(instance, params.bfo)
    if algo == "hbfo":
        return run_hbfo(instance, params)
    raise InvalidParameter(f"unknown algorithm {algo!r}; expected one of {ALGOS}")


def _task(args):
    instance, algo, params, seed = args
    return solve(instance, algo, params, seed)


def summarize(results: list[RunResult], budget=None) -> SummaryRow:
    spans = [r.best_makespan for r in results]
    return SummaryRow(
        instance=results[0].instance,
        algo=results[0].algo,
        runs=len(results),
        best=min(spans),
        mean=mean(spans),
        std=pstdev(spans),
        mean_evaluations=mean(r.evaluations for r in results),
        mean_wall_time=mean(r.wall_time for r in results),
        budget=budget,
    )


def run_suite(
    instances,
    algos=ALGOS,
    runs: int = 10,
    base_seed: int = 0,
    params: HbfoParams | None = None,
    budget: int | None = DEFAULT_BUDGET,
    workers: int = 1,
    records=None,
) -> list[SummaryRow]:
    """Seeded repetitions of every (instance, algo) pair, reduced to summaries.

    ``budget`` caps decodes per run for both algorithms alike; None keeps the
    loop counts of ``params``. ``records`` is a writable text stream that gets
    one JSON line per run.
    """
    if runs < 1:
        raise InvalidParameter(f"runs must be >= 1, got {runs}")
    for a in algos:
        if a not in ALGOS:
            raise InvalidParameter(f"unknown algorithm {a!r}; expected one of {ALGOS}")
    params = params or HbfoParams()
    if budget is not None:
        params = replace(params, bfo=replace(params.bfo, max_evaluations=budget))
    budget = params.bfo.max_evaluations
    resolved = [resolve(x) for x in instances]
    tasks = [(inst, a, params, base_seed + k) for inst in resolved for a in algos for k in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    if records is not None:
        for r in results:
            rec = r.to_dict()
            rec["budget"] = budget
            records.write(json.dumps(rec, sort_keys=True) + "\n")
    return [summarize(results[i : i + runs], budget) for i in range(0, len(results), runs)]


def _gap(best, ref):
    return None if best is None else (best - ref) / ref


def compare_to_reference(summary: list[SummaryRow]) -> list[ComparisonRow]:
    best: dict[str, dict[str, int]] = {}
    for row in summary:
        if row.instance not in REFERENCE:
            raise MissingReference(row.instance)
        best.setdefault(row.instance, {})[row.algo] = row.best
    out = []
    for name, ours in best.items():
        ref = REFERENCE[name]
        b, h = ours.get("bfo"), ours.get("hbfo")
        out.append(ComparisonRow(
            instance=name,
            size=ref.size,
            bfo_published=ref.bfo_published,
            hbfo_published=ref.hbfo_published,
            reference=ref.reference,
            reference_kind=ref.reference_kind,
            bfo=b,
            hbfo=h,
            gap_bfo=_gap(b, ref.reference),
            gap_hbfo=_gap(h, ref.reference),
            flag=h is not None and h > ref.bfo_published,
        ))
    return out


COLUMNS = ["INSTANCE", "SIZE", "BFO", "HBFO", "REFERENCE", "KIND", "OUR_BFO", "OUR_HBFO", "GAP_BFO", "GAP_HBFO", "FLAG"]


def _cells(row: ComparisonRow) -> list[str]:
    def pct(g):
        return "" if g is None else f"{100 * g:+.2f}%"

    return [
        row.instance,
        f"{row.size[0]}x{row.size[1]}",
        str(row.bfo_published),
        str(row.hbfo_published),
        str(row.reference),
        row.reference_kind,
        "" if row.bfo is None else str(row.bfo),
        "" if row.hbfo is None else str(row.hbfo),
        pct(row.gap_bfo),
        pct(row.gap_hbfo),
        "*" if row.flag else "",
    ]


def emit_table(comparison: list[ComparisonRow], format: str = "csv") -> str:
    """Render a comparison; byte-stable for fixed input."""
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(_cells(r) for r in comparison)
        return buf.getvalue()
    if format == "markdown":
        lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        lines += ["| " + " | ".join(_cells(r)) + " |" for r in comparison]
        return "\n".join(lines) + "\n"
    if format == "json":
        return json.dumps([asdict(r) for r in comparison], sort_keys=True, indent=1) + "\n"
    raise InvalidParameter(f"unknown table format {format!r}")


def summary_table(summary: list[SummaryRow], format: str = "csv") -> str:
    """Plain per-(instance, algo) statistics, for instances without a reference row."""
    fields = ["instance", "algo", "runs", "best", "mean", "std", "mean_evaluations", "budget"]
    rows = [[getattr(s, f) for f in fields] for s in summary]
    if format == "json":
        return json.dumps([dict(zip(fields, r)) for r in rows], sort_keys=True, indent=1) + "\n"
    if format == "markdown":
        lines = ["| " + " | ".join(fields) + " |", "|" + "---|" * len(fields)]
        lines += ["| " + " | ".join(map(str, r)) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    w.writerows(rows)
    return buf.getvalue()
