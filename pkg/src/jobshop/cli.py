"""Command-line front end: ``jobshop solve | bench | oracle``.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
instance, unknown instance name, oracle refusing a large instance).

Every output starts with ``#`` header lines that echo the effective
parameters. The wall-clock line goes to stderr, marked ``# timing``, so
stdout is byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import fields
from pathlib import Path

from . import __version__, bench
from .bfo import BfoParams, run_bfo
from .errors import InstanceFormatError, InvalidParameter, IoError, JobShopError, TooLarge, UnknownInstance
from .gantt import emit_gantt
from .hbfo import TUMBLES, HbfoParams, SwarmingParams, run_hbfo
from .instance import load_builtin, read_instance
from .pheromone import LAYOUTS, AcoParams
from .schedule import brute_force_optimal, count_sequences, decode

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# Overridable parameter fields, by group. seed and the budget have their own flags.
GROUPS = {
    "bfo": [f for f in fields(BfoParams) if f.name not in ("seed", "max_evaluations")],
    "aco": list(fields(AcoParams)),
    "swarming": list(fields(SwarmingParams)),
}
TOP_LEVEL = ("layout", "tumble", "swarming", "budget")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _convert(field, text: str):
    kind = field.type if isinstance(field.type, str) else field.type.__name__
    try:
        if kind.startswith("bool"):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
    except ValueError:
        raise UsageError(f"bad value for {field.name}: {text!r}") from None
    return text


def read_config(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_params(overrides: dict[str, str], seed: int) -> HbfoParams:
    """Merge string overrides into the defaults; every invariant is checked here."""
    known = {f.name: (g, f) for g, fs in GROUPS.items() for f in fs}
    unknown = sorted(set(overrides) - set(known) - set(TOP_LEVEL))
    if unknown:
        raise UsageError(f"unknown parameter(s): {', '.join(unknown)}")
    values: dict[str, dict] = {g: {} for g in GROUPS}
    for key, text in overrides.items():
        if key in known:
            g, f = known[key]
            values[g][f.name] = _convert(f, text)
    budget = overrides.get("budget")
    if budget is not None and budget.lower() != "none":
        try:
            values["bfo"]["max_evaluations"] = int(budget)
        except ValueError:
            raise UsageError(f"bad value for budget: {budget!r}") from None
    swarming_on = values["swarming"] or overrides.get("swarming", "off").lower() in ("1", "true", "yes", "on")
    try:
        return HbfoParams(
            bfo=BfoParams(seed=seed, **values["bfo"]),
            aco=AcoParams(**values["aco"]),
            swarming=SwarmingParams(**values["swarming"]) if swarming_on else None,
            layout=overrides.get("layout", "position"),
            tumble=overrides.get("tumble", "swap"),
        )
    except InvalidParameter as e:
        raise UsageError(str(e)) from e


def header(params: HbfoParams, **extra) -> list[str]:
    def kv(obj, skip=()):
        return " ".join(f"{f.name}={getattr(obj, f.name)}" for f in fields(obj) if f.name not in skip)

    lines = ["# " + " ".join(f"{k}={v}" for k, v in extra.items())]
    lines.append("# bfo: " + kv(params.bfo, skip=("seed",)))
    lines.append("# aco: " + kv(params.aco))
    sw = "off" if params.swarming is None else kv(params.swarming)
    lines.append(f"# hbfo: layout={params.layout} tumble={params.tumble} swarming={sw}")
    return lines


def _add_param_flags(p):
    g = p.add_argument_group("parameters (override --config)")
    for group in GROUPS.values():
        for f in group:
            g.add_argument("--" + f.name.replace("_", "-"), dest=f"p_{f.name}", metavar=f.name.upper())
    g.add_argument("--layout", dest="p_layout", choices=LAYOUTS)
    g.add_argument("--tumble", dest="p_tumble", choices=TUMBLES)
    g.add_argument("--swarming", dest="p_swarming", action="store_const", const="on", help="enable the cell-to-cell term")
    p.add_argument("--config", help="key=value parameter file")


def _add_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help="built-in instance name, e.g. LA05")
    src.add_argument("--file", help="instance file in OR-Library format")


def make_parser() -> Parser:
    parser = Parser(prog="jobshop", description="Bacterial foraging and hybrid ant/bacterial job-shop solvers.")
    parser.add_argument("--version", action="version", version=f"jobshop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("solve", help="solve one instance")
    _add_source(s)
    s.add_argument("--algo", choices=bench.ALGOS, default="hbfo")
    s.add_argument("--seed", type=int)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--budget", dest="p_budget", help="decode ceiling per run, or 'none' (default)")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--dump-schedule", metavar="PATH", help="write the best schedule as JSON")
    s.add_argument("--dump-pheromone", metavar="PATH", help="write the final pheromone matrix of the best run as CSV")
    s.add_argument("--gantt", metavar="PATH", help="write an SVG Gantt chart of the best schedule")
    _add_param_flags(s)

    b = sub.add_parser("bench", help="run a seeded suite and compare with published values")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--suite", choices=sorted(bench.SUITES))
    src.add_argument("--instances", help="comma-separated built-in names")
    b.add_argument("--algo", default="bfo,hbfo", help="comma-separated, default bfo,hbfo")
    b.add_argument("--runs", type=int, default=10)
    b.add_argument("--seed", type=int, help="base seed; runs use seed..seed+runs-1")
    b.add_argument("--budget", dest="p_budget",
                   help=f"decode ceiling per run, or 'none' (default {bench.DEFAULT_BUDGET})")
    b.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    b.add_argument("--table", choices=("compare", "stats"), default="compare",
                   help="compare: one row per instance against published values; stats: one row per (instance, algo)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--records", default="bench_records.jsonl", help="per-run JSON lines (default %(default)s)")
    b.add_argument("--output", help="write the table here instead of stdout")
    _add_param_flags(b)

    o = sub.add_parser("oracle", help="exact optimum by enumeration (tiny instances only)")
    _add_source(o)
    o.add_argument("--limit", type=int, default=100_000, help="largest sequence count to enumerate")
    return parser


def default_seed(flag) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("JOBSHOP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"JOBSHOP_SEED must be an integer, got {env!r}") from None


def load_source(args):
    if args.instance is not None:
        return load_builtin(args.instance)
    return read_instance(args.file)


def collect_overrides(args) -> dict[str, str]:
    merged = read_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key.startswith("p_") and value is not None:
            merged[key[2:]] = value
    return merged


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def cmd_solve(args, out) -> int:
    if args.runs < 1:
        raise UsageError(f"--runs must be >= 1, got {args.runs}")
    if args.dump_pheromone and args.algo != "hbfo":
        raise UsageError("--dump-pheromone needs --algo hbfo")
    seed = default_seed(args.seed)
    params = build_params(collect_overrides(args), seed)
    instance = load_source(args)
    t0 = time.perf_counter()
    results, models = [], []
    for k in range(args.runs):
        p = params.with_seed(seed + k)
        if args.algo == "bfo":
            results.append(run_bfo(instance, p.bfo))
        else:
            last = {}
            results.append(run_hbfo(instance, p, on_generation=lambda g, m: last.update(model=m)))
            models.append(last.get("model"))
    elapsed = time.perf_counter() - t0
    best_i = min(range(len(results)), key=lambda i: (results[i].best_makespan, i))
    best = results[best_i]
    schedule = decode(best.best_sequence, instance)

    if args.format == "json":
        doc = {
            "instance": instance.name,
            "algo": args.algo,
            "best_makespan": best.best_makespan,
            "params": {k: v for k, v in best.params.items()},
            "runs": [r.to_dict(timing=False) for r in results],
        }
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        lines = header(params, command="solve", instance=instance.name, algo=args.algo, runs=args.runs, seed=seed)
        lines += [
            f"run seed={r.seed} makespan={r.best_makespan} evaluations={r.evaluations}" for r in results
        ]
        lines.append(f"best_makespan {best.best_makespan}")
        lines.append(f"lower_bound {instance.lower_bound}")
        out.write("\n".join(lines) + "\n")
    if args.dump_schedule:
        _write(args.dump_schedule, schedule.to_json(instance) + "\n")
    if args.dump_pheromone and models[best_i] is not None:
        _write(args.dump_pheromone, models[best_i].to_csv())
    if args.gantt:
        emit_gantt(schedule, instance, args.gantt)
    print(f"# timing: {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    algos = [a.strip() for a in args.algo.split(",") if a.strip()]
    bad = [a for a in algos if a not in bench.ALGOS]
    if bad or not algos:
        raise UsageError(f"--algo takes a comma-separated subset of {','.join(bench.ALGOS)}")
    if args.runs < 1 or args.workers < 1:
        raise UsageError("--runs and --workers must be >= 1")
    seed = default_seed(args.seed)
    overrides = collect_overrides(args)
    overrides.setdefault("budget", str(bench.DEFAULT_BUDGET))
    params = build_params(overrides, seed)
    names = bench.SUITES[args.suite] if args.suite else [n.strip() for n in args.instances.split(",") if n.strip()]
    instances = [load_builtin(n) for n in names]  # fail on unknown names before running
    missing = [i.name for i in instances if i.name not in bench.REFERENCE]

    t0 = time.perf_counter()
    with open(os.devnull, "w") if args.records in ("", "-") else _open_records(args.records) as rec:
        summary = bench.run_suite(
            instances, algos, runs=args.runs, base_seed=seed, params=params, budget=None,
            workers=args.workers, records=rec,
        )
    elapsed = time.perf_counter() - t0
    if missing or args.table == "stats":
        table = bench.summary_table(summary, args.format)
    else:
        table = bench.emit_table(bench.compare_to_reference(summary), args.format)
    text = table
    if args.format != "json":
        tag = args.suite or ",".join(names)
        hdr = header(params, command="bench", suite=tag, algos=",".join(algos), runs=args.runs, base_seed=seed)
        text = "\n".join(hdr) + "\n" + table
    if args.output:
        _write(args.output, text)
    else:
        out.write(text)
    print(f"# timing: {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def _open_records(path):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def cmd_oracle(args, out) -> int:
    instance = load_source(args)
    value = brute_force_optimal(instance, limit=args.limit)
    out.write(f"# oracle instance={instance.name} sequences={count_sequences(instance)}\n")
    out.write(f"optimal_makespan {value}\n")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "oracle": cmd_oracle}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = make_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as e:
        print(f"TooLarge: {e}", file=sys.stderr)
        return EXIT_DATA
    except (InstanceFormatError, UnknownInstance, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except JobShopError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
