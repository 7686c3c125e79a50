"""Split the OR-Library job-shop bank (jobshop1.txt) into one file per instance.

    python3 scripts/extract_orlib.py jobshop1.txt src/jobshop/data [--names la01,abz5]

The bank lists each instance as an ``instance <name>`` line, a line of plus
signs, a free-text description, then ``n m`` and n rows of machine/time pairs.
Output files use the layout of the bundled data: a comment line, the header,
then aligned rows.
"""

import argparse
import re
import sys
from pathlib import Path

# make the in-repo package importable without installing it
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from jobshop.instance import parse_instance  # noqa: E402

HEADER = re.compile(r"^\s*(\d+)\s+(\d+)\s*$")


def split_bank(text):
    """Yield (name, body) where body is the header plus the n job rows."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        m = re.match(r"^\s*instance\s+(\S+)", lines[i])
        i += 1
        if not m:
            continue
        name = m.group(1)
        while i < len(lines) and not HEADER.match(lines[i]):
            i += 1
        if i == len(lines):
            raise ValueError(f"instance {name}: no size line")
        n = int(HEADER.match(lines[i]).group(1))
        yield name, "\n".join(lines[i : i + n + 1]) + "\n"
        i += n + 1


def render(name, body):
    inst = parse_instance(body, name=name)  # validates counts and routes
    out = [f"# {name}  (OR-Library jobshop1.txt)", f"{inst.n_jobs} {inst.n_machines}"]
    for j in range(inst.n_jobs):
        out.append(" ".join(f"{mc:2d} {p:3d}" for mc, p in zip(inst.machines[j], inst.times[j])))
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("bank")
    ap.add_argument("outdir")
    ap.add_argument("--names", help="comma-separated subset, case-insensitive")
    a = ap.parse_args()
    wanted = None if not a.names else {n.strip().lower() for n in a.names.split(",")}
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for name, body in split_bank(Path(a.bank).read_text()):
        if wanted is not None and name.lower() not in wanted:
            continue
        (out / f"{name.lower()}.txt").write_text(render(name.lower(), body))
        written += 1
    print(f"wrote {written} instance files to {out}")


if __name__ == "__main__":
    main()
