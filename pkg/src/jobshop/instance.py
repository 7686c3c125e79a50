"""Job-shop instances: parsing, serialization and the embedded OR-Library set.

File format (one instance per file)::

    # optional comment lines
    n m
    <m pairs "machine time" for job 0>
    ...
    <m pairs "machine time" for job n-1>

Machines are 0-based. Every job must visit every machine exactly once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    DuplicateMachineInRoute,
    MachineIndexOutOfRange,
    MalformedHeader,
    NegativeProcessingTime,
    RowArity,
    UnknownInstance,
)

BUILTIN_NAMES = (
    ["ABZ5", "ABZ6", "ABZ7", "ABZ8", "ABZ9"]
    + [f"LA{i:02d}" for i in range(1, 11)]
    + ["LA19", "LA21", "LA24", "LA25", "LA27", "LA29"]
)


class OperationRef(NamedTuple):
    job: int
    op_index: int


@dataclass(frozen=True, eq=False)
class JsspInstance:
    """An n x m square job-shop instance.

    ``machines[j, k]`` is the machine of job j's k-th operation and
    ``times[j, k]`` its processing time. Both arrays are read-only.
    """

    name: str
    machines: np.ndarray
    times: np.ndarray
    _machine_load: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        machines = np.array(self.machines, dtype=np.int64)
        times = np.array(self.times, dtype=np.int64)
        if machines.ndim != 2 or machines.shape != times.shape:
            raise RowArity(f"machine/time arrays must share a 2-D shape, got {machines.shape} and {times.shape}")
        n, m = machines.shape
        if n < 1 or m < 1:
            raise MalformedHeader(f"instance needs at least one job and one machine, got {n}x{m}")
        _check_routes(machines, times)
        load = np.zeros(m, dtype=np.int64)
        np.add.at(load, machines.ravel(), times.ravel())
        for arr in (machines, times, load):
            arr.setflags(write=False)
        object.__setattr__(self, "machines", machines)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "_machine_load", load)

    @property
    def n_jobs(self) -> int:
        return self.machines.shape[0]

    @property
    def n_machines(self) -> int:
        return self.machines.shape[1]

    @property
    def n_operations(self) -> int:
        return self.machines.size

    @property
    def routing(self) -> list[list[tuple[int, int]]]:
        return [
            [(int(mc), int(p)) for mc, p in zip(self.machines[j], self.times[j])]
            for j in range(self.n_jobs)
        ]

    @property
    def machine_load(self) -> np.ndarray:
        return self._machine_load

    @property
    def job_load(self) -> np.ndarray:
        return self.times.sum(axis=1)

    @property
    def lower_bound(self) -> int:
        """max(per-machine load, per-job load); no schedule can beat it."""
        return int(max(self._machine_load.max(), self.job_load.max()))

    def __eq__(self, other):
        if not isinstance(other, JsspInstance):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.machines, other.machines)
            and np.array_equal(self.times, other.times)
        )

    def __hash__(self):
        return hash((self.name, self.machines.tobytes(), self.times.tobytes()))

    def __repr__(self):
        return f"JsspInstance({self.name!r}, {self.n_jobs}x{self.n_machines})"


def _check_routes(machines: np.ndarray, times: np.ndarray) -> None:
    n, m = machines.shape
    for j in range(n):
        seen = set()
        for k in range(m):
            mc, p = int(machines[j, k]), int(times[j, k])
            if not 0 <= mc < m:
                raise MachineIndexOutOfRange(f"job {j} step {k}: machine {mc} not in [0, {m})")
            if mc in seen:
                raise DuplicateMachineInRoute(f"job {j} visits machine {mc} twice")
            if p < 0:
                raise NegativeProcessingTime(f"job {j} step {k}: processing time {p} < 0")
            seen.add(mc)


_INT = re.compile(r"^-?\d+$")


def _ints(tokens: list[str], lineno: int, exc: type[Exception]) -> list[int]:
    bad = [t for t in tokens if not _INT.match(t)]
    if bad:
        raise exc(f"line {lineno}: non-integer token {bad[0]!r}")
    return [int(t) for t in tokens]


def parse_instance(text: str, name: str = "instance") -> JsspInstance:
    """Parse the single-instance text format. CRLF and tabs are accepted."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise MalformedHeader("empty instance text")

    lineno, head = rows[0]
    header = _ints(head, lineno, MalformedHeader)
    if len(header) != 2 or header[0] < 1 or header[1] < 1:
        raise MalformedHeader(f"line {lineno}: expected 'n m' with two positive integers, got {' '.join(head)!r}")
    n, m = header
    body = rows[1:]
    if len(body) != n:
        raise RowArity(f"header declares {n} jobs but {len(body)} job rows follow")

    machines = np.empty((n, m), dtype=np.int64)
    times = np.empty((n, m), dtype=np.int64)
    for j, (lineno, tokens) in enumerate(body):
        values = _ints(tokens, lineno, RowArity)
        if len(values) != 2 * m:
            raise RowArity(f"line {lineno}: job {j} has {len(values)} integers, expected {2 * m}")
        machines[j] = values[0::2]
        times[j] = values[1::2]
    return JsspInstance(name, machines, times)


def serialize_instance(instance: JsspInstance, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{instance.n_jobs} {instance.n_machines}")
    for j in range(instance.n_jobs):
        lines.append(" ".join(f"{mc} {p}" for mc, p in zip(instance.machines[j], instance.times[j])))
    return "\n".join(lines) + "\n"


def read_instance(path) -> JsspInstance:
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem)


def _canonical(name: str) -> str:
    return name.strip().upper().replace(" ", "")


def builtin_text(name: str) -> str:
    key = _canonical(name)
    if key not in BUILTIN_NAMES:
        raise UnknownInstance(f"unknown builtin instance {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return resources.files("jobshop.data").joinpath(f"{key.lower()}.txt").read_text()


def load_builtin(name: str) -> JsspInstance:
    """Return one of the embedded ABZ/LA benchmark instances, e.g. ``"LA05"``."""
    return parse_instance(builtin_text(name), name=_canonical(name))


def total_work(instance: JsspInstance) -> int:
    return int(instance.times.sum())

