"""Decoding job-repetition sequences into semi-active schedules.

A sequence lists each job index ``n_machines`` times; the k-th occurrence of
job j stands for that job's k-th operation. Any such list decodes to a
feasible schedule, so the encoding never dead-locks. Decoding places each
operation, in token order, at max(job ready, machine ready).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from more_itertools import distinct_permutations

from . import kernels
from .errors import CountMismatch, TooLarge
from .instance import JsspInstance, OperationRef


def as_sequence(tokens, instance: JsspInstance) -> np.ndarray:
    """Return ``tokens`` as an int64 array, checking the count invariant."""
    seq = np.asarray(tokens, dtype=np.int64)
    n, m = instance.n_jobs, instance.n_machines
    if seq.ndim != 1 or seq.size != n * m:
        raise CountMismatch(f"sequence length {seq.size} != {n}*{m}")
    if seq.min() < 0 or seq.max() >= n:
        raise CountMismatch(f"sequence holds job indices outside [0, {n})")
    counts = np.bincount(seq, minlength=n)
    if np.any(counts != m):
        bad = int(np.flatnonzero(counts != m)[0])
        raise CountMismatch(f"job {bad} appears {counts[bad]} times, expected {m}")
    return seq


@dataclass(frozen=True, eq=False)
class Schedule:
    """Start and completion time of every operation, indexed ``[job, op_index]``."""

    start: np.ndarray
    completion: np.ndarray

    @property
    def makespan(self) -> int:
        return int(self.completion.max())

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return np.array_equal(self.start, other.start) and np.array_equal(self.completion, other.completion)

    def records(self, instance: JsspInstance) -> list[dict]:
        n, m = self.start.shape
        rows = [
            {
                "job": j,
                "op_index": k,
                "machine": int(instance.machines[j, k]),
                "start": int(self.start[j, k]),
                "completion": int(self.completion[j, k]),
            }
            for j in range(n)
            for k in range(m)
        ]
        rows.sort(key=lambda r: (r["start"], r["machine"], r["job"]))
        return rows

    def to_json(self, instance: JsspInstance) -> str:
        payload = {"instance": instance.name, "makespan": self.makespan, "operations": self.records(instance)}
        return json.dumps(payload, indent=1)


def schedule_from_json(text: str) -> tuple[Schedule, int]:
    payload = json.loads(text)
    ops = payload["operations"]
    n = 1 + max(r["job"] for r in ops)
    m = 1 + max(r["op_index"] for r in ops)
    start = np.zeros((n, m), dtype=np.int64)
    completion = np.zeros((n, m), dtype=np.int64)
    for r in ops:
        start[r["job"], r["op_index"]] = r["start"]
        completion[r["job"], r["op_index"]] = r["completion"]
    return Schedule(start, completion), payload["makespan"]


def decode(sequence, instance: JsspInstance) -> Schedule:
    seq = as_sequence(sequence, instance)
    start = kernels.decode_starts(seq, instance.machines, instance.times)
    return Schedule(start, start + instance.times)


def makespan(sequence, instance: JsspInstance, check: bool = True) -> int:
    seq = as_sequence(sequence, instance) if check else sequence
    return int(kernels.decode_makespan(seq, instance.machines, instance.times))


@dataclass(frozen=True)
class Violation:
    kind: str  # "precedence", "capacity" or "duration"
    ops: tuple[OperationRef, ...]
    times: tuple[int, ...]

    def __str__(self):
        ops = ", ".join(f"J{o.job}.{o.op_index}" for o in self.ops)
        return f"{self.kind}: {ops} at {self.times}"


def validate_schedule(schedule: Schedule, instance: JsspInstance) -> list[Violation]:
    """Check precedence, machine capacity and completion arithmetic.

    Returns an empty list for a feasible schedule. Overlaps are reported
    between machine-neighbours after sorting by start time.
    """
    n, m = instance.n_jobs, instance.n_machines
    if schedule.start.shape != (n, m) or schedule.completion.shape != (n, m):
        raise ValueError(f"schedule shape {schedule.start.shape} does not cover a {n}x{m} instance")
    start, end = schedule.start, schedule.completion
    out: list[Violation] = []

    for j in range(n):
        for k in range(m):
            if end[j, k] != start[j, k] + instance.times[j, k]:
                out.append(Violation("duration", (OperationRef(j, k),), (int(start[j, k]), int(end[j, k]))))
            if start[j, k] < 0:
                out.append(Violation("precedence", (OperationRef(j, k),), (int(start[j, k]),)))
            if k and start[j, k] < end[j, k - 1]:
                out.append(
                    Violation(
                        "precedence",
                        (OperationRef(j, k - 1), OperationRef(j, k)),
                        (int(end[j, k - 1]), int(start[j, k])),
                    )
                )

    for mc in range(m):
        jobs, ks = np.nonzero(instance.machines == mc)
        order = np.lexsort((end[jobs, ks], start[jobs, ks]))
        for a, b in zip(order[:-1], order[1:]):
            ja, ka, jb, kb = int(jobs[a]), int(ks[a]), int(jobs[b]), int(ks[b])
            if start[jb, kb] < end[ja, ka]:
                out.append(
                    Violation(
                        "capacity",
                        (OperationRef(ja, ka), OperationRef(jb, kb)),
                        (int(start[ja, ka]), int(end[ja, ka]), int(start[jb, kb]), int(end[jb, kb])),
                    )
                )
    return out


def count_sequences(instance: JsspInstance) -> int:
    """Number of distinct job-repetition sequences, (n*m)! / (m!)^n."""
    n, m = instance.n_jobs, instance.n_machines
    return math.factorial(n * m) // math.factorial(m) ** n


def brute_force_optimal(instance: JsspInstance, limit: int = 100_000) -> int:
    """Exact minimum makespan by enumerating every distinct sequence."""
    total = count_sequences(instance)
    if total > limit:
        raise TooLarge(f"{instance.name}: {total} sequences exceed the limit of {limit}")
    tokens = np.repeat(np.arange(instance.n_jobs), instance.n_machines)
    machines, times = instance.machines, instance.times
    best = None
    for perm in distinct_permutations(tokens.tolist()):
        span = kernels.decode_makespan_py(np.asarray(perm, dtype=np.int64), machines, times)
        if best is None or span < best:
            best = span
    return int(best)
