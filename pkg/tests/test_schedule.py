import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jobshop.errors import CountMismatch, TooLarge
from jobshop.instance import OperationRef, load_builtin
from jobshop.schedule import (
    Schedule,
    as_sequence,
    brute_force_optimal,
    count_sequences,
    decode,
    makespan,
    schedule_from_json,
    validate_schedule,
)

from .conftest import random_instance


def disjunctive_optimum(inst):
    """Independent oracle: best acyclic machine orientation, by longest path."""
    n, m = inst.n_jobs, inst.n_machines
    on_machine = [[(j, k) for j in range(n) for k in range(m) if inst.machines[j, k] == mc] for mc in range(m)]
    best = None
    for orders in itertools.product(*(itertools.permutations(ops) for ops in on_machine)):
        succ = {(j, k): [] for j in range(n) for k in range(m)}
        indeg = dict.fromkeys(succ, 0)
        for j in range(n):
            for k in range(1, m):
                succ[(j, k - 1)].append((j, k))
                indeg[(j, k)] += 1
        for order in orders:
            for a, b in zip(order, order[1:]):
                succ[a].append(b)
                indeg[b] += 1
        start = dict.fromkeys(succ, 0)
        ready = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            end = start[v] + int(inst.times[v])
            for w in succ[v]:
                start[w] = max(start[w], end)
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if seen < n * m:
            continue  # cyclic orientation
        span = max(start[v] + int(inst.times[v]) for v in succ)
        best = span if best is None else min(best, span)
    return best


def test_decode_single(tiny1):
    s = decode([0], tiny1)
    assert s.start.tolist() == [[0]]
    assert s.makespan == 5


def test_decode_two_by_two_hand_simulated(tiny2):
    # J0.0 on M0 [0,3); J1.0 on M1 [0,2); J0.1 on M1 [3,5); J1.1 on M0 [3,7)
    s = decode([0, 1, 0, 1], tiny2)
    assert s.start.tolist() == [[0, 3], [0, 3]]
    assert s.completion.tolist() == [[3, 5], [2, 7]]
    assert s.makespan == 7
    assert makespan([0, 1, 0, 1], tiny2) == 7


def test_all_two_by_two_sequences(tiny2):
    spans = {seq: makespan(list(seq), tiny2) for seq in set(itertools.permutations([0, 0, 1, 1]))}
    assert spans == {
        (0, 0, 1, 1): 11,
        (0, 1, 0, 1): 7,
        (0, 1, 1, 0): 7,
        (1, 0, 0, 1): 7,
        (1, 0, 1, 0): 7,
        (1, 1, 0, 0): 11,
    }


@pytest.mark.parametrize("bad", [[0, 0, 0, 1], [0, 1, 0], [0, 1, 2, 1], [-1, 1, 0, 0]])
def test_count_mismatch(tiny2, bad):
    with pytest.raises(CountMismatch):
        decode(bad, tiny2)


def test_decode_is_pure(tiny2):
    seq = np.array([1, 0, 1, 0])
    assert decode(seq, tiny2) == decode(seq.copy(), tiny2)
    assert seq.tolist() == [1, 0, 1, 0]


def test_single_capacity_violation(tiny2):
    start = np.array([[0, 4], [0, 2]])  # J0.0 M0 [0,3), J1.1 M0 [2,6)
    violations = validate_schedule(Schedule(start, start + tiny2.times), tiny2)
    assert len(violations) == 1
    v = violations[0]
    assert v.kind == "capacity"
    assert set(v.ops) == {OperationRef(0, 0), OperationRef(1, 1)}
    assert v.times == (0, 3, 2, 6)


def test_single_precedence_violation(tiny2):
    start = np.array([[0, 2], [0, 3]])  # J0.1 at 2 before J0.0 ends at 3
    violations = validate_schedule(Schedule(start, start + tiny2.times), tiny2)
    assert [v.kind for v in violations] == ["precedence"]
    assert violations[0].ops == (OperationRef(0, 0), OperationRef(0, 1))


def test_duration_violation(tiny2):
    start = np.array([[0, 3], [0, 5]])
    completion = start + tiny2.times
    completion[0, 0] += 1
    kinds = [v.kind for v in validate_schedule(Schedule(start, completion), tiny2)]
    assert "duration" in kinds


def test_brute_force_tiny(tiny1, tiny2):
    assert brute_force_optimal(tiny1) == 5
    assert count_sequences(tiny2) == 6
    assert brute_force_optimal(tiny2) == 7


def test_brute_force_pinned_3x3(pinned3x3):
    assert count_sequences(pinned3x3) == 1680
    expected = disjunctive_optimum(pinned3x3)
    assert brute_force_optimal(pinned3x3) == expected == 60


@pytest.mark.parametrize("seed", range(8))
def test_brute_force_matches_disjunctive_oracle(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
    assert brute_force_optimal(inst) == disjunctive_optimum(inst)


def test_brute_force_too_large():
    with pytest.raises(TooLarge):
        brute_force_optimal(load_builtin("LA01"))


def test_schedule_json_round_trip(tiny2):
    s = decode([1, 0, 0, 1], tiny2)
    back, span = schedule_from_json(s.to_json(tiny2))
    assert back == s and span == s.makespan == 7


@st.composite
def instance_and_sequence(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(1, 5))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    inst = random_instance(n, m, rng, max_time=draw(st.sampled_from([1, 9, 99])))
    seq = draw(st.permutations(np.repeat(np.arange(n), m).tolist()))
    return inst, seq


@settings(max_examples=2000, deadline=None)
@given(instance_and_sequence())
def test_decoded_schedules_are_feasible(case):
    inst, seq = case
    s = decode(seq, inst)
    assert validate_schedule(s, inst) == []
    assert s.makespan >= inst.lower_bound


def test_as_sequence_returns_int_array(tiny2):
    seq = as_sequence([0, 1, 1, 0], tiny2)
    assert seq.dtype == np.int64


def test_la05_sequence_from_a_run_decodes_to_593():
    from jobshop.bfo import BfoParams, run_bfo

    la05 = load_builtin("LA05")
    r = run_bfo(la05, BfoParams(seed=0))
    assert r.best_makespan == 593
    s = decode(r.best_sequence, la05)
    assert s.makespan == 593 and validate_schedule(s, la05) == []
