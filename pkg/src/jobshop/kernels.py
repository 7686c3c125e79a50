"""Hot inner loops: sequence decoding and pheromone-guided construction.

Each kernel exists twice: a numba ``@njit`` version and a pure numpy/Python
version. Both give bit-identical results for identical inputs. The public
names (``decode_makespan``, ``decode_starts``, ``construct``,
``guided_swap``) point to the
numba versions unless ``JOBSHOP_NUMBA=0`` is set or numba is missing.

All kernels take plain arrays so they stay independent of the dataclasses:

``machines``, ``times``
    int64 (n, m), routing of the instance.
``seq``
    int64 (n*m,), job-repetition sequence.
``tau``
    float64 (n, m) or (n, n*m) pheromone, updated in place by ``construct``.
``weight``
    float64 (n, m) desirability raised to beta, precomputed by the caller.
``draws``
    float64 (2, n*m); row 0 holds the q draws, row 1 the roulette draws.
``occ``
    int64 (n,); for ``guided_swap``, which occurrence of each job is offered.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("JOBSHOP_NUMBA", "1").strip().lower()
NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and _FLAG not in ("0", "false", "no", "off")


# --- pure numpy / Python path -------------------------------------------------

def decode_makespan_py(seq, machines, times):
    n, m = machines.shape
    mach = machines.tolist()
    dur = times.tolist()
    next_op = [0] * n
    job_ready = [0] * n
    mach_ready = [0] * m
    span = 0
    for j in seq.tolist():
        k = next_op[j]
        mc = mach[j][k]
        start = job_ready[j] if job_ready[j] > mach_ready[mc] else mach_ready[mc]
        end = start + dur[j][k]
        job_ready[j] = end
        mach_ready[mc] = end
        next_op[j] = k + 1
        if end > span:
            span = end
    return span


def decode_starts_py(seq, machines, times):
    n, m = machines.shape
    mach = machines.tolist()
    dur = times.tolist()
    next_op = [0] * n
    job_ready = [0] * n
    mach_ready = [0] * m
    starts = np.zeros((n, m), dtype=np.int64)
    for j in seq.tolist():
        k = next_op[j]
        mc = mach[j][k]
        start = max(job_ready[j], mach_ready[mc])
        starts[j, k] = start
        job_ready[j] = mach_ready[mc] = start + dur[j][k]
        next_op[j] = k + 1
    return starts


def construct_py(tau, weight, q0, rho, tau0, draws, by_position):
    n, m = weight.shape
    length = n * m
    next_op = np.zeros(n, dtype=np.int64)
    seq = np.empty(length, dtype=np.int64)
    for t in range(length):
        elig = np.flatnonzero(next_op < m)
        ops = next_op[elig]
        cols = np.full(elig.size, t) if by_position else ops
        scores = tau[elig, cols] * weight[elig, ops]
        if draws[0, t] <= q0:
            pick = int(np.argmax(scores))
        else:
            cum = np.cumsum(scores)
            pick = min(int(np.searchsorted(cum, draws[1, t] * cum[-1], side="right")), elig.size - 1)
        j = int(elig[pick])
        c = int(cols[pick])
        tau[j, c] = (1.0 - rho) * tau[j, c] + rho * tau0
        seq[t] = j
        next_op[j] += 1
    return seq


def guided_swap_py(seq, tau, weight, q0, rho, tau0, i, occ, q, r, by_position):
    n, m = weight.shape
    a = seq[i]
    out = seq.copy()
    if n == 1:
        return out
    # position of the occ[u]-th token of every job
    rank = np.zeros(n, dtype=np.int64)
    where = np.zeros(n, dtype=np.int64)
    for t, u in enumerate(seq.tolist()):
        if rank[u] == occ[u]:
            where[u] = t
        rank[u] += 1
    cand = np.array([u for u in range(n) if u != a])
    ks = occ[cand]
    cols = np.full(cand.size, i) if by_position else ks
    scores = tau[cand, cols] * weight[cand, ks]
    if q <= q0:
        pick = int(np.argmax(scores))
    else:
        cum = np.cumsum(scores)
        pick = min(int(np.searchsorted(cum, r * cum[-1], side="right")), cand.size - 1)
    u = int(cand[pick])
    c = int(cols[pick])
    p = int(where[u])
    out[i], out[p] = out[p], out[i]
    tau[u, c] = (1.0 - rho) * tau[u, c] + rho * tau0
    return out


# --- numba path ---------------------------------------------------------------

def _decode_makespan_loop(seq, machines, times):
    n, m = machines.shape
    next_op = np.zeros(n, dtype=np.int64)
    job_ready = np.zeros(n, dtype=np.int64)
    mach_ready = np.zeros(m, dtype=np.int64)
    span = 0
    for t in range(seq.shape[0]):
        j = seq[t]
        k = next_op[j]
        mc = machines[j, k]
        start = job_ready[j]
        if mach_ready[mc] > start:
            start = mach_ready[mc]
        end = start + times[j, k]
        job_ready[j] = end
        mach_ready[mc] = end
        next_op[j] = k + 1
        if end > span:
            span = end
    return span


def _decode_starts_loop(seq, machines, times):
    n, m = machines.shape
    next_op = np.zeros(n, dtype=np.int64)
    job_ready = np.zeros(n, dtype=np.int64)
    mach_ready = np.zeros(m, dtype=np.int64)
    starts = np.zeros((n, m), dtype=np.int64)
    for t in range(seq.shape[0]):
        j = seq[t]
        k = next_op[j]
        mc = machines[j, k]
        start = job_ready[j]
        if mach_ready[mc] > start:
            start = mach_ready[mc]
        starts[j, k] = start
        job_ready[j] = start + times[j, k]
        mach_ready[mc] = start + times[j, k]
        next_op[j] = k + 1
    return starts


def _construct_loop(tau, weight, q0, rho, tau0, draws, by_position):
    n, m = weight.shape
    length = n * m
    next_op = np.zeros(n, dtype=np.int64)
    scores = np.zeros(n, dtype=np.float64)
    seq = np.empty(length, dtype=np.int64)
    for t in range(length):
        total = 0.0
        best = -1
        best_score = -1.0
        last = -1
        for j in range(n):
            k = next_op[j]
            if k < m:
                c = t if by_position else k
                s = tau[j, c] * weight[j, k]
                scores[j] = s
                total += s
                last = j
                if s > best_score:
                    best_score = s
                    best = j
        if draws[0, t] <= q0:
            pick = best
        else:
            # inverse CDF over eligible jobs in index order
            target = draws[1, t] * total
            acc = 0.0
            pick = last
            for j in range(n):
                if next_op[j] < m:
                    acc += scores[j]
                    if target < acc:
                        pick = j
                        break
        c = t if by_position else next_op[pick]
        tau[pick, c] = (1.0 - rho) * tau[pick, c] + rho * tau0
        seq[t] = pick
        next_op[pick] += 1
    return seq


def _guided_swap_loop(seq, tau, weight, q0, rho, tau0, i, occ, q, r, by_position):
    n, m = weight.shape
    a = seq[i]
    out = seq.copy()
    if n == 1:
        return out
    rank = np.zeros(n, dtype=np.int64)
    where = np.zeros(n, dtype=np.int64)
    for t in range(seq.shape[0]):
        u = seq[t]
        if rank[u] == occ[u]:
            where[u] = t
        rank[u] += 1
    scores = np.zeros(n, dtype=np.float64)
    total = 0.0
    best = -1
    best_score = -1.0
    last = -1
    for u in range(n):
        if u != a:
            k = occ[u]
            c = i if by_position else k
            s = tau[u, c] * weight[u, k]
            scores[u] = s
            total += s
            last = u
            if s > best_score:
                best_score = s
                best = u
    if q <= q0:
        pick = best
    else:
        target = r * total
        acc = 0.0
        pick = last
        for u in range(n):
            if u != a:
                acc += scores[u]
                if target < acc:
                    pick = u
                    break
    c = i if by_position else occ[pick]
    p = where[pick]
    out[i] = out[p]
    out[p] = a
    tau[pick, c] = (1.0 - rho) * tau[pick, c] + rho * tau0
    return out


if NUMBA_AVAILABLE:
    decode_makespan_jit = numba.njit(cache=True)(_decode_makespan_loop)
    decode_starts_jit = numba.njit(cache=True)(_decode_starts_loop)
    construct_jit = numba.njit(cache=True)(_construct_loop)
    guided_swap_jit = numba.njit(cache=True)(_guided_swap_loop)
else:  # pragma: no cover
    decode_makespan_jit = decode_starts_jit = construct_jit = guided_swap_jit = None

if NUMBA_ENABLED:
    decode_makespan = decode_makespan_jit
    decode_starts = decode_starts_jit
    construct = construct_jit
    guided_swap = guided_swap_jit
else:
    decode_makespan = decode_makespan_py
    decode_starts = decode_starts_py
    construct = construct_py
    guided_swap = guided_swap_py
