"""Time the numba kernels against the pure numpy fallback.

    python3 benchmarks/bench_kernels.py [--instance LA21] [--repeat 2000]

Both paths are imported from the same module, so the JOBSHOP_NUMBA flag does
not matter here. The first numba call (compilation or cache load) is excluded.
Also times one short HBFO run end to end in a subprocess per path.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from jobshop import kernels
from jobshop.instance import load_builtin
from jobshop.pheromone import AcoParams, init_pheromone


def per_call(fn, args_fn, repeat):
    fn(*args_fn())  # warm-up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args_fn())
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instance", default="LA21")
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--budget", type=int, default=5000)
    a = ap.parse_args()
    if not kernels.NUMBA_AVAILABLE:
        sys.exit("numba is not installed")

    inst = load_builtin(a.instance)
    rng = np.random.default_rng(0)
    mach, times = inst.machines, inst.times
    n, m = inst.n_jobs, inst.n_machines
    seq = rng.permutation(np.repeat(np.arange(n), m))
    model = init_pheromone(inst, AcoParams(), "position")
    w = model.eta
    draws = rng.random((2, inst.n_operations))

    rows = [
        ("decode_makespan", kernels.decode_makespan_jit, kernels.decode_makespan_py, lambda: (seq, mach, times)),
        ("decode_starts", kernels.decode_starts_jit, kernels.decode_starts_py, lambda: (seq, mach, times)),
        ("construct", kernels.construct_jit, kernels.construct_py,
         lambda: (model.tau.copy(), w, 0.8, 0.1, 0.5, draws, True)),
        ("guided_swap", kernels.guided_swap_jit, kernels.guided_swap_py,
         lambda: (seq, model.tau.copy(), w, 0.8, 0.1, 0.5, 7, np.zeros(n, dtype=np.int64), 0.3, 0.6, True)),
    ]
    print(f"instance {inst.name} ({n}x{m}), {a.repeat} calls each")
    print(f"{'kernel':<16} {'numba us':>10} {'numpy us':>10} {'speedup':>8}")
    for name, jit, py, args in rows:
        tj = per_call(jit, args, a.repeat)
        tp = per_call(py, args, max(1, a.repeat // 10))
        print(f"{name:<16} {tj * 1e6:10.2f} {tp * 1e6:10.2f} {tp / tj:8.1f}")

    code = (
        "import time; from jobshop import HbfoParams, BfoParams, load_builtin, run_hbfo;"
        f"i = load_builtin('{a.instance}'); run_hbfo(i, HbfoParams(bfo=BfoParams(max_evaluations=50)));"
        f"t = time.perf_counter(); r = run_hbfo(i, HbfoParams(bfo=BfoParams(max_evaluations={a.budget})));"
        "print(f'{time.perf_counter() - t:.3f} {r.best_makespan}')"
    )
    print(f"\nhbfo run, {a.budget} decodes:")
    for flag in ("1", "0"):
        env = dict(os.environ, JOBSHOP_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        secs, span = out.stdout.split()
        print(f"  JOBSHOP_NUMBA={flag}: {float(secs):7.3f} s  makespan {span}")


if __name__ == "__main__":
    main()
