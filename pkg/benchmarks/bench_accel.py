#!/usr/bin/env python3
"""Compare the JIT kernels against the interpreted/numpy fallbacks.

Run after an editable install:

    python benchmarks/bench_accel.py

VORG_NUMBA=0 makes the package itself run on the fallback path; this
script always times both paths side by side.
"""

import time

import numpy as np

from vorg import accel
from vorg.generate import _shape_arrays, enumerate_shapes
from vorg.grid import GridWord
from vorg.organism import (Source, SourceSet, derive_topology, source_arrays,
                           to_arrays)
from vorg.patterns import CRAT
from vorg.generate import random_member
from vorg.patterns import TR
from vorg.reconfig import _desc_matrix, _grid_frame


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_labeling_scan():
    shapes = enumerate_shapes(6)[6]
    arrays = [_shape_arrays(s, CRAT) for s in shapes[:40]]
    args = [(a["k"], a["nsym"], a["wbit"], a["nbit"], a["ebit"], a["sbit"],
             a["hpairs"], a["vpairs"], a["expw"], a["expn"], a["expe"],
             a["exps"], a["accept"], a["run_starts"], a["run_cells"],
             a["run_kind"], a["trans"]) for a in arrays]

    def run(fn):
        return [int((fn(*a) == 3).sum()) for a in args]

    if accel.NUMBA_ENABLED:
        run(accel._scan_labelings_loop)  # compile
        t_jit, counts_jit = timeit(lambda: run(accel._scan_labelings_loop), 3)
    else:
        t_jit, counts_jit = None, None
    t_np, counts_np = timeit(lambda: run(accel._scan_labelings_numpy), 3)
    if counts_jit is not None:
        assert counts_jit == counts_np
    report("labeling scan (40 hexomino shapes x 15625 labelings)",
           t_jit, t_np)


def bench_flow_eval():
    rng = np.random.default_rng(1)
    word = random_member(TR, 25, rng)
    arrays = to_arrays(derive_topology(word))
    src = source_arrays(SourceSet(tuple(
        Source((int(rng.integers(12)), int(rng.integers(12))), 500.0)
        for _ in range(3))))
    blocked = np.zeros(len(arrays.rows), np.uint8)
    args = (arrays.rows, arrays.cols, arrays.leaf_idx, *src, arrays.order,
            arrays.parent, blocked, 10000.0)

    def run(fn):
        total = 0.0
        for _ in range(2000):
            total += fn(*args)[2]
        return total

    if accel.NUMBA_ENABLED:
        accel._flow_eval_loop(*args)
        t_jit, v_jit = timeit(lambda: run(accel._flow_eval_loop), 3)
    else:
        t_jit, v_jit = None, None
    t_np, v_np = timeit(lambda: run(accel._flow_eval_numpy), 3)
    if v_jit is not None:
        assert abs(v_jit - v_np) < 1e-6 * max(1.0, abs(v_np))
    report("flow evaluation (25-cell tree, 2000 calls)", t_jit, t_np)


def bench_move_scan():
    rng = np.random.default_rng(2)
    word = random_member(TR, 25, rng, bounds=(14, 14))
    topology = derive_topology(word)
    arrays = to_arrays(topology)
    desc = _desc_matrix(topology, arrays.index)
    gr0, gc0, h, w = _grid_frame(word, (14, 14))
    grid = np.zeros((h, w), np.int64)
    ids = np.full((h, w), -1, np.int64)
    for coord, i in arrays.index.items():
        grid[coord[0] - gr0, coord[1] - gc0] = arrays.tags[i]
        ids[coord[0] - gr0, coord[1] - gc0] = i
    src = source_arrays(SourceSet(tuple(
        Source((int(rng.integers(14)), int(rng.integers(14))), 500.0)
        for _ in range(3))))
    args = (arrays.rows, arrays.cols, arrays.tags, arrays.parent, desc,
            grid, ids, gr0, gc0, *src, 10000.0)

    kernel = accel._scan_moves_kernel

    def run():
        out = None
        for _ in range(20):
            out = kernel(*args)
        return out

    if accel.NUMBA_ENABLED:
        kernel(*args)
        t_jit, out_jit = timeit(run, 3)
        interpreted = kernel.py_func
    else:
        t_jit, out_jit = None, None
        interpreted = kernel

    def run_py():
        return interpreted(*args)

    t_py, out_py = timeit(run_py, 1)
    t_py *= 20  # scale the single interpreted call to 20 like the JIT run
    if out_jit is not None:
        assert tuple(out_jit) == tuple(out_py)
    report("move scan (25-cell tree, 14x14 grid, 20 scans)", t_jit, t_py)


def report(label, t_jit, t_fallback):
    if t_jit is None:
        print(f"{label}\n  fallback: {t_fallback * 1e3:9.2f} ms "
              "(numba disabled)")
        return
    print(f"{label}\n  numba:    {t_jit * 1e3:9.2f} ms\n"
          f"  fallback: {t_fallback * 1e3:9.2f} ms"
          f"   ({t_fallback / t_jit:6.1f}x)")


if __name__ == "__main__":
    print(f"numba enabled: {accel.NUMBA_ENABLED}")
    bench_flow_eval()
    bench_move_scan()
    bench_labeling_scan()
