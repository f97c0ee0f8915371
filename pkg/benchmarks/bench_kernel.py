"""Benchmark the compiled polynomial kernel against the pure-Python twin.

Two workload classes: raw kernel loops (add/mul/substitute/divide on
synthetic sparse polynomials) and an end-to-end slice (the full localization
intertwining check on the largest stock configuration).  The same inputs run
through both kernels; outputs are asserted identical before timing.

Usage: python3 benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import random
import statistics
import subprocess
import sys
import time

from qhecke import _kernel_py

try:
    from qhecke import _kernel
except ImportError:
    _kernel = None


def synth_polys(rng, count, nvars, max_terms, max_exp, max_coeff):
    out = []
    for _ in range(count):
        d = {}
        for _ in range(rng.randrange(1, max_terms + 1)):
            e = tuple(rng.randrange(max_exp + 1) for _ in range(nvars))
            c = rng.randrange(-max_coeff, max_coeff + 1)
            if c:
                d[e] = c
        out.append(d)
    return out


def bench_kernel_loops(kernel, polys, cols, nvars):
    t0 = time.perf_counter()
    acc = {}
    for a in polys:
        for b in polys:
            p = kernel.kmul(a, b)
            acc = kernel.kadd(acc, p)
            if b:
                kernel.kdivexact(p, b)
        kernel.ksubst(a, cols, nvars)
    return time.perf_counter() - t0, acc


def bench_raw(repeat):
    rng = random.Random(2024)
    nvars = 4
    polys = synth_polys(rng, 24, nvars, 10, 3, 9)
    cols = tuple(
        tuple(rng.randrange(-2, 3) for _ in range(nvars)) for _ in range(nvars)
    )
    rows = []
    for name, kernel in (("pure", _kernel_py), ("compiled", _kernel)):
        if kernel is None:
            continue
        times = []
        check = None
        for _ in range(repeat):
            elapsed, acc = bench_kernel_loops(kernel, polys, cols, nvars)
            times.append(elapsed)
            check = acc
        rows.append((name, statistics.median(times), check))
    if len(rows) == 2:
        assert rows[0][2] == rows[1][2], "kernel outputs differ"
    return [(name, t) for name, t, _ in rows]


END_TO_END = """
from qhecke.config import build_setting
from qhecke.localize import intertwining_check, lambda_table, leading_term_suite
from qhecke.presets import QuiverSpec, preset_klr

quiver = QuiverSpec(vertices=(1, 2), arrows=((1, 2),), dimension={1: 2, 2: 2})
datum, sub, table, data = build_setting(preset_klr(quiver))
lambdas = lambda_table(data, sub)
assert all(r.passed for r in intertwining_check(data, sub, table, lambdas, 3))
assert all(r.passed for r in leading_term_suite(data, sub, table, lambdas))
"""


def bench_end_to_end(repeat):
    rows = []
    for name, env_extra in (("pure", {"QHECKE_PURE": "1"}), ("compiled", {})):
        if name == "compiled" and _kernel is None:
            continue
        import os

        env = dict(os.environ)
        env.pop("QHECKE_PURE", None)
        env.update(env_extra)
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            subprocess.run(
                [sys.executable, "-c", END_TO_END], env=env, check=True
            )
            times.append(time.perf_counter() - t0)
        rows.append((name, statistics.median(times)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernel is None:
        print("note: compiled kernel not available; timing the pure path only")

    print(f"== raw kernel loops (median of {args.repeat}) ==")
    raw = bench_raw(args.repeat)
    for name, t in raw:
        print(f"  {name:9s} {t * 1000:8.1f} ms")
    if len(raw) == 2:
        print(f"  speedup   {raw[0][1] / raw[1][1]:8.2f}x")

    print(f"== end-to-end localization slice (median of {args.repeat}) ==")
    e2e = bench_end_to_end(args.repeat)
    for name, t in e2e:
        print(f"  {name:9s} {t:8.2f} s  (includes interpreter startup)")
    if len(e2e) == 2:
        print(f"  speedup   {e2e[0][1] / e2e[1][1]:8.2f}x")


if __name__ == "__main__":
    main()
