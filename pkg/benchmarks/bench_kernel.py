"""Compare the compiled multiply-accumulate kernel against the pure fallback.

Two views: a microbenchmark on random packed-key polynomial products sized
like the hot loop of a real run, and an end-to-end pipeline run in a fresh
interpreter per kernel (MIRRORCP_PURE_KERNEL=1 forces the fallback).

Usage: python3 benchmarks/bench_kernel.py [--n 2] [--degree 11] [--repeats 3]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from mirrorcp import Q
from mirrorcp._kernel import IMPL
from mirrorcp.series import FIELD_BITS, pack_exponents


def random_terms(rng, nvars, maxdeg, nterms):
    out = {}
    for _ in range(nterms):
        exps = [0] * nvars
        for _ in range(rng.randint(0, maxdeg)):
            exps[rng.randrange(nvars)] += 1
        out[pack_exponents(exps)] = Q(rng.randint(-99, 99), rng.randint(1, 99))
    return out


def bench_micro(kernel, pairs, shift, maxdeg, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a, b in pairs:
            acc = {}
            kernel.mul_acc(acc, a, b, shift, maxdeg)
            kernel.prune(acc)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_pipeline(n, degree, pure):
    env = dict(os.environ)
    if pure:
        env["MIRRORCP_PURE_KERNEL"] = "1"
    else:
        env.pop("MIRRORCP_PURE_KERNEL", None)
    code = (
        "from mirrorcp import RunConfig, run_pipeline\n"
        "from mirrorcp._kernel import IMPL\n"
        "r = run_pipeline(RunConfig(%d, %d, checks='none'))\n"
        "assert r.ok\n"
        "print(IMPL)\n" % (n, degree)
    )
    t0 = time.perf_counter()
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    dt = time.perf_counter() - t0
    impl = out.stdout.strip()
    want = "python" if pure else IMPL
    if impl != want:
        raise RuntimeError("subprocess picked kernel %r, expected %r" % (impl, want))
    return dt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--degree", type=int, default=11)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--pairs", type=int, default=200)
    args = ap.parse_args()

    from mirrorcp import _kernel_py

    nvars, maxdeg = args.n + 1, args.degree
    shift = FIELD_BITS * nvars
    rng = random.Random(0)
    pairs = [
        (random_terms(rng, nvars, maxdeg, 60), random_terms(rng, nvars, maxdeg, 60))
        for _ in range(args.pairs)
    ]

    t_py = bench_micro(_kernel_py, pairs, shift, maxdeg, args.repeats)
    print("micro  pure    %8.1f ms  (%d products)" % (t_py * 1e3, args.pairs))
    if IMPL == "cython":
        from mirrorcp import _kernel_cy

        t_cy = bench_micro(_kernel_cy, pairs, shift, maxdeg, args.repeats)
        print("micro  cython  %8.1f ms  (speedup x%.2f)" % (t_cy * 1e3, t_py / t_cy))
    else:
        print("micro  cython  unavailable (compiled kernel not built)")

    e_py = bench_pipeline(args.n, args.degree, pure=True)
    print("e2e    pure    %8.1f ms  (n=%d, degree %d)" % (e_py * 1e3, args.n, args.degree))
    if IMPL == "cython":
        e_cy = bench_pipeline(args.n, args.degree, pure=False)
        print("e2e    cython  %8.1f ms  (speedup x%.2f)" % (e_cy * 1e3, e_py / e_cy))


if __name__ == "__main__":
    main()
