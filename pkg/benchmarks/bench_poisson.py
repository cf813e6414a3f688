#!/usr/bin/env python3
"""Benchmark the Poisson count kernel: compiled extension vs pure Python.

Usage: python benchmarks/bench_poisson.py [--trials N] [--coeffs M]
"""

import argparse
import time

import numpy as np

from sibucket.rng import backends


def bench(impl, means, trials, seed=12345):
    start = time.perf_counter()
    out = impl.poisson_trials(means, seed, trials)
    elapsed = time.perf_counter() - start
    return out, elapsed


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=20000)
    parser.add_argument("--coeffs", type=int, default=25)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    means = np.concatenate([
        rng.uniform(0.1, 25.0, args.coeffs // 2),       # inversion branch
        rng.uniform(100.0, 1e6, args.coeffs - args.coeffs // 2),  # PTRS branch
    ])

    impls = backends()
    results = {}
    for name, impl in impls.items():
        counts, elapsed = bench(impl, means, args.trials)
        n = args.trials * args.coeffs
        results[name] = (counts, elapsed)
        print(f"{name:>7}: {elapsed:8.3f} s  ({n / elapsed / 1e6:6.2f} Mdraw/s)")

    if len(results) == 2:
        py, cy = results["python"][0], results["cython"][0]
        identical = np.array_equal(py, cy)
        print(f"backends bit-identical: {identical}")
        speedup = results["python"][1] / results["cython"][1]
        print(f"speedup: {speedup:.1f}x")


if __name__ == "__main__":
    main()
