#!/usr/bin/env python3
"""Benchmark the tuple-contraction kernel: compiled extension vs the
numpy/einsum fallback.

The fallback materializes a |G|^(n+1) trace tensor, which is fast while
it fits in cache but blows up in memory with the group order and tensor
arity; the compiled kernel accumulates on the fly. Run after an editable
install:

    python benchmarks/bench_contract.py
"""

from __future__ import annotations

import time

import numpy as np

from deloceta import kernels


def bench(order: int, slots: int, n: int, repeats: int = 5) -> None:
    rng = np.random.default_rng(12345)
    supports = [np.arange(order, dtype=np.int32) for _ in range(slots)]
    mats = [
        rng.standard_normal((order, n, n)) + 1j * rng.standard_normal((order, n, n))
        for _ in range(slots)
    ]
    phi = rng.standard_normal(order**slots) + 1j * rng.standard_normal(order**slots)

    results = {}
    for name, fn in [("python", kernels.contract_python), ("compiled", kernels.contract_compiled)]:
        if name == "compiled" and kernels._ext is None:
            print(f"  {name:9s}: extension not built")
            continue
        value = fn(supports, mats, phi, order, n)
        best = min(
            _timed(fn, supports, mats, phi, order, n) for _ in range(repeats)
        )
        results[name] = (value, best)
        print(f"  {name:9s}: {best * 1e3:9.3f} ms   value = {value:.6f}")
    if len(results) == 2:
        a, b = results["python"][0], results["compiled"][0]
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), "backends disagree"
        print(f"  speedup  : {results['python'][1] / results['compiled'][1]:.2f}x")


def _timed(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}")
    for order, slots, n in [(6, 3, 3), (6, 5, 3), (24, 3, 3), (24, 5, 2)]:
        print(f"|G| = {order}, tensor slots = {slots}, N = {n}:")
        bench(order, slots, n)
