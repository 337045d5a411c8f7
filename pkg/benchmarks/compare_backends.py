"""Compare the compiled blockwise-prox kernels against the NumPy fallback.

Times the raw kernel on solver-shaped workloads and one end-to-end solve
with each backend swapped in. Run as::

    python benchmarks/compare_backends.py [--iters N]
"""

import argparse
import time

import numpy as np

import groupprox.solver as solver_mod
from groupprox import (
    GroupPartition,
    ProblemInstance,
    SolverConfig,
    apg_solve,
)
from groupprox import _kernels_py

try:
    from groupprox import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def time_kernel(kernels, v, part, weight, p, q, iters):
    out = np.empty_like(v)
    kernels.blockwise_prox(v, part.indices, part.offsets, weight, p, q, out)
    t0 = time.perf_counter()
    for _ in range(iters):
        kernels.blockwise_prox(v, part.indices, part.offsets, weight, p, q, out)
    return (time.perf_counter() - t0) / iters


def time_solve(kernels, problem, config):
    saved = solver_mod.kernels
    solver_mod.kernels = kernels
    try:
        apg_solve(problem, config)  # warm
        t0 = time.perf_counter()
        apg_solve(problem, config)
        return time.perf_counter() - t0
    finally:
        solver_mod.kernels = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=200)
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled extension not available; nothing to compare")
        return

    rng = np.random.default_rng(0)
    l, r = 1024, 128
    part = GroupPartition.equal_blocks(l, r)
    v = rng.normal(0, 1.0, l)

    print(f"blockwise prox, l={l}, r={r}, {args.iters} calls each")
    print(f"{'workload':<16}{'compiled':>12}{'python':>12}{'speedup':>9}")
    for p, q in [(1, 0.5), (1, 2.0 / 3.0), (1, 0.8), (2, 0.5), (2, 1.0)]:
        tc = time_kernel(_kernels_c, v, part, 0.05, p, q, args.iters)
        tp = time_kernel(_kernels_py, v, part, 0.05, p, q, args.iters)
        print(
            f"p={p} q={q:<6.3g}{tc * 1e6:>10.1f}us{tp * 1e6:>10.1f}us{tp / tc:>8.1f}x"
        )

    m = 256
    A = rng.standard_normal((m, l))
    A /= np.linalg.norm(A, axis=0)
    xbar = np.zeros(l)
    xbar[:8] = rng.standard_normal(8)
    b = A @ xbar
    problem = ProblemInstance(
        A=A, b=b, lam=3e-4 * np.max(np.abs(A.T @ b)), partition=part, p=1, q=0.5
    )
    config = SolverConfig(max_iter=300, rel_tol=0.0)
    tc = time_solve(_kernels_c, problem, config)
    tp = time_solve(_kernels_py, problem, config)
    print(f"\nend-to-end solve, m={m}, l={l}, 300 iterations")
    print(f"compiled: {tc:.3f}s   python: {tp:.3f}s   speedup: {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
