"""Command-line surface: prox evaluation, zero-region scans, solving, and
recovery benchmarks.

Exit codes: 0 success, 2 malformed flags or invalid configuration, 3 file
or parse errors, 4 dimension mismatches.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import _svg, io
from .bench import DEFAULT_VARIANTS, ExperimentConfig, run_convergence, run_sweep
from .l1q import prox_l1q, save_region_csv, sort_signed, support_table, zero_region_scan
from .l2q import prox_l2q
from .scalar import ScalarPenalty
from .solver import DimensionError, ProblemInstance, SolverConfig, apg_solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIM = 4


def _vector_arg(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok != ""])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from exc


def _variants_arg(text: str):
    variants = []
    try:
        for tok in text.split(","):
            p_str, q_str = tok.split(":")
            variants.append((int(p_str), float(q_str)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"variants must look like '1:0.5,2:1', got {text!r}"
        ) from exc
    return tuple(variants)


def _levels_arg(text: str):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated level list: {text!r}") from exc


def cmd_prox(args) -> int:
    pen = ScalarPenalty(nu=args.nu, q=args.q)
    y = args.y
    result = prox_l1q(y, pen) if args.p == 1 else prox_l2q(y, pen)
    table = []
    if args.p == 1 and 0.0 < args.q < 1.0:
        table = support_table(sort_signed(y), pen)

    if args.json:
        payload = {
            "input": [float(v) for v in y],
            "p": args.p,
            "q": args.q,
            "nu": args.nu,
            "minimizers": [[float(v) for v in m] for m in result.minimizers],
            "objective": result.objective,
            "candidates": table,
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK

    print(f"input y = {np.array2string(y, precision=6)}  (p={args.p}, q={args.q}, nu={args.nu})")
    print(f"objective J* = {result.objective!r}")
    for i, m in enumerate(result.minimizers):
        print(f"minimizer[{i}] = {np.array2string(m, precision=6)}")
    if table:
        print("s  kyfan        a            c_s          feasible  J")
        for row in table:
            print(
                f"{row['s']:<2d} {row['kyfan']:<12.6g} {row['a']:<12.6g} "
                f"{row['c']:<12.6g} {str(row['feasible']):<9s} {row['objective']:<.6g}"
            )
    return EXIT_OK


def cmd_region(args) -> int:
    pen = ScalarPenalty(nu=args.nu, q=args.q)
    if args.step <= 0:
        print("error: --step must be positive", file=sys.stderr)
        return EXIT_USAGE
    axis, grid = zero_region_scan(args.min, args.max, args.step, pen)
    try:
        save_region_csv(axis, grid, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.svg:
        _svg.region_plot(axis, grid, args.svg, title=f"prox = {{0}} region, q={args.q}")
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        A = io.load_matrix_csv(args.matrix)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load matrix {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        b = io.load_vector_csv(args.rhs)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load rhs {args.rhs}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        partition = io.load_groups_json(args.groups, A.shape[1])
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, DimensionError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DIM
        print(f"error: cannot load groups {args.groups}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        problem = ProblemInstance(
            A=A, b=b, lam=args.lam, partition=partition, p=args.p, q=args.q
        )
        config = SolverConfig(
            step_nu=args.step, max_iter=args.max_iter, rel_tol=args.tol
        )
        x, trace = apg_solve(problem, config)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM

    try:
        io.save_vector_csv(x, args.out)
        if args.trace:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write("iter,objective\n")
                for i, obj in enumerate(trace.objectives, start=1):
                    fh.write(f"{i},{obj!r}\n")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _bench_config(args) -> ExperimentConfig:
    groups = None
    if args.groups:
        groups = io.load_groups_json(args.groups, args.l)
    return ExperimentConfig(
        m=args.m,
        l=args.l,
        r=args.r,
        k=1,
        sigma=args.sigma,
        trials=getattr(args, "trials", 1),
        seed=args.seed,
        lam=args.lam,
        lambda_scale=args.lambda_scale,
        variants=args.variants,
        max_iter=args.max_iter,
        rel_tol=args.tol,
        groups=groups,
    )


def cmd_bench_sweep(args) -> int:
    try:
        config = _bench_config(args)
        result = run_sweep(config, args.levels)
    except OSError as exc:
        print(f"error: cannot load groups {args.groups}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result.to_csv(args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.svg:
        series = []
        for p, q in config.variants:
            pts = [
                (row.sparsity_level, row.success_rate)
                for row in result.rows
                if row.p == p and row.q == q
            ]
            series.append((f"p={p}, q={q:.4g}", [x for x, _ in pts], [y for _, y in pts]))
        _svg.line_plot(
            series,
            args.svg,
            title="success rate vs sparsity level",
            xlabel="k / r",
            ylabel="success rate",
        )
    return EXIT_OK


def cmd_bench_convergence(args) -> int:
    if len(args.levels) != 1:
        print("error: convergence takes exactly one --levels value", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = _bench_config(args)
        result = run_convergence(config, args.levels[0], max_iter=args.max_iter)
    except OSError as exc:
        print(f"error: cannot load groups {args.groups}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result.to_csv(args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.svg:
        series = []
        for p, q in config.variants:
            iters, rels = result.series(p, q)
            series.append((f"p={p}, q={q:.4g}", iters, rels))
        _svg.line_plot(
            series,
            args.svg,
            title="relative error vs iteration",
            xlabel="iteration",
            ylabel="relative error",
            logy=True,
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupprox",
        description="Group-sparsity proximal operators, solver, and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_prox = sub.add_parser("prox", help="evaluate one prox set")
    p_prox.add_argument("--p", type=int, choices=(1, 2), required=True)
    p_prox.add_argument("--q", type=float, required=True)
    p_prox.add_argument("--nu", type=float, required=True)
    p_prox.add_argument("--y", type=_vector_arg, required=True)
    fmt = p_prox.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--table", action="store_true")
    p_prox.set_defaults(func=cmd_prox)

    p_region = sub.add_parser("region", help="scan the prox = {0} region")
    p_region.add_argument("--q", type=float, required=True)
    p_region.add_argument("--nu", type=float, default=1.0)
    p_region.add_argument("--min", type=float, default=0.0)
    p_region.add_argument("--max", type=float, default=2.0)
    p_region.add_argument("--step", type=float, default=0.005)
    p_region.add_argument("--out", required=True)
    p_region.add_argument("--svg")
    p_region.set_defaults(func=cmd_region)

    p_solve = sub.add_parser("solve", help="solve a penalized least-squares problem")
    p_solve.add_argument("--matrix", required=True)
    p_solve.add_argument("--rhs", required=True)
    p_solve.add_argument("--groups", required=True)
    p_solve.add_argument("--lambda", dest="lam", type=float, required=True)
    p_solve.add_argument("--p", type=int, choices=(1, 2), required=True)
    p_solve.add_argument("--q", type=float, required=True)
    p_solve.add_argument("--step", type=float, default=None)
    p_solve.add_argument("--max-iter", type=int, default=500)
    p_solve.add_argument("--tol", type=float, default=1e-8)
    p_solve.add_argument("--out", required=True)
    p_solve.add_argument("--trace")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="recovery experiments")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)
    for name in ("sweep", "convergence"):
        bp = bench_sub.add_parser(name)
        bp.add_argument("--m", type=int, default=256)
        bp.add_argument("--l", type=int, default=1024)
        bp.add_argument("--r", type=int, default=128)
        bp.add_argument("--levels", type=_levels_arg, required=True)
        bp.add_argument("--sigma", type=float, default=0.001)
        bp.add_argument("--lambda", dest="lam", type=float, default=None)
        bp.add_argument("--lambda-scale", type=float, default=0.01)
        bp.add_argument("--variants", type=_variants_arg, default=DEFAULT_VARIANTS)
        bp.add_argument("--groups", default=None, help="JSON partition override")
        bp.add_argument("--seed", type=int, required=True)
        bp.add_argument("--max-iter", type=int, default=500)
        bp.add_argument("--tol", type=float, default=1e-7)
        bp.add_argument("--out", required=True)
        bp.add_argument("--svg")
        if name == "sweep":
            bp.add_argument("--trials", type=int, default=20)
            bp.set_defaults(func=cmd_bench_sweep)
        else:
            bp.set_defaults(func=cmd_bench_convergence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
