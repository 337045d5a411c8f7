"""Group-sparse recovery experiments: instance generation, success-rate
sweeps over sparsity levels, and convergence traces per regularizer variant.

Randomness is counter-based: every trial derives its own generator from
``(seed, trial_index, purpose)``, so results are independent of worker
scheduling and identical across runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .solver import (
    GroupPartition,
    ProblemInstance,
    SolverConfig,
    apg_solve,
    default_step,
    objective_value,
)

__all__ = [
    "DEFAULT_VARIANTS",
    "ExperimentConfig",
    "SweepRow",
    "SweepResult",
    "ConvergenceResult",
    "gen_instance",
    "is_success",
    "run_sweep",
    "run_convergence",
    "worker_count",
]

# The five regularizer variants compared throughout: (p, q).
DEFAULT_VARIANTS: tuple[tuple[int, float], ...] = (
    (2, 1.0),
    (2, 2.0 / 3.0),
    (2, 0.5),
    (1, 2.0 / 3.0),
    (1, 0.5),
)

_STREAM_MATRIX = 0
_STREAM_SIGNAL = 1
_STREAM_NOISE = 2

SUCCESS_REL_ERR = 0.005


@dataclass(frozen=True)
class ExperimentConfig:
    """Shape, noise and solver settings for one experiment family.

    Groups default to ``r`` equal contiguous blocks; an explicit partition
    (e.g. loaded from a JSON groups file) overrides that and lifts the
    divisibility requirement.
    """

    m: int
    l: int
    r: int
    k: int
    sigma: float
    trials: int
    seed: int
    lam: float | None = None  # absolute override; None scales ||A^T b||_inf
    lambda_scale: float = 0.01
    variants: tuple[tuple[int, float], ...] = DEFAULT_VARIANTS
    max_iter: int = 500
    rel_tol: float = 1e-7
    step: float | None = None
    groups: GroupPartition | None = None

    def __post_init__(self):
        if self.groups is None:
            if self.l % self.r != 0:
                raise ValueError(f"r={self.r} must divide l={self.l}")
        else:
            if self.groups.size != self.l or len(self.groups) != self.r:
                raise ValueError(
                    f"groups cover {self.groups.size} coordinates in "
                    f"{len(self.groups)} groups, expected l={self.l}, r={self.r}"
                )
        if not 0 <= self.k <= self.r:
            raise ValueError(f"k={self.k} must lie in [0, r={self.r}]")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        for p, q in self.variants:
            if p not in (1, 2) or not 0.0 <= q <= 1.0:
                raise ValueError(f"invalid variant (p={p}, q={q})")

    def partition(self) -> GroupPartition:
        if self.groups is not None:
            return self.groups
        return GroupPartition.equal_blocks(self.l, self.r)


@dataclass(frozen=True)
class SweepRow:
    sparsity_level: float
    p: int
    q: float
    success_rate: float
    trials: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("sparsity_level,p,q,success_rate,trials\n")
            for row in self.rows:
                fh.write(
                    f"{row.sparsity_level!r},{row.p},{row.q!r},"
                    f"{row.success_rate!r},{row.trials}\n"
                )


@dataclass(frozen=True)
class ConvergenceResult:
    """Rows of (iter, p, q, rel_error, objective); iteration 0 is the
    initial point, shared across variants."""

    rows: tuple[tuple[int, int, float, float, float], ...]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("iter,p,q,rel_error,objective\n")
            for it, p, q, rel, obj in self.rows:
                fh.write(f"{it},{p},{q!r},{rel!r},{obj!r}\n")

    def series(self, p: int, q: float):
        """(iters, rel_errors) for one variant."""
        pts = [(it, rel) for it, pp, qq, rel, _ in self.rows if pp == p and qq == q]
        return [x[0] for x in pts], [x[1] for x in pts]


def _stream(config: ExperimentConfig, trial_index: int, purpose: int):
    seq = np.random.SeedSequence(
        entropy=int(config.seed) & 0xFFFFFFFFFFFFFFFF,
        spawn_key=(int(trial_index), purpose),
    )
    return np.random.default_rng(seq)


def gen_instance(config: ExperimentConfig, trial_index: int):
    """One random instance ``(A, xbar, b)``.

    A is i.i.d. Gaussian with unit-norm columns; ``k`` groups drawn without
    replacement carry i.i.d. Gaussian entries; b adds ``sigma``-scaled
    Gaussian noise. Bit-identical for identical ``(config, trial_index)``.
    """
    rng_a = _stream(config, trial_index, _STREAM_MATRIX)
    A = rng_a.standard_normal((config.m, config.l))
    A /= np.linalg.norm(A, axis=0)

    rng_x = _stream(config, trial_index, _STREAM_SIGNAL)
    xbar = np.zeros(config.l)
    if config.k > 0:
        groups = config.partition().groups
        active = np.sort(rng_x.choice(config.r, size=config.k, replace=False))
        for g in active:
            xbar[groups[g]] = rng_x.standard_normal(groups[g].size)

    b = A @ xbar
    if config.sigma > 0.0:
        rng_n = _stream(config, trial_index, _STREAM_NOISE)
        b = b + config.sigma * rng_n.standard_normal(config.m)
    return A, xbar, b


def is_success(x, xbar) -> bool:
    """Recovery counts as a success below 0.5% relative l2 error."""
    xbar = np.asarray(xbar, dtype=float)
    ref = float(np.linalg.norm(xbar))
    if ref == 0.0:
        raise ValueError("success is undefined for a zero ground truth")
    return float(np.linalg.norm(np.asarray(x, dtype=float) - xbar)) / ref < SUCCESS_REL_ERR


def worker_count() -> int:
    """Worker cap from GROUPPROX_THREADS (default: serial)."""
    raw = os.environ.get("GROUPPROX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"GROUPPROX_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def _level_to_k(level, r: int) -> int:
    """Sparsity levels below 1 are fractions k/r; 1 and above are k itself."""
    if 0 < level < 1:
        return max(1, round(level * r))
    k = int(level)
    if k != level or k < 1:
        raise ValueError(f"invalid sparsity level {level!r}")
    return k


def _lambda_for(config: ExperimentConfig, A, b) -> float:
    if config.lam is not None:
        return config.lam
    return config.lambda_scale * float(np.max(np.abs(A.T @ b)))


def _solve_variants(config: ExperimentConfig, A, xbar, b, ground_truth=None):
    """Run every variant on one instance; returns per-variant results."""
    partition = config.partition()
    lam = _lambda_for(config, A, b)
    step = config.step if config.step is not None else default_step(A)
    out = []
    for p, q in config.variants:
        problem = ProblemInstance(A=A, b=b, lam=lam, partition=partition, p=p, q=q)
        cfg = SolverConfig(
            step_nu=step,
            max_iter=config.max_iter,
            rel_tol=config.rel_tol,
            record_trace=ground_truth is not None,
        )
        x, trace = apg_solve(problem, cfg, ground_truth=ground_truth)
        out.append((p, q, x, trace))
    return out


def run_sweep(config: ExperimentConfig, sparsity_levels) -> SweepResult:
    """Average success over ``config.trials`` instances per level and variant.

    Instances are shared across variants within a trial; trials may run on
    a thread pool, with results reduced in trial order either way.
    """
    levels_k = [_level_to_k(level, config.r) for level in sparsity_levels]
    rows: list[SweepRow] = []
    workers = worker_count()

    for k in levels_k:
        cfg_k = replace(config, k=k)

        def one_trial(trial_index: int, cfg=cfg_k):
            # a trial that errors out inside the solver counts as failed
            try:
                A, xbar, b = gen_instance(cfg, trial_index)
                results = _solve_variants(cfg, A, xbar, b)
                return [is_success(x, xbar) for _, _, x, _ in results]
            except (ValueError, FloatingPointError, np.linalg.LinAlgError):
                return [False] * len(cfg.variants)

        if workers == 1:
            per_trial = [one_trial(t) for t in range(config.trials)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                per_trial = list(pool.map(one_trial, range(config.trials)))

        hits = np.array(per_trial, dtype=float).sum(axis=0)
        for j, (p, q) in enumerate(config.variants):
            rows.append(
                SweepRow(
                    sparsity_level=k / config.r,
                    p=p,
                    q=q,
                    success_rate=float(hits[j]) / config.trials,
                    trials=config.trials,
                )
            )
    return SweepResult(rows=tuple(rows))


def run_convergence(config: ExperimentConfig, level, max_iter: int | None = None) -> ConvergenceResult:
    """Trace objective and relative error on one shared seeded instance."""
    k = _level_to_k(level, config.r)
    cfg = replace(config, k=k)
    if max_iter is not None:
        cfg = replace(cfg, max_iter=max_iter, rel_tol=0.0)
    if cfg.k < 1:
        raise ValueError("convergence traces need at least one active group")

    A, xbar, b = gen_instance(cfg, 0)
    results = _solve_variants(cfg, A, xbar, b, ground_truth=xbar)

    rows: list[tuple[int, int, float, float, float]] = []
    partition = cfg.partition()
    lam = _lambda_for(cfg, A, b)
    x0_rel = 1.0  # x0 = 0
    for p, q in cfg.variants:
        problem = ProblemInstance(A=A, b=b, lam=lam, partition=partition, p=p, q=q)
        rows.append((0, p, q, x0_rel, objective_value(problem, np.zeros(cfg.l))))
    for p, q, _, trace in results:
        for i, (obj, rel) in enumerate(zip(trace.objectives, trace.rel_errors), start=1):
            rows.append((i, p, q, rel, obj))
    rows.sort(key=lambda row: (row[0], _variant_rank(cfg.variants, row[1], row[2])))
    return ConvergenceResult(rows=tuple(rows))


def _variant_rank(variants, p, q) -> int:
    for i, (pp, qq) in enumerate(variants):
        if pp == p and qq == q:
            return i
    return len(variants)
