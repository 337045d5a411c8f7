"""Accelerated proximal-gradient solver for group-penalized least squares.

Minimizes ``F(x) = ||A x - b||_2**2 / 2 + lam * sum_i ||x_{G_i}||_p**q``
over a non-overlapping partition ``{G_i}`` of the coordinates, with the
standard momentum sequence ``t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels

__all__ = [
    "DimensionError",
    "GroupPartition",
    "ProblemInstance",
    "SolverConfig",
    "SolverTrace",
    "blockwise_prox",
    "default_step",
    "momentum_next",
    "objective_value",
    "apg_solve",
    "fixed_point_residual",
]


class DimensionError(ValueError):
    """Shapes or index sets that do not fit together."""


@dataclass(frozen=True)
class GroupPartition:
    """Non-overlapping partition of ``range(size)`` into index groups."""

    groups: tuple[np.ndarray, ...]
    size: int
    indices: np.ndarray = field(init=False, repr=False, default=None)
    offsets: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        groups = tuple(np.asarray(g, dtype=np.int64).ravel() for g in self.groups)
        object.__setattr__(self, "groups", groups)
        if any(g.size == 0 for g in groups):
            raise DimensionError("empty groups are not allowed")
        flat = np.concatenate(groups) if groups else np.empty(0, dtype=np.int64)
        if flat.size != self.size or not np.array_equal(
            np.sort(flat), np.arange(self.size, dtype=np.int64)
        ):
            raise DimensionError(
                f"groups must partition range({self.size}) without overlap"
            )
        offsets = np.zeros(len(groups) + 1, dtype=np.int64)
        np.cumsum([g.size for g in groups], out=offsets[1:])
        object.__setattr__(self, "indices", flat)
        object.__setattr__(self, "offsets", offsets)

    def __len__(self) -> int:
        return len(self.groups)

    @classmethod
    def equal_blocks(cls, size: int, r: int) -> "GroupPartition":
        """Split ``range(size)`` into ``r`` contiguous groups of equal size."""
        if r < 1 or size % r != 0:
            raise DimensionError(f"group count {r} must divide the length {size}")
        width = size // r
        groups = tuple(
            np.arange(i * width, (i + 1) * width, dtype=np.int64) for i in range(r)
        )
        return cls(groups=groups, size=size)


@dataclass(frozen=True)
class ProblemInstance:
    """Least squares with a blockwise ``lam * ||.||_p**q`` penalty."""

    A: np.ndarray
    b: np.ndarray
    lam: float
    partition: GroupPartition
    p: int
    q: float

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if A.ndim != 2:
            raise DimensionError(f"A must be a matrix, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise DimensionError(
                f"b has shape {b.shape}, expected ({A.shape[0]},)"
            )
        if self.partition.size != A.shape[1]:
            raise DimensionError(
                f"partition covers {self.partition.size} coordinates, A has {A.shape[1]} columns"
            )
        if not self.lam > 0.0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.p not in (1, 2):
            raise ValueError(f"p must be 1 or 2, got {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class SolverConfig:
    step_nu: float | None = None  # None: 0.99 / ||A||_2^2 via power iteration
    max_iter: int = 500
    rel_tol: float = 1e-8
    record_trace: bool = True


@dataclass
class SolverTrace:
    """Per-iteration objective values, plus relative errors when a ground
    truth was supplied. Entry ``i`` belongs to iterate ``i + 1``."""

    objectives: list[float]
    rel_errors: list[float] | None = None

    def __len__(self) -> int:
        return len(self.objectives)


def momentum_next(t: float) -> float:
    """One step of the momentum recursion."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))


def blockwise_prox(v, partition: GroupPartition, weight: float, p: int, q: float):
    """Solver-facing prox of ``weight * ||.||_p**q`` applied per block."""
    v = np.ascontiguousarray(v, dtype=float)
    if v.ndim != 1 or v.size != partition.size:
        raise DimensionError(
            f"vector of size {v.size} does not match partition over {partition.size}"
        )
    if not weight > 0.0:
        raise ValueError(f"prox weight must be positive, got {weight}")
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    out = np.empty_like(v)
    kernels.blockwise_prox(
        v, partition.indices, partition.offsets, float(weight), int(p), float(q), out
    )
    return out


def default_step(A, tol: float = 1e-8, max_iter: int = 1000) -> float:
    """``0.99 / ||A||_2^2`` with the spectral norm from power iteration.

    Iterates until the Rayleigh estimate is stable to ``tol`` relative; the
    fixed internal seed keeps the estimate reproducible.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0 or not np.any(A):
        raise ValueError("cannot pick a step size for a zero matrix")
    rng = np.random.default_rng(0)
    v = rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    lam_prev = 0.0
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v
        lam = float(w @ w)
        if lam == 0.0:  # started in the null space; re-seed once
            v = rng.standard_normal(A.shape[1])
            v /= np.linalg.norm(v)
            continue
        v = A.T @ w
        v /= np.linalg.norm(v)
        if abs(lam - lam_prev) <= tol * lam:
            break
        lam_prev = lam
    return 0.99 / lam


def objective_value(problem: ProblemInstance, x) -> float:
    """Full objective ``||Ax - b||^2 / 2 + lam * sum_g ||x_g||_p**q``."""
    x = np.asarray(x, dtype=float)
    r = problem.A @ x - problem.b
    total = 0.5 * float(r @ r)
    for g in problem.partition.groups:
        block = x[g]
        norm = float(np.abs(block).sum()) if problem.p == 1 else float(
            np.linalg.norm(block)
        )
        if norm > 0.0:
            total += problem.lam * norm**problem.q
    return total


def apg_solve(
    problem: ProblemInstance,
    config: SolverConfig,
    x0=None,
    ground_truth=None,
):
    """Run the accelerated proximal-gradient iteration.

    Returns ``(x, trace)``. Iteration k proxes the gradient step
    ``y_k - step * A^T (A y_k - b)`` blockwise, then applies the momentum
    update; it stops at ``max_iter`` or when the iterate change
    ``||x_k - x_{k-1}|| / max(1, ||x_k||)`` drops below ``rel_tol``.
    """
    A, b = problem.A, problem.b
    l = A.shape[1]
    step = config.step_nu if config.step_nu is not None else default_step(A)
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if x0 is None:
        x_prev = np.zeros(l)
    else:
        x_prev = np.array(x0, dtype=float)
        if x_prev.shape != (l,):
            raise DimensionError(f"x0 has shape {x_prev.shape}, expected ({l},)")
    gt = None
    gt_norm = 0.0
    if ground_truth is not None:
        gt = np.asarray(ground_truth, dtype=float)
        if gt.shape != (l,):
            raise DimensionError(
                f"ground truth has shape {gt.shape}, expected ({l},)"
            )
        gt_norm = float(np.linalg.norm(gt))
        if gt_norm == 0.0:
            raise ValueError("ground truth must be nonzero to track relative error")

    weight = problem.lam * step
    yk = x_prev.copy()
    t_k = 1.0
    objectives: list[float] = []
    rel_errors: list[float] | None = [] if gt is not None else None

    x = x_prev
    for _ in range(config.max_iter):
        grad = A.T @ (A @ yk - b)
        x = blockwise_prox(yk - step * grad, problem.partition, weight, problem.p, problem.q)
        t_next = momentum_next(t_k)
        yk = x + ((t_k - 1.0) / t_next) * (x - x_prev)
        if config.record_trace:
            objectives.append(objective_value(problem, x))
            if rel_errors is not None:
                rel_errors.append(float(np.linalg.norm(x - gt)) / gt_norm)
        dx = float(np.linalg.norm(x - x_prev))
        x_prev = x
        t_k = t_next
        if dx / max(1.0, float(np.linalg.norm(x))) < config.rel_tol:
            break

    return x, SolverTrace(objectives=objectives, rel_errors=rel_errors)


def fixed_point_residual(problem: ProblemInstance, x, step: float) -> float:
    """Distance from ``x`` to one prox-gradient update of itself.

    Zero exactly at the fixed points the iteration can converge to.
    """
    x = np.asarray(x, dtype=float)
    grad = problem.A.T @ (problem.A @ x - problem.b)
    z = blockwise_prox(
        x - step * grad, problem.partition, problem.lam * step, problem.p, problem.q
    )
    return float(np.linalg.norm(x - z))
