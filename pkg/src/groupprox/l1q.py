"""Set-valued proximal operator of ``nu * ||u||_1**q`` on R^n, 0 <= q <= 1.

The algorithm reduces the anchor to the sorted-magnitude frame, enumerates
one stationary candidate per admissible support size, and compares the
candidates (plus the zero vector where it is admissible) on the objective

    J_y(u) = nu * ||u||_1**q + ||u - y||_2**2 / 2.

The four-case characterization of the operator is deliberately not used as
control flow: the single enumerate-and-compare path makes those cases
checkable invariants instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scalar import (
    BOUNDARY_GUARD,
    TIE_REL,
    ScalarPenalty,
    _largest_root_value,
    _t_tilde_value,
    _threshold_c_value,
)

__all__ = [
    "SortedAbsView",
    "SupportCandidate",
    "ProxSet",
    "sort_signed",
    "candidate_for_support",
    "objective_J",
    "prox_l1q",
    "support_table",
    "zero_region_scan",
    "save_region_csv",
]

# Two minimizer vectors closer than this (sup-norm, relative to the anchor
# scale) are one minimizer hit twice through a knife-edge support test.
_DUP_TOL = 1e-9

# Guard band on the membership tests z_s > c >= z_{s+1}: anchors sitting
# exactly on the boundary (z = c in real arithmetic) must not lose a
# co-minimizer to ulp-level rounding of the root. Candidates admitted
# through the band duplicate a neighbouring support size and are deduped.
_FEAS_GUARD = 1e-9


@dataclass(frozen=True)
class SortedAbsView:
    """A vector reduced to descending magnitudes plus the map back.

    ``z[i] = signs[i] * y[order[i]]`` holds with ``signs`` in {-1, +1}
    (zero entries carry +1), so restoring is exact.
    """

    z: np.ndarray
    order: np.ndarray
    signs: np.ndarray

    def restore(self, u: np.ndarray) -> np.ndarray:
        """Map a sorted-frame vector back to the original coordinates."""
        out = np.empty_like(u)
        out[self.order] = self.signs * u
        return out


@dataclass(frozen=True)
class SupportCandidate:
    """Stationary candidate with exactly ``s`` nonzeros, in the sorted frame."""

    s: int
    kyfan: float
    a: float
    c: float
    u: np.ndarray
    objective: float


@dataclass(frozen=True)
class ProxSet:
    """All global minimizers of J_y (usually one, two on tie boundaries).

    Minimizers are ordered zero-first, then by descending support size.
    """

    minimizers: tuple[np.ndarray, ...]
    objective: float

    def select(self) -> np.ndarray:
        """Solver-facing single minimizer: largest support, nonzero at ties."""
        best = self.minimizers[0]
        best_nnz = int(np.count_nonzero(best))
        for m in self.minimizers[1:]:
            nnz = int(np.count_nonzero(m))
            if nnz > best_nnz:
                best, best_nnz = m, nnz
        return best


def sort_signed(y) -> SortedAbsView:
    """Stable descending sort of magnitudes with the signs recorded."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {y.shape}")
    a = np.abs(y)
    order = np.argsort(-a, kind="stable")
    signs = np.sign(y[order])
    signs[signs == 0.0] = 1.0
    return SortedAbsView(z=a[order], order=order, signs=signs)


def objective_J(y, u, pen: ScalarPenalty) -> float:
    """``nu * ||u||_1**q + ||u - y||_2**2 / 2`` with 0**0 := 0."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    if y.shape != u.shape:
        raise ValueError(f"shape mismatch: y {y.shape} vs u {u.shape}")
    l1 = float(np.abs(u).sum())
    pen_val = 0.0 if l1 == 0.0 else pen.nu * l1**pen.q
    d = u - y
    return pen_val + 0.5 * float(d @ d)


def candidate_for_support(
    view: SortedAbsView, s: int, pen: ScalarPenalty
) -> SupportCandidate | None:
    """The unique stationary point with support size ``s``, if it exists.

    Returns None when the mass equation has no root at this support size or
    when the membership tests ``z_s > c_s >= z_{s+1}`` fail (``z_{n+1} := 0``).
    Both tests carry a small relative band so that anchors constructed to
    sit exactly on a boundary survive rounding of the root.
    """
    z = view.z
    n = z.size
    if not 1 <= s <= n:
        raise ValueError(f"support size must lie in [1, {n}], got {s}")
    if not 0.0 < pen.q < 1.0:
        raise ValueError(f"candidate enumeration requires 0 < q < 1, got {pen.q}")

    kyfan = float(z[:s].sum())
    tt = _t_tilde_value(pen.nu * s, pen.q)
    if kyfan < tt * (1.0 - BOUNDARY_GUARD):
        return None
    a = _largest_root_value(pen.nu * s, pen.q, kyfan)
    c = pen.nu * pen.q * a ** (pen.q - 1.0)
    band = _FEAS_GUARD * (1.0 + c)
    z_s = float(z[s - 1])
    z_next = float(z[s]) if s < n else 0.0
    if not (z_s > c - band and z_next <= c + band):
        return None

    u = np.zeros(n)
    u[:s] = np.maximum(z[:s] - c, 0.0)
    tail = float(z[s:] @ z[s:])
    obj = pen.nu * a**pen.q + (kyfan - a) ** 2 / (2.0 * s) + 0.5 * tail
    return SupportCandidate(s=s, kyfan=kyfan, a=a, c=c, u=u, objective=obj)


def support_table(view: SortedAbsView, pen: ScalarPenalty) -> list[dict]:
    """Per-support diagnostics for every s, including infeasible rows.

    Each row carries s, the running Ky-Fan sum, the stationary mass ``a``
    and shrinkage ``c`` when the root exists (NaN otherwise), a feasibility
    flag, and the objective of the would-be candidate vector.
    """
    z = view.z
    n = z.size
    rows = []
    for s in range(1, n + 1):
        kyfan = float(z[:s].sum())
        tt = _t_tilde_value(pen.nu * s, pen.q)
        row = {
            "s": s,
            "kyfan": kyfan,
            "a": math.nan,
            "c": math.nan,
            "feasible": False,
            "objective": math.nan,
        }
        if kyfan >= tt * (1.0 - BOUNDARY_GUARD):
            a = _largest_root_value(pen.nu * s, pen.q, kyfan)
            c = pen.nu * pen.q * a ** (pen.q - 1.0)
            u = np.maximum(z - c, 0.0)
            row["a"] = a
            row["c"] = c
            row["objective"] = objective_J(z, u, pen)
            band = _FEAS_GUARD * (1.0 + c)
            z_next = float(z[s]) if s < n else 0.0
            row["feasible"] = bool(
                float(z[s - 1]) > c - band and z_next <= c + band
            )
        rows.append(row)
    return rows


def _zero_is_admissible(view: SortedAbsView, pen: ScalarPenalty) -> bool:
    # The zero vector stays in the running unless some magnitude exceeds the
    # scalar breakpoint, in which case it is provably not a minimizer.
    return float(view.z[0]) <= _threshold_c_value(pen.nu, pen.q) if view.z.size else True


def prox_l1q(y, pen: ScalarPenalty) -> ProxSet:
    """All global minimizers of J_y, in the original coordinates."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {y.shape}")
    n = y.size
    j_zero = 0.5 * float(y @ y)
    zeros = np.zeros(n)
    if not np.any(y):
        return ProxSet((zeros,), 0.0)

    q = pen.q
    if q == 0.0:
        # nu * ||u||_1**0 penalizes any nonzero vector by nu: keep-or-kill.
        j_keep = pen.nu
        tie = TIE_REL * (1.0 + min(j_zero, j_keep))
        if abs(j_zero - j_keep) <= tie:
            return ProxSet((zeros, y.copy()), min(j_zero, j_keep))
        if j_keep < j_zero:
            return ProxSet((y.copy(),), j_keep)
        return ProxSet((zeros,), j_zero)
    if q == 1.0:
        u = np.sign(y) * np.maximum(np.abs(y) - pen.nu, 0.0)
        return ProxSet((u,), objective_J(y, u, pen))

    view = sort_signed(y)
    entries: list[tuple[float, int, np.ndarray]] = []
    if _zero_is_admissible(view, pen):
        entries.append((j_zero, 0, np.zeros(n)))
    for s in range(1, n + 1):
        cand = candidate_for_support(view, s, pen)
        if cand is not None:
            entries.append((cand.objective, cand.s, cand.u))
    if not entries:
        raise AssertionError(
            "empty competitor set: zero excluded but no stationary candidate found"
        )

    j_star = min(j for j, _, _ in entries)
    tie = TIE_REL * (1.0 + j_star)
    winners = [e for e in entries if e[0] <= j_star + tie]
    winners.sort(key=lambda e: (e[1] != 0, -e[1]))

    scale = 1.0 + float(view.z[0])
    kept: list[tuple[float, int, np.ndarray]] = []
    for j, s, u in winners:
        dup = any(
            s_k != 0 and s != 0 and float(np.max(np.abs(u - u_k))) <= _DUP_TOL * scale
            for _, s_k, u_k in kept
        )
        if not dup:
            kept.append((j, s, u))

    minimizers = tuple(view.restore(u) for _, _, u in kept)
    return ProxSet(minimizers, j_star)


def zero_region_scan(lo: float, hi: float, step: float, pen: ScalarPenalty):
    """Classify each grid point of [lo, hi]^2 by whether its prox is exactly {0}.

    Returns ``(axis, grid)`` where ``grid[i, j]`` corresponds to the anchor
    ``(axis[i], axis[j])``. Boundary anchors whose prox contains a nonzero
    co-minimizer are classified False.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    axis = lo + step * np.arange(count)
    grid = np.empty((count, count), dtype=bool)
    point = np.empty(2)
    for i in range(count):
        point[0] = axis[i]
        for j in range(count):
            point[1] = axis[j]
            ps = prox_l1q(point, pen)
            grid[i, j] = len(ps.minimizers) == 1 and not np.any(ps.minimizers[0])
    return axis, grid


def save_region_csv(axis: np.ndarray, grid: np.ndarray, path) -> None:
    """Write a scan as ``y1,y2,is_zero`` rows with a header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("y1,y2,is_zero\n")
        for i, y1 in enumerate(axis):
            for j, y2 in enumerate(axis):
                fh.write(f"{float(y1)!r},{float(y2)!r},{1 if grid[i, j] else 0}\n")
