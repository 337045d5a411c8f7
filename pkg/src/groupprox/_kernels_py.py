"""Pure NumPy fallback for the blockwise proximal kernels.

Mirrors the compiled extension exactly: same candidate scan, same
closed-form roots, same tie preferences. Selected automatically when the
extension is unavailable (see ``groupprox._backend``).
"""

from __future__ import annotations

import numpy as np

from .scalar import (
    BOUNDARY_GUARD,
    TIE_REL,
    _largest_root_value,
    _select_scalar_value,
    _t_tilde_value,
    _threshold_c_value,
)

BACKEND = "python"

_FEAS_GUARD = 1e-9


def _block_l1q_fractional(block: np.ndarray, nu: float, q: float) -> np.ndarray:
    out = np.zeros_like(block)
    az = np.abs(block)
    order = np.argsort(-az, kind="stable")
    z = az[order]
    if z[0] == 0.0:
        return out

    n = z.size
    zz = z * z
    suffix = np.zeros(n + 1)
    suffix[:n] = np.cumsum(zz[::-1])[::-1]
    j_zero = 0.5 * suffix[0]
    zero_ok = float(z[0]) <= _threshold_c_value(nu, q)

    feasible: list[tuple[int, float, float]] = []  # (s, J, c)
    kyfan = 0.0
    for s in range(1, n + 1):
        kyfan += float(z[s - 1])
        tt = _t_tilde_value(nu * s, q)
        if kyfan < tt * (1.0 - BOUNDARY_GUARD):
            continue
        a = _largest_root_value(nu * s, q, kyfan)
        c = nu * q * a ** (q - 1.0)
        band = _FEAS_GUARD * (1.0 + c)
        if not float(z[s - 1]) > c - band:
            continue
        if s < n and not float(z[s]) <= c + band:
            continue
        j = nu * a**q + (kyfan - a) ** 2 / (2.0 * s) + 0.5 * suffix[s]
        feasible.append((s, j, c))

    if not feasible:
        return out
    j_min = min(j for _, j, _ in feasible)
    j_star = min(j_min, j_zero) if zero_ok else j_min
    tie = TIE_REL * (1.0 + j_star)
    if j_min > j_star + tie:
        return out
    s_best, _, c_best = max(
        (e for e in feasible if e[1] <= j_star + tie), key=lambda e: e[0]
    )
    top = order[:s_best]
    out[top] = np.sign(block[top]) * np.maximum(z[:s_best] - c_best, 0.0)
    return out


def _block_l1q(block: np.ndarray, nu: float, q: float) -> np.ndarray:
    if q == 1.0:
        return np.sign(block) * np.maximum(np.abs(block) - nu, 0.0)
    if q == 0.0:
        j_zero = 0.5 * float(block @ block)
        tie = TIE_REL * (1.0 + min(j_zero, nu))
        return block.copy() if nu <= j_zero + tie else np.zeros_like(block)
    return _block_l1q_fractional(block, nu, q)


def _block_l2q(block: np.ndarray, nu: float, q: float) -> np.ndarray:
    r = float(np.linalg.norm(block))
    if r == 0.0:
        return np.zeros_like(block)
    val = _select_scalar_value(nu, q, r)
    return (val / r) * block


def blockwise_prox(v, indices, offsets, weight, p, q, out):
    """Apply the solver-facing block prox group by group into ``out``."""
    for g in range(offsets.size - 1):
        sel = indices[offsets[g] : offsets[g + 1]]
        block = v[sel]
        out[sel] = _block_l1q(block, weight, q) if p == 1 else _block_l2q(block, weight, q)
    return out
