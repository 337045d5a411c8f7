"""Brute-force grid minimizer of the prox objective for n <= 3.

Used to certify the exact operators and to pin reference values: the
search is a plain multi-level refinement on a product grid and shares no
code with the candidate enumeration it checks.

By the sign-agreement property of minimizers, the search runs over the
nonnegative box ``prod_i [0, |y_i|]`` and maps back through the signs;
``restrict_signs=False`` searches the full signed box instead (n <= 2) as
a guard on that very assumption.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scalar import ScalarPenalty

__all__ = ["OracleResult", "grid_min"]

_BASE_POINTS = 201
_REFINE_POINTS = 21


@dataclass(frozen=True)
class OracleResult:
    minimizer: np.ndarray
    objective: float
    grid_resolution: float


def _power_penalty_inplace(mass: np.ndarray, nu: float, q: float, p: int) -> np.ndarray:
    """In place: ``nu * ||.||_p**q`` from the accumulated mass.

    For p=1 ``mass`` holds the sum of magnitudes; for p=2 it holds the sum
    of squares, absorbed by halving the exponent. 0**0 := 0 either way.
    """
    exponent = q if p == 1 else 0.5 * q
    if q == 0.0:
        out = (mass > 0.0).astype(float)
        out *= nu
        return out
    np.power(mass, exponent, out=mass)
    mass *= nu
    return mass


def _grid_eval(anchor, grids, nu, q, p):
    """Exhaustive objective evaluation over the product of 1-D grids."""
    n = len(grids)
    quads = [0.5 * (g - anchor[i]) ** 2 for i, g in enumerate(grids)]
    parts = [np.abs(g) if p == 1 else g * g for g in grids]
    if n == 1:
        J = _power_penalty_inplace(parts[0].copy(), nu, q, p)
        J += quads[0]
    elif n == 2:
        mass = parts[0][:, None] + parts[1][None, :]
        J = _power_penalty_inplace(mass, nu, q, p)
        J += quads[0][:, None]
        J += quads[1][None, :]
    else:
        pair = parts[0][:, None, None] + parts[1][None, :, None]
        mass = pair + parts[2][None, None, :]
        J = _power_penalty_inplace(mass, nu, q, p)
        J += quads[0][:, None, None]
        J += quads[1][None, :, None]
        J += quads[2][None, None, :]
    flat = int(np.argmin(J))
    idx = np.unravel_index(flat, J.shape)
    point = np.array([grids[i][idx[i]] for i in range(n)])
    return float(J[idx]), point


def _axis_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    return np.linspace(lo, hi, points)


def grid_min(
    y,
    pen: ScalarPenalty,
    p: int = 1,
    levels: int = 3,
    restrict_signs: bool = True,
) -> OracleResult:
    """Multi-level grid search for the minimum of the prox objective.

    Level 1 uses 201 points per axis over the search box; each further
    level re-grids a one-cell window around the incumbent at 10x finer
    resolution. The best value never increases across levels.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {y.shape}")
    n = y.size
    if n > 3:
        raise ValueError(f"grid oracle is limited to n <= 3, got n={n}")
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")

    a = np.abs(y)
    if restrict_signs:
        signs = np.sign(y)
        anchor = a
        los, his = np.zeros(n), a.copy()
    else:
        if n > 2:
            raise ValueError("sign-unrestricted search is limited to n <= 2")
        signs = np.ones(n)
        anchor = y
        los, his = -a, a.copy()

    grids = [_axis_grid(los[i], his[i], _BASE_POINTS) for i in range(n)]
    steps = np.array(
        [g[1] - g[0] if g.size > 1 else 0.0 for g in grids]
    )
    best_obj, best_pt = _grid_eval(anchor, grids, pen.nu, pen.q, p)

    for _ in range(levels - 1):
        grids = []
        for i in range(n):
            if steps[i] == 0.0:
                grids.append(np.array([best_pt[i]]))
                continue
            lo = max(los[i], best_pt[i] - steps[i])
            hi = min(his[i], best_pt[i] + steps[i])
            grids.append(_axis_grid(lo, hi, _REFINE_POINTS))
        steps = np.array([g[1] - g[0] if g.size > 1 else 0.0 for g in grids])
        obj, pt = _grid_eval(anchor, grids, pen.nu, pen.q, p)
        if obj < best_obj:
            best_obj, best_pt = obj, pt

    return OracleResult(
        minimizer=signs * best_pt,
        objective=best_obj,
        grid_resolution=float(steps.max()) if n else 0.0,
    )
