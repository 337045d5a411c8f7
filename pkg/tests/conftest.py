import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)


def scalar_grid_min(nu, q, tau, points=20001, refine=2001):
    """Independent 1-D check: refined grid scan of nu*|t|**q + (t-tau)^2/2.

    Scans [0, |tau|] in the sign-reduced frame (the minimizer shares the
    sign of tau and cannot exceed it in magnitude), then refines once
    around the best point.
    """
    at = abs(tau)
    grid = np.linspace(0.0, at, points)
    vals = _scalar_objective_vec(nu, q, grid, at)
    i = int(np.argmin(vals))
    best, best_val = grid[i], vals[i]
    h = at / (points - 1) if points > 1 else 0.0
    if h > 0.0:
        lo, hi = max(0.0, best - h), min(at, best + h)
        grid2 = np.linspace(lo, hi, refine)
        vals2 = _scalar_objective_vec(nu, q, grid2, at)
        j = int(np.argmin(vals2))
        if vals2[j] < best_val:
            best, best_val = grid2[j], vals2[j]
    return float(best_val), float(best)


def _scalar_objective_vec(nu, q, t, tau):
    pen = nu * np.where(t > 0, t, 1.0) ** q
    pen[t == 0] = 0.0
    if q == 0.0:
        pen = nu * (t > 0).astype(float)
    return pen + 0.5 * (t - tau) ** 2


def bisect_root(f, lo, hi, iters=200):
    """Plain bisection on a sign change, used as the root-finding oracle."""
    flo, fhi = f(lo), f(hi)
    assert flo <= 0.0 <= fhi, "bisection oracle needs a bracketing interval"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
