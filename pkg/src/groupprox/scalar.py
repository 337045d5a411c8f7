"""Exact proximal operator of ``nu * |t|**q`` on the real line.

This module also provides the largest-root solver for the stationarity
equation ``t + nu*s*q * t**(q-1) = b`` that the vector operators reuse:
for support size ``s`` the l1-mass of a stationary point solves exactly
this equation with ``b`` equal to the sum of the ``s`` largest magnitudes.

Closed forms are used for q in {0, 1/2, 2/3, 1}; every other exponent in
(0, 1) falls back to a safeguarded Newton iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ScalarPenalty",
    "ScalarProxResult",
    "threshold_c",
    "magnitude_at_threshold",
    "t_hat",
    "t_tilde",
    "largest_stationary_root",
    "prox_scalar",
    "scalar_objective",
]

TWO_THIRDS = 2.0 / 3.0

# Relative tolerance below which two objective values count as a tie
# (exact equality at a breakpoint is measure-zero in floats).
TIE_REL = 1e-10

# Relative slack accepted on the root-existence test b >= t_tilde(s), so
# that anchors constructed to sit exactly on the breakpoint survive the
# rounding of t_tilde itself.
BOUNDARY_GUARD = 1e-12


@dataclass(frozen=True)
class ScalarPenalty:
    """Weight and exponent of the penalty ``nu * |t|**q``, 0 <= q <= 1."""

    nu: float
    q: float

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class ScalarProxResult:
    """All global minimizers of ``nu*|t|**q + (t - tau)**2 / 2``.

    ``values`` has one element away from the breakpoint and two exactly on
    it (zero listed first); ``objective`` is the shared minimal value.
    """

    values: tuple[float, ...]
    objective: float


def scalar_objective(nu: float, q: float, t: float, tau: float) -> float:
    """Evaluate ``nu*|t|**q + (t - tau)**2 / 2`` with the 0**0 := 0 convention."""
    at = abs(t)
    pen = 0.0 if at == 0.0 else nu * at**q
    return pen + 0.5 * (t - tau) * (t - tau)


def _threshold_c_value(nu: float, q: float) -> float:
    return (2.0 - q) / (2.0 * (1.0 - q)) * (2.0 * nu * (1.0 - q)) ** (1.0 / (2.0 - q))


def _magnitude_value(nu: float, q: float) -> float:
    return (2.0 * nu * (1.0 - q)) ** (1.0 / (2.0 - q))


def _t_hat_value(nu_s: float, q: float) -> float:
    return (nu_s * q * (1.0 - q)) ** (1.0 / (2.0 - q))


def _t_tilde_value(nu_s: float, q: float) -> float:
    return (2.0 - q) * (nu_s * q / (1.0 - q) ** (1.0 - q)) ** (1.0 / (2.0 - q))


def _root_half(nu_s: float, b: float) -> float:
    # Largest root of t + (nu_s/2) t**(-1/2) = b via the trigonometric
    # solution of the depressed cubic; valid for b >= t_tilde.
    arg = -0.75 * math.sqrt(3.0) * nu_s / (b * math.sqrt(b))
    if arg < -1.0:
        arg = -1.0
    elif arg > 1.0:
        arg = 1.0
    c = math.cos(math.acos(arg) / 3.0)
    return (4.0 * b / 3.0) * c * c


def _root_two_thirds(nu_s: float, b: float) -> float:
    # Largest root of t + (2 nu_s / 3) t**(-1/3) = b by radicals. The second
    # cube-root term is recovered from the product identity to avoid the
    # cancellation A - sqrt(A^2 - C) for large b.
    A = b * b / 16.0
    C = 8.0 * nu_s * nu_s * nu_s / 729.0
    D = A * A - C
    if D < 0.0:
        D = 0.0
    u = (A + math.sqrt(D)) ** (1.0 / 3.0)
    t = u + C ** (1.0 / 3.0) / u
    s2t = math.sqrt(2.0 * t)
    inner = 2.0 * b / s2t - 2.0 * t
    if inner < 0.0:
        inner = 0.0
    w = s2t + math.sqrt(inner)
    return 0.125 * w * w * w


def _root_generic(nu_s: float, q: float, b: float, lo: float) -> float:
    # Newton from t = b with a bisection safeguard on [t_hat, b]. g is
    # strictly convex and increasing there, so Newton from the right is
    # monotone; the bracket only matters in degenerate rounding cases.
    K = nu_s * q
    hi = b
    t = b
    g = K * b ** (q - 1.0)
    for _ in range(200):
        if abs(g) <= 1e-12 * (1.0 + b):
            break
        if g > 0.0:
            hi = t
        else:
            lo = t
        dg = 1.0 + K * (q - 1.0) * t ** (q - 2.0)
        if dg > 0.0:
            t_new = t - g / dg
            if not lo < t_new < hi:
                t_new = 0.5 * (lo + hi)
        else:
            t_new = 0.5 * (lo + hi)
        t = t_new
        g = t + K * t ** (q - 1.0) - b
    return t


def _largest_root_value(nu_s: float, q: float, b: float) -> float:
    """Largest root of ``t + nu_s*q*t**(q-1) = b`` on [t_hat, b].

    The caller guarantees ``b >= t_tilde`` up to the boundary guard; at the
    boundary the double root t_hat is returned directly.
    """
    tt = _t_tilde_value(nu_s, q)
    if b <= tt:
        return _t_hat_value(nu_s, q)
    if q == 0.5:
        return _root_half(nu_s, b)
    if q == TWO_THIRDS:
        return _root_two_thirds(nu_s, b)
    return _root_generic(nu_s, q, b, _t_hat_value(nu_s, q))


def _require_fractional(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ValueError(f"defined only for 0 < q < 1, got q={q}")


def threshold_c(pen: ScalarPenalty) -> float:
    """Breakpoint magnitude below which the scalar prox collapses to {0}."""
    _require_fractional(pen.q)
    return _threshold_c_value(pen.nu, pen.q)


def magnitude_at_threshold(pen: ScalarPenalty) -> float:
    """Magnitude of the nonzero minimizer exactly at the breakpoint."""
    _require_fractional(pen.q)
    return _magnitude_value(pen.nu, pen.q)


def t_hat(pen: ScalarPenalty, s: int) -> float:
    """Abscissa of the minimum of ``g(t) = t + nu*s*q*t**(q-1) - b``."""
    _require_fractional(pen.q)
    if s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    return _t_hat_value(pen.nu * s, pen.q)


def t_tilde(pen: ScalarPenalty, s: int) -> float:
    """Smallest b for which ``t + nu*s*q*t**(q-1) = b`` has a root."""
    _require_fractional(pen.q)
    if s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    return _t_tilde_value(pen.nu * s, pen.q)


def largest_stationary_root(pen: ScalarPenalty, s: int, b: float) -> float:
    """Largest root of ``t + nu*s*q*t**(q-1) = b``; rejects b < t_tilde(s)."""
    tt = t_tilde(pen, s)
    if b < tt * (1.0 - BOUNDARY_GUARD):
        raise ValueError(
            f"no stationary root: b={b} is below t_tilde({s})={tt}"
        )
    return _largest_root_value(pen.nu * s, pen.q, b)


def prox_scalar(pen: ScalarPenalty, tau: float) -> ScalarProxResult:
    """All global minimizers of ``nu*|t|**q + (t - tau)**2 / 2``.

    Total in tau; odd symmetry prox(-tau) = -prox(tau) holds exactly. Two
    values are returned only when the zero and nonzero branches tie within
    ``TIE_REL``.
    """
    nu, q = pen.nu, pen.q
    at = abs(tau)
    sgn = 1.0 if tau >= 0.0 else -1.0

    if q == 1.0:
        r = max(at - nu, 0.0)
        val = sgn * r
        return ScalarProxResult((val,), scalar_objective(nu, q, val, tau))

    if at == 0.0:
        return ScalarProxResult((0.0,), 0.0)

    if q == 0.0:
        j_zero = 0.5 * at * at
        j_keep = nu
        tie = TIE_REL * (1.0 + min(j_zero, j_keep))
        if abs(j_zero - j_keep) <= tie:
            return ScalarProxResult((0.0, tau), min(j_zero, j_keep))
        if j_keep < j_zero:
            return ScalarProxResult((tau,), j_keep)
        return ScalarProxResult((0.0,), j_zero)

    c = _threshold_c_value(nu, q)
    j_zero = 0.5 * at * at
    if at < c * (1.0 - 1e-9):
        return ScalarProxResult((0.0,), j_zero)
    r = _largest_root_value(nu, q, at)
    j_root = nu * r**q + 0.5 * (r - at) * (r - at)
    tie = TIE_REL * (1.0 + j_zero)
    if abs(j_zero - j_root) <= tie:
        return ScalarProxResult((0.0, sgn * r), min(j_zero, j_root))
    if j_root < j_zero:
        return ScalarProxResult((sgn * r,), j_root)
    return ScalarProxResult((0.0,), j_zero)


def _select_scalar_value(nu: float, q: float, at: float) -> float:
    """Solver-facing single value of the prox at ``at >= 0``.

    Matches ``prox_scalar`` but resolves ties toward the nonzero branch,
    which is what the iterative solver wants at breakpoints.
    """
    if q == 1.0:
        return max(at - nu, 0.0)
    if at == 0.0:
        return 0.0
    if q == 0.0:
        j_zero = 0.5 * at * at
        tie = TIE_REL * (1.0 + min(j_zero, nu))
        return at if nu <= j_zero + tie else 0.0
    c = _threshold_c_value(nu, q)
    if at < c * (1.0 - 1e-9):
        return 0.0
    r = _largest_root_value(nu, q, at)
    j_zero = 0.5 * at * at
    j_root = nu * r**q + 0.5 * (r - at) * (r - at)
    tie = TIE_REL * (1.0 + j_zero)
    return r if j_root <= j_zero + tie else 0.0
