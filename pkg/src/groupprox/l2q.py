"""Proximal operator of ``nu * ||u||_2**q`` on a block.

Every minimizer is a nonnegative multiple of the anchor, so the whole
operator reduces to the scalar prox of the anchor's Euclidean norm: the
radial profile ``nu * t**q + (t - r)**2 / 2`` is exactly the scalar
objective at ``tau = r``.
"""

from __future__ import annotations

import numpy as np

from .l1q import ProxSet
from .scalar import ScalarPenalty, prox_scalar

__all__ = ["prox_l2q"]


def prox_l2q(y, pen: ScalarPenalty) -> ProxSet:
    """All global minimizers of ``nu*||u||_2**q + ||u - y||_2**2 / 2``."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {y.shape}")
    r = float(np.linalg.norm(y))
    if r == 0.0:
        return ProxSet((np.zeros_like(y),), 0.0)
    scalar = prox_scalar(pen, r)
    minimizers = tuple((v / r) * y for v in scalar.values)
    return ProxSet(minimizers, scalar.objective)
