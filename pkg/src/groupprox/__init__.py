"""Exact proximal operators of l1q/l2q group penalties (0 <= q <= 1),
an accelerated proximal-gradient solver built on them, and group-sparse
recovery benchmarks.

Hot blockwise kernels run through a compiled extension when available and
fall back to a NumPy implementation otherwise; see ``groupprox.backend_name``.
"""

from ._backend import BACKEND_NAME as backend_name
from ._backend import IS_COMPILED as backend_is_compiled
from .bench import (
    DEFAULT_VARIANTS,
    ConvergenceResult,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    gen_instance,
    is_success,
    run_convergence,
    run_sweep,
)
from .l1q import (
    ProxSet,
    SortedAbsView,
    SupportCandidate,
    candidate_for_support,
    objective_J,
    prox_l1q,
    sort_signed,
    support_table,
    zero_region_scan,
)
from .l2q import prox_l2q
from .oracle import OracleResult, grid_min
from .scalar import (
    ScalarPenalty,
    ScalarProxResult,
    largest_stationary_root,
    magnitude_at_threshold,
    prox_scalar,
    scalar_objective,
    t_hat,
    t_tilde,
    threshold_c,
)
from .solver import (
    DimensionError,
    GroupPartition,
    ProblemInstance,
    SolverConfig,
    SolverTrace,
    apg_solve,
    blockwise_prox,
    default_step,
    fixed_point_residual,
    momentum_next,
    objective_value,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "backend_is_compiled",
    "ScalarPenalty",
    "ScalarProxResult",
    "threshold_c",
    "magnitude_at_threshold",
    "t_hat",
    "t_tilde",
    "largest_stationary_root",
    "prox_scalar",
    "scalar_objective",
    "SortedAbsView",
    "SupportCandidate",
    "ProxSet",
    "sort_signed",
    "candidate_for_support",
    "objective_J",
    "prox_l1q",
    "support_table",
    "zero_region_scan",
    "prox_l2q",
    "OracleResult",
    "grid_min",
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
    "DEFAULT_VARIANTS",
    "ExperimentConfig",
    "SweepRow",
    "SweepResult",
    "ConvergenceResult",
    "gen_instance",
    "is_success",
    "run_sweep",
    "run_convergence",
    "__version__",
]
