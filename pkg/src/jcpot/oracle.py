"""Grid-search verification of proportion estimation (binary classes).

Independent of the joint solver: for each candidate class-0 proportion pi
on a grid over [0, 1], solve K plain entropic-OT problems whose source
masses are the equal-share distribution of [pi, 1-pi] (target uniform) and
record the weighted entropic objective

    sum_k w_k KL(gamma_k | zeta_k),

which equals the entropic transport objective on the rescaled cost divided
by epsilon.  The argmin should sit at the true target proportion; the
joint solver's estimate is validated against this curve.

Endpoints (and any pi yielding an empty class) are skipped and recorded,
since the equal-share distribution is undefined there.
"""

from dataclasses import dataclass

import numpy as np

from .class_ops import build_class_operators, mass_from_proportions
from .exceptions import ConfigError, DataError
from .ot_core import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    kl_divergence,
    sinkhorn,
    squared_euclidean_cost,
)
from .validation import as_labels, as_points, check_weights


@dataclass(frozen=True)
class OracleResult:
    argmin: np.ndarray        # [pi*, 1 - pi*]
    grid: np.ndarray          # evaluated pi values
    objectives: np.ndarray    # objective per evaluated pi
    converged: np.ndarray     # per-pi convergence flags (all K problems)
    skipped: np.ndarray       # pi values skipped as degenerate (recorded gaps)
    epsilon: float
    step: float


def simplex_grid_oracle(sources, target_points, epsilon=DEFAULT_EPSILON,
                        step=0.01, weights=None, tol=DEFAULT_TOL,
                        max_iter=DEFAULT_MAX_ITER):
    """Evaluate the summed entropic objective over a proportion grid (C = 2).

    Parameters
    ----------
    sources : K pairs (points, labels) with labels in {0, 1}
    target_points : (n, d)
    step : grid resolution in (0, 0.5]

    Returns an :class:`OracleResult`; ``argmin`` is the grid point with the
    smallest objective.
    """
    step = float(step)
    if not (0.0 < step <= 0.5):
        raise ConfigError(f"step must be in (0, 0.5], got {step}")
    if len(sources) < 1:
        raise DataError("need at least one source domain")
    Xt = as_points(target_points, "target_points")
    weights = check_weights(weights, len(sources))

    ops, kernels, costs = [], [], []
    for k, (X, y) in enumerate(sources):
        X = as_points(X, f"source {k} points")
        y = as_labels(y, n=X.shape[0], name=f"source {k} labels")
        if y.max() > 1 or y.min() < 0:
            raise ConfigError("grid oracle supports binary labels only")
        ops.append(build_class_operators(y, 2))
        costs.append(squared_euclidean_cost(X, Xt))

    n = Xt.shape[0]
    nu = np.full(n, 1.0 / n)
    grid_all = np.arange(0.0, 1.0 + step / 2, step)
    grid, objectives, conv_flags, skipped = [], [], [], []
    for pi in grid_all:
        h = np.array([pi, 1.0 - pi])
        if h.min() <= 0.0:
            skipped.append(pi)
            continue
        obj = 0.0
        ok = True
        for w, op, C in zip(weights, ops, costs):
            a = mass_from_proportions(op, h)
            res = sinkhorn(a, nu, C, epsilon=epsilon, tol=tol, max_iter=max_iter)
            ok = ok and res.converged
            obj += w * kl_divergence(res.plan, res.kernel)
        grid.append(pi)
        objectives.append(obj)
        conv_flags.append(ok)

    objectives = np.asarray(objectives)
    grid = np.asarray(grid)
    best = float(grid[int(np.argmin(objectives))])
    return OracleResult(
        argmin=np.array([best, 1.0 - best]),
        grid=grid,
        objectives=objectives,
        converged=np.asarray(conv_flags, dtype=bool),
        skipped=np.asarray(skipped),
        epsilon=float(epsilon),
        step=step,
    )
