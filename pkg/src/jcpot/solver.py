"""Joint class-proportion and optimal-transport estimation (JCPOT).

Given K labeled source clouds and one unlabeled target cloud, the solver
alternates Bregman projections on the K Gibbs kernels:

  (a) project every coupling onto the uniform target marginal
      (column projection to 1/n),
  (b) pool the per-domain class masses into a proportion estimate by a
      weighted geometric mean, computed in log space,
  (c) project every coupling onto the pooled class masses
      (row projection to d2 h).

The proportion vector h is deliberately NOT renormalized inside the loop:
the geometric mean may sum to less than one and the next column projection
restores total mass; renormalizing mid-loop would move the fixed point.
Only the returned ``proportions`` are normalized, once, at the end.

Convergence is declared on ||h_t - h_{t-1}||_2 <= tol.  The returned
couplings end on step (c), so their class-aggregated masses equal the raw
proportion estimate exactly; ``col_residuals`` reports the L1 target
residuals as measured right after the final target projection (a), before
(c) redistributes a little column mass.  Couplings are (n_k, n): source
rows, target columns.
"""

from dataclasses import dataclass, field

import numpy as np

from .class_ops import build_class_operators, mass_from_proportions
from .exceptions import (
    ConfigError,
    DataError,
    DegenerateMassError,
    MissingClassError,
)
from .ot_core import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    col_projection,
    gibbs_kernel,
    row_projection,
    squared_euclidean_cost,
)
from .validation import as_labels, as_points, check_positive, check_weights


@dataclass(frozen=True)
class JcpotProblem:
    """Inputs of one solve: K (points, labels) sources and the target points."""

    sources: tuple            # K pairs (X_k (n_k, d), y_k (n_k,))
    target: np.ndarray        # (n, d)
    epsilon: float = DEFAULT_EPSILON
    weights: np.ndarray = None  # convex domain weights; None -> uniform
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    num_classes: int = None   # None -> 1 + max label over all sources

    def __post_init__(self):
        if len(self.sources) < 1:
            raise DataError("need at least one source domain")
        target = as_points(self.target, "target")
        sources = []
        for k, (X, y) in enumerate(self.sources):
            X = as_points(X, f"source {k} points")
            y = as_labels(y, n=X.shape[0], name=f"source {k} labels")
            if X.shape[1] != target.shape[1]:
                raise DataError(
                    f"source {k} has d={X.shape[1]}, target has d={target.shape[1]}"
                )
            sources.append((X, y))
        check_positive(self.epsilon, "epsilon")
        check_positive(self.tol, "tol")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        weights = check_weights(self.weights, len(sources))
        if self.num_classes is None:
            C = 1 + max(int(y.max()) for _, y in sources)
        else:
            C = int(self.num_classes)
        object.__setattr__(self, "sources", tuple(sources))
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "max_iter", int(self.max_iter))
        object.__setattr__(self, "num_classes", C)

    @property
    def k(self):
        return len(self.sources)


@dataclass(frozen=True)
class JcpotSolution:
    proportions: np.ndarray       # normalized target-proportion estimate (simplex)
    raw_proportions: np.ndarray   # pre-normalization geometric mean
    couplings: tuple              # K arrays (n_k, n)
    iterations: int
    converged: bool
    trace: np.ndarray             # per-sweep ||h_t - h_{t-1}||_2
    # per-domain L1 target residuals at the last target projection, diagnostics
    col_residuals: np.ndarray = field(repr=False, default=None)


def proportion_update(kernels, ops, weights):
    """Pooled class proportions: weighted geometric mean of per-domain class masses.

    h_c = prod_k (d1_k (K_k 1))_c ^ w_k, evaluated as exp(sum w log .) so
    tiny masses do not underflow multiplicatively.
    """
    weights = check_weights(weights, len(kernels))
    log_h = 0.0
    for k, (K, op) in enumerate(zip(kernels, ops)):
        masses = op.d1 @ np.asarray(K, dtype=float).sum(axis=1)
        if np.any(masses <= 0):
            c = int(np.argmin(masses))
            raise DegenerateMassError(
                f"class {c} of domain {k} carries no kernel mass"
            )
        log_h = log_h + weights[k] * np.log(masses)
    return np.exp(log_h)


def class_row_projection(K, ops, h):
    """Project a kernel onto prescribed class masses h.

    Each row i is rescaled so that its sum equals (d2 h)_i; the rows of a
    class share the class mass equally, so the class-aggregated mass
    d1 (gamma 1) equals h exactly.
    """
    h = np.asarray(h, dtype=float).ravel()
    row_mass = mass_from_proportions(ops, h)
    return row_projection(K, row_mass)


def jcpot_fit(problem):
    """Run the alternating-projection solver on a :class:`JcpotProblem`.

    Returns a :class:`JcpotSolution`; hitting max_iter flags the result
    instead of raising.  Missing classes and kernel underflow raise the
    corresponding structured errors before the loop starts.
    """
    C = problem.num_classes
    ops = []
    for k, (_, y) in enumerate(problem.sources):
        try:
            ops.append(build_class_operators(y, C))
        except MissingClassError as exc:
            raise MissingClassError(exc.class_id, where=f"source {k}") from None
    n = problem.target.shape[0]
    nu = np.full(n, 1.0 / n)
    kernels = [
        gibbs_kernel(squared_euclidean_cost(X, problem.target), problem.epsilon).values
        for X, _ in problem.sources
    ]
    couplings = [K.copy() for K in kernels]
    weights = problem.weights

    h_prev = np.full(C, 1.0 / C)
    trace = []
    converged = False
    it = 0
    col_residuals = np.full(problem.k, np.inf)
    for it in range(1, problem.max_iter + 1):
        for k in range(problem.k):
            couplings[k] = col_projection(couplings[k], nu)
        col_residuals = np.array(
            [float(np.abs(g.sum(axis=0) - nu).sum()) for g in couplings]
        )
        h = proportion_update(couplings, ops, weights)
        err = float(np.linalg.norm(h - h_prev))
        trace.append(err)
        for k in range(problem.k):
            couplings[k] = class_row_projection(couplings[k], ops[k], h)
        h_prev = h
        if err <= problem.tol:
            converged = True
            break

    h_raw = h_prev
    total = h_raw.sum()
    if total <= 0:
        raise DegenerateMassError("estimated proportions sum to zero")
    return JcpotSolution(
        proportions=h_raw / total,
        raw_proportions=h_raw,
        couplings=tuple(couplings),
        iterations=it,
        converged=converged,
        trace=np.asarray(trace),
        col_residuals=col_residuals,
    )
