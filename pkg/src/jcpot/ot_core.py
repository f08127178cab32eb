"""Dense entropic optimal-transport kernels.

Conventions
-----------
- Couplings are dense (n1, n2) arrays: source rows, target columns.
- Costs are squared Euclidean distances.
- Before exponentiation the cost matrix is divided by its maximum entry
  (the scale is kept on the kernel), so ``epsilon`` is always expressed
  relative to a unit-scaled cost and the kernel entries live in [0, 1].
- All routines stay in matrix form: the diagonal scalings of the Sinkhorn
  iteration are applied to the coupling itself, whose entries are bounded
  by the marginal masses, so there are no dual potentials to overflow.

Entries of a very sharp kernel (tiny epsilon) can still round to exact
zero in float64; that is tolerated as long as every row and column keeps
at least one representable entry, and rejected otherwise (no silent
clamping).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .exceptions import (
    ConfigError,
    DataError,
    DegenerateKernelError,
    KernelUnderflowError,
    NumericalError,
)
from .validation import as_points, check_positive, check_simplex

# Smallest row/column maximum a Gibbs kernel may have before we refuse to
# proceed; anything below is indistinguishable from an all-zero line.
UNDERFLOW_FLOOR = 1e-300

DEFAULT_EPSILON = 0.01
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point cloud: support (n, d) and a probability mass vector (n,)."""

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        support = as_points(self.support, "support")
        mass = check_simplex(self.mass, "mass", atol=1e-12)
        if mass.shape[0] != support.shape[0]:
            raise DataError(
                f"mass length {mass.shape[0]} does not match {support.shape[0]} support points"
            )
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    @property
    def n(self):
        return self.support.shape[0]


def uniform_measure(X):
    """Discrete measure with uniform mass 1/n on the rows of X."""
    X = as_points(X)
    return DiscreteMeasure(X, np.full(X.shape[0], 1.0 / X.shape[0]))


@dataclass(frozen=True)
class GibbsKernel:
    """exp(-C'/epsilon) for the rescaled cost C' = C / cost_scale."""

    values: np.ndarray
    epsilon: float
    cost_scale: float


@dataclass(frozen=True)
class SinkhornResult:
    """Coupling plus convergence diagnostics; non-convergence is a flag, not an error."""

    plan: np.ndarray
    iterations: int
    converged: bool
    row_residual: float
    col_residual: float
    kernel: GibbsKernel = field(repr=False, default=None)


def squared_euclidean_cost(X1, X2):
    """Pairwise squared Euclidean distances, shape (n1, n2)."""
    X1 = as_points(X1, "X1")
    X2 = as_points(X2, "X2")
    if X1.shape[1] != X2.shape[1]:
        raise DataError(
            f"dimension mismatch: X1 has d={X1.shape[1]}, X2 has d={X2.shape[1]}"
        )
    sq1 = np.einsum("ij,ij->i", X1, X1)
    sq2 = np.einsum("ij,ij->i", X2, X2)
    C = sq1[:, None] + sq2[None, :] - 2.0 * (X1 @ X2.T)
    return np.maximum(C, 0.0)


def gibbs_kernel(C, epsilon):
    """Build the Gibbs kernel exp(-C'/epsilon) from a cost matrix.

    The cost is first divided by its maximum entry (scale stored on the
    result), so epsilon is dimensionless.  If every entry of some row or
    column underflows to (near) zero the kernel is useless and a
    :class:`KernelUnderflowError` names the offending line.
    """
    epsilon = check_positive(epsilon, "epsilon")
    C = np.asarray(C, dtype=float)
    if C.ndim != 2:
        raise DataError(f"cost matrix must be 2-D, got shape {C.shape}")
    if np.any(C < 0) or not np.all(np.isfinite(C)):
        raise DataError("cost matrix entries must be finite and nonnegative")
    scale = float(C.max())
    if scale <= 0.0:
        scale = 1.0  # all-zero cost: kernel of ones
    values = np.exp(-C / (scale * epsilon))
    row_max = values.max(axis=1)
    col_max = values.max(axis=0)
    if np.any(row_max < UNDERFLOW_FLOOR):
        i = int(np.argmin(row_max))
        raise KernelUnderflowError(
            f"kernel row {i} underflowed (max entry {row_max[i]:.3e}); "
            f"increase epsilon (got {epsilon!r})"
        )
    if np.any(col_max < UNDERFLOW_FLOOR):
        j = int(np.argmin(col_max))
        raise KernelUnderflowError(
            f"kernel column {j} underflowed (max entry {col_max[j]:.3e}); "
            f"increase epsilon (got {epsilon!r})"
        )
    return GibbsKernel(values=values, epsilon=epsilon, cost_scale=scale)


def row_projection(M, row_mass):
    """Rescale rows of M so that row i sums to row_mass[i].

    This is the KL-closest point to M among matrices with the prescribed
    row sums: diag(row_mass / (M 1)) M.
    """
    M = np.asarray(M, dtype=float)
    row_mass = np.asarray(row_mass, dtype=float).ravel()
    if row_mass.shape[0] != M.shape[0]:
        raise DataError(
            f"row_mass length {row_mass.shape[0]} does not match {M.shape[0]} rows"
        )
    sums = M.sum(axis=1)
    if np.any(sums <= 0.0):
        i = int(np.argmin(sums))
        raise DegenerateKernelError(f"row {i} of the kernel sums to {sums[i]!r}")
    return M * (row_mass / sums)[:, None]


def col_projection(M, col_mass):
    """Rescale columns of M so that column j sums to col_mass[j]."""
    M = np.asarray(M, dtype=float)
    col_mass = np.asarray(col_mass, dtype=float).ravel()
    if col_mass.shape[0] != M.shape[1]:
        raise DataError(
            f"col_mass length {col_mass.shape[0]} does not match {M.shape[1]} columns"
        )
    sums = M.sum(axis=0)
    if np.any(sums <= 0.0):
        j = int(np.argmin(sums))
        raise DegenerateKernelError(f"column {j} of the kernel sums to {sums[j]!r}")
    return M * (col_mass / sums)[None, :]


def _mass_of(mu, name):
    if isinstance(mu, DiscreteMeasure):
        return mu.mass
    return check_simplex(mu, name, atol=1e-9)


def sinkhorn(mu1, mu2, C, epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Entropic OT coupling between two measures by alternating projections.

    Minimizes <gamma, C> - epsilon * h(gamma) subject to the two marginal
    constraints, i.e. projects the Gibbs kernel onto the marginals in
    alternation, each projection being a closed-form diagonal rescaling.

    Parameters
    ----------
    mu1, mu2 : DiscreteMeasure or array-like mass vectors on the simplex
    C : (n1, n2) cost matrix
    epsilon : regularization, relative to the max-rescaled cost
    tol : L1 marginal-residual threshold declaring convergence
    max_iter : iteration cap; hitting it flags the result, it does not raise

    Returns
    -------
    SinkhornResult with the coupling, iteration count, convergence flag
    and both final L1 marginal residuals.
    """
    a = _mass_of(mu1, "mu1")
    b = _mass_of(mu2, "mu2")
    C = np.asarray(C, dtype=float)
    if C.shape != (a.shape[0], b.shape[0]):
        raise DataError(
            f"cost has shape {C.shape}, expected {(a.shape[0], b.shape[0])}"
        )
    tol = check_positive(tol, "tol")
    max_iter = int(max_iter)
    if max_iter < 1:
        raise ConfigError(f"max_iter must be >= 1, got {max_iter}")

    kernel = gibbs_kernel(C, epsilon)
    gamma = kernel.values
    converged = False
    row_res = col_res = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        gamma = row_projection(gamma, a)
        gamma = col_projection(gamma, b)
        row_res = float(np.abs(gamma.sum(axis=1) - a).sum())
        col_res = float(np.abs(gamma.sum(axis=0) - b).sum())
        if row_res <= tol and col_res <= tol:
            converged = True
            break
    return SinkhornResult(
        plan=gamma,
        iterations=it,
        converged=converged,
        row_residual=row_res,
        col_residual=col_res,
        kernel=kernel,
    )


def transport_cost(gamma, C):
    """Frobenius inner product <gamma, C>."""
    gamma = np.asarray(gamma, dtype=float)
    C = np.asarray(C, dtype=float)
    if gamma.shape != C.shape:
        raise DataError(f"shape mismatch: coupling {gamma.shape} vs cost {C.shape}")
    return float((gamma * C).sum())


def entropy(gamma):
    """h(gamma) = -sum gamma_ij (log gamma_ij - 1), with 0 log 0 = 0."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise DataError("coupling entries must be nonnegative")
    g = gamma[gamma > 0]
    return float((g - g * np.log(g)).sum())


def kl_divergence(gamma, zeta):
    """KL(gamma | zeta) = sum gamma_ij (log(gamma_ij / zeta_ij) - 1), 0 log 0 = 0.

    Returns +inf if gamma puts mass where zeta has (underflowed to) zero.
    """
    gamma = np.asarray(gamma, dtype=float)
    Z = zeta.values if isinstance(zeta, GibbsKernel) else np.asarray(zeta, dtype=float)
    if gamma.shape != Z.shape:
        raise DataError(f"shape mismatch: coupling {gamma.shape} vs kernel {Z.shape}")
    if np.any(gamma < 0):
        raise DataError("coupling entries must be nonnegative")
    mask = gamma > 0
    g = gamma[mask]
    z = Z[mask]
    if np.any(z <= 0):
        return float("inf")
    return float((g * (np.log(g / z) - 1.0)).sum())


def exact_ot_oracle(mu1, mu2, C):
    """Exact (unregularized) OT cost on small instances, by linear programming.

    Test oracle only; refuses instances with more than 400 coupling
    variables.  Uses the HiGHS simplex/IPM solvers on the flattened
    transport polytope.
    """
    a = _mass_of(mu1, "mu1")
    b = _mass_of(mu2, "mu2")
    C = np.asarray(C, dtype=float)
    n1, n2 = a.shape[0], b.shape[0]
    if C.shape != (n1, n2):
        raise DataError(f"cost has shape {C.shape}, expected {(n1, n2)}")
    if n1 * n2 > 400:
        raise ConfigError(f"exact oracle limited to 400 variables, got {n1 * n2}")
    A_eq = np.zeros((n1 + n2, n1 * n2))
    for i in range(n1):
        A_eq[i, i * n2 : (i + 1) * n2] = 1.0
    for j in range(n2):
        A_eq[n1 + j, j::n2] = 1.0
    b_eq = np.concatenate([a, b])
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise NumericalError(f"exact OT linear program failed: {res.message}")
    return float(res.fun)
