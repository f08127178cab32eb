"""Small input-validation helpers used across the numerical modules."""

import numpy as np

from .exceptions import ConfigError, DataError


def as_points(X, name="X"):
    """Coerce to a finite 2-D float array of shape (n, d), n >= 1."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"{name} must be a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataError(f"{name} contains non-finite values")
    return X


def as_mass(w, n=None, name="mass"):
    """Coerce to a 1-D nonnegative float vector, optionally of length n."""
    w = np.asarray(w, dtype=float).ravel()
    if n is not None and w.shape[0] != n:
        raise DataError(f"{name} has length {w.shape[0]}, expected {n}")
    if not np.all(np.isfinite(w)):
        raise DataError(f"{name} contains non-finite values")
    if np.any(w < 0):
        raise DataError(f"{name} has negative entries")
    return w


def check_simplex(w, name="mass", atol=1e-9):
    """Require w to lie on the probability simplex within atol."""
    w = as_mass(w, name=name)
    if abs(w.sum() - 1.0) > atol:
        raise DataError(f"{name} must sum to 1 (got {w.sum()!r})")
    return w


def as_labels(y, n=None, name="labels"):
    """Coerce to a 1-D integer label vector; values are not range-checked here."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise DataError(f"{name} must be 1-D, got shape {y.shape}")
    if n is not None and y.shape[0] != n:
        raise DataError(f"{name} has length {y.shape[0]}, expected {n}")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        yf = np.asarray(y, dtype=float)
        if not np.all(yf == np.round(yf)):
            raise DataError(f"{name} must be integers")
        y = yf.astype(int)
    return y.astype(int)


def check_positive(value, name):
    """Require a positive finite scalar (for knobs like epsilon, tol, sigma)."""
    v = float(value)
    if not np.isfinite(v) or v <= 0:
        raise ConfigError(f"{name} must be positive, got {value!r}")
    return v


def check_weights(weights, k, name="weights"):
    """Normalize a convex-weight spec: None -> uniform 1/k; else validate."""
    if weights is None:
        return np.full(k, 1.0 / k)
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != k:
        raise ConfigError(f"{name} has length {w.shape[0]}, expected {k}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ConfigError(f"{name} must be nonnegative and finite")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ConfigError(f"{name} must sum to 1 (got {w.sum()!r})")
    return w
