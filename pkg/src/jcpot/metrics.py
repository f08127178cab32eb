"""Evaluation metrics."""

import numpy as np

from .exceptions import DataError
from .validation import as_labels, check_simplex


def l1_proportion_error(h_hat, h_true):
    """sum_c |h_hat_c - h_true_c| between two simplex vectors (range [0, 2])."""
    h_hat = check_simplex(h_hat, "h_hat", atol=1e-6)
    h_true = check_simplex(h_true, "h_true", atol=1e-6)
    if h_hat.shape != h_true.shape:
        raise DataError(f"length mismatch: {h_hat.shape[0]} vs {h_true.shape[0]}")
    return float(np.abs(h_hat - h_true).sum())


def accuracy(pred_labels, true_labels):
    """Fraction of exact label matches."""
    pred = as_labels(pred_labels, name="pred_labels")
    true = as_labels(true_labels, n=pred.shape[0], name="true_labels")
    return float(np.mean(pred == true))


def mass_leakage(gamma, source_labels, target_labels):
    """Fraction of coupling mass sitting on mismatched-class cells.

    Diagnostic for target shift: without proportion reweighting, couplings
    are forced to transport across classes.  Requires evaluation-only
    target labels.
    """
    gamma = np.asarray(gamma, dtype=float)
    ys = as_labels(source_labels, n=gamma.shape[0], name="source_labels")
    yt = as_labels(target_labels, n=gamma.shape[1], name="target_labels")
    total = gamma.sum()
    if total <= 0:
        raise DataError("coupling carries no mass")
    mismatched = ys[:, None] != yt[None, :]
    return float(gamma[mismatched].sum() / total)
