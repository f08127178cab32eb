"""Decoding couplings into target predictions.

Two decoders are provided for any set of source-to-target couplings:

- label propagation (LP): class-aggregated coupling mass per target point,
  L = sum_k w_k d1_k gamma_k, normalized column-wise into class scores;
- barycentric mapping + 1-nearest-neighbor (PT): each source point moves
  to the coupling-weighted average of the target points, and the targets
  are classified by the nearest mapped source.

``otda_baseline`` is the no-proportion-correction reference: one entropic
coupling between the merged sources (uniform mass) and the target, decoded
the same two ways.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .class_ops import build_class_operators
from .exceptions import DataError
from .ot_core import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    sinkhorn,
    squared_euclidean_cost,
)
from .validation import as_labels, as_points, check_weights


@dataclass(frozen=True)
class LabelScores:
    """Raw class-mass scores (C, n) plus per-column normalizers.

    ``column_norms[j]`` is the raw mass behind target j; columns with zero
    mass are flagged in ``zero_columns`` and left at zero probability
    rather than invented.
    """

    values: np.ndarray        # (C, n) raw nonnegative scores
    column_norms: np.ndarray  # (n,)
    zero_columns: np.ndarray  # indices of all-zero columns

    @property
    def probabilities(self):
        """Column-normalized scores; flagged columns stay all-zero."""
        norms = np.where(self.column_norms > 0, self.column_norms, 1.0)
        return self.values / norms[None, :]


@dataclass(frozen=True)
class Prediction:
    labels: np.ndarray  # (n,)
    scores: LabelScores
    method: str         # "lp" | "pt"


def _scores_from_raw(raw):
    norms = raw.sum(axis=0)
    return LabelScores(
        values=raw,
        column_norms=norms,
        zero_columns=np.flatnonzero(norms == 0),
    )


def _argmax_labels(scores):
    # np.argmax takes the first maximum, so ties go to the lowest class index
    return np.argmax(scores.values, axis=0)


def label_propagation(couplings, ops, weights=None):
    """Class scores L = sum_k w_k d1_k gamma_k over the target columns.

    On converged couplings every raw column sums to about 1/n; columns with
    no mass at all are flagged, not errored.
    """
    if len(couplings) != len(ops) or len(couplings) < 1:
        raise DataError("need one ClassOperators per coupling")
    weights = check_weights(weights, len(couplings))
    raw = 0.0
    for w, gamma, op in zip(weights, couplings, ops):
        gamma = np.asarray(gamma, dtype=float)
        if gamma.shape[0] != op.n:
            raise DataError(
                f"coupling has {gamma.shape[0]} rows, operators expect {op.n}"
            )
        raw = raw + w * (op.d1 @ gamma)
    return _scores_from_raw(raw)


def predict_from_scores(scores, method):
    return Prediction(labels=_argmax_labels(scores), scores=scores, method=method)


def barycentric_map(gamma, target_points):
    """Move each source point to its coupling-weighted target barycenter.

    Returns ``(mapped, kept)`` where ``kept`` indexes the source rows that
    carried mass; zero-mass rows have no defined image and are dropped with
    a counted warning (callers subset their labels with ``kept``).
    """
    gamma = np.asarray(gamma, dtype=float)
    Xt = as_points(target_points, "target_points")
    if gamma.shape[1] != Xt.shape[0]:
        raise DataError(
            f"coupling has {gamma.shape[1]} columns, target has {Xt.shape[0]} points"
        )
    row_mass = gamma.sum(axis=1)
    kept = np.flatnonzero(row_mass > 0)
    dropped = gamma.shape[0] - kept.shape[0]
    if dropped:
        warnings.warn(
            f"barycentric_map dropped {dropped} zero-mass source row(s)",
            stacklevel=2,
        )
    mapped = (gamma[kept] @ Xt) / row_mass[kept, None]
    return mapped, kept


def classify_pt(points, labels, target_points, num_classes=None):
    """1-nearest-neighbor classification of the targets from a labeled cloud.

    Distances are squared Euclidean; ties take the first (lowest-index)
    neighbor, so the result is deterministic given the data.  Scores are
    one-hot.
    """
    points = as_points(points, "points")
    labels = as_labels(labels, n=points.shape[0], name="labels")
    Xt = as_points(target_points, "target_points")
    if num_classes is None:
        num_classes = int(labels.max()) + 1
    counts = np.bincount(labels, minlength=num_classes)
    if np.any(counts == 0):
        raise DataError(
            f"class {int(np.argmin(counts))} has no representative in the mapped cloud"
        )
    D = squared_euclidean_cost(points, Xt)
    nearest = np.argmin(D, axis=0)
    pred = labels[nearest]
    raw = np.zeros((num_classes, Xt.shape[0]))
    raw[pred, np.arange(Xt.shape[0])] = 1.0
    return predict_from_scores(_scores_from_raw(raw), "pt")


@dataclass(frozen=True)
class OtdaResult:
    sinkhorn_result: object  # SinkhornResult for the merged coupling
    lp: Prediction
    pt: Prediction


def otda_baseline(
    source_points,
    source_labels,
    target_points,
    epsilon=DEFAULT_EPSILON,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    num_classes=None,
):
    """Single-coupling baseline without class-proportion correction.

    One entropic coupling with uniform marginals between the merged source
    cloud and the target, decoded by both LP and PT.
    """
    Xs = as_points(source_points, "source_points")
    ys = as_labels(source_labels, n=Xs.shape[0], name="source_labels")
    Xt = as_points(target_points, "target_points")
    if num_classes is None:
        num_classes = int(ys.max()) + 1
    ops = build_class_operators(ys, num_classes)
    a = np.full(Xs.shape[0], 1.0 / Xs.shape[0])
    b = np.full(Xt.shape[0], 1.0 / Xt.shape[0])
    C = squared_euclidean_cost(Xs, Xt)
    result = sinkhorn(a, b, C, epsilon=epsilon, tol=tol, max_iter=max_iter)
    lp_scores = label_propagation([result.plan], [ops], [1.0])
    lp = predict_from_scores(lp_scores, "lp")
    mapped, kept = barycentric_map(result.plan, Xt)
    pt = classify_pt(mapped, ys[kept], Xt, num_classes=num_classes)
    return OtdaResult(sinkhorn_result=result, lp=lp, pt=pt)
