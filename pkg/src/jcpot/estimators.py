"""Estimator-style front end over the solver and decoders.

Both adapters follow the scikit-learn parameter protocol (``get_params`` /
``set_params`` / ``clone``): constructors only store hyperparameters, all
work happens in ``fit``, and fitted state lives in trailing-underscore
attributes.  ``fit`` takes the multi-source signature ``(Xs, ys, Xt)``
rather than the single-matrix ``(X, y)`` one.
"""

import numpy as np
from sklearn.base import BaseEstimator

from .adaptation import (
    barycentric_map,
    classify_pt,
    label_propagation,
    otda_baseline,
    predict_from_scores,
)
from .class_ops import build_class_operators
from .exceptions import ConfigError
from .ot_core import DEFAULT_EPSILON, DEFAULT_MAX_ITER, DEFAULT_TOL
from .solver import JcpotProblem, jcpot_fit


class JcpotAdapter(BaseEstimator):
    """Joint proportion estimation + per-source couplings, with LP/PT decoding.

    Parameters
    ----------
    epsilon : entropic regularization (relative to max-rescaled costs)
    tol : convergence threshold on ||h_t - h_{t-1}||_2
    max_iter : sweep cap
    weights : per-source convex weights, None for uniform

    Attributes (after fit)
    ----------------------
    proportions_ : estimated target class proportions (simplex)
    raw_proportions_ : pre-normalization geometric mean
    couplings_ : tuple of K (n_k, n) couplings
    iterations_, converged_, trace_ : solver diagnostics
    """

    def __init__(self, epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL,
                 max_iter=DEFAULT_MAX_ITER, weights=None):
        self.epsilon = epsilon
        self.tol = tol
        self.max_iter = max_iter
        self.weights = weights

    def fit(self, Xs, ys, Xt):
        problem = JcpotProblem(
            sources=tuple(zip(Xs, ys)),
            target=Xt,
            epsilon=self.epsilon,
            weights=self.weights,
            tol=self.tol,
            max_iter=self.max_iter,
        )
        solution = jcpot_fit(problem)
        self.problem_ = problem
        self.num_classes_ = problem.num_classes
        self.ops_ = [build_class_operators(y, problem.num_classes)
                     for _, y in problem.sources]
        self.proportions_ = solution.proportions
        self.raw_proportions_ = solution.raw_proportions
        self.couplings_ = solution.couplings
        self.iterations_ = solution.iterations
        self.converged_ = solution.converged
        self.trace_ = solution.trace
        return self

    def _check_fitted(self):
        if not hasattr(self, "couplings_"):
            raise ConfigError("adapter is not fitted; call fit first")

    def score_matrix(self):
        """Label-propagation scores for the fitted target, shape (C, n)."""
        self._check_fitted()
        return label_propagation(self.couplings_, self.ops_, self.problem_.weights)

    def transform(self):
        """Barycentric image of every source cloud in target space.

        Returns a list of (mapped_points, mapped_labels) pairs, one per
        source; rows that carried no mass are dropped (with a warning).
        """
        self._check_fitted()
        out = []
        for gamma, (_, y) in zip(self.couplings_, self.problem_.sources):
            mapped, kept = barycentric_map(gamma, self.problem_.target)
            out.append((mapped, y[kept]))
        return out

    def predict(self, method="lp"):
        """Predicted labels for the fitted target points."""
        return self.predict_full(method).labels

    def predict_full(self, method="lp"):
        """Full Prediction (labels + scores) for the fitted target points."""
        self._check_fitted()
        if method == "lp":
            return predict_from_scores(self.score_matrix(), "lp")
        if method == "pt":
            pairs = self.transform()
            points = np.vstack([p for p, _ in pairs])
            labels = np.concatenate([l for _, l in pairs])
            return classify_pt(points, labels, self.problem_.target,
                               num_classes=self.num_classes_)
        raise ConfigError(f"unknown decoding method {method!r}; use 'lp' or 'pt'")

    def predict_proba(self, method="lp"):
        """Class-probability estimates, sklearn orientation (n, C)."""
        return self.predict_full(method).scores.probabilities.T


class OtdaAdapter(BaseEstimator):
    """Single-coupling baseline: merged sources, uniform marginals, LP/PT decoding."""

    def __init__(self, epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL,
                 max_iter=DEFAULT_MAX_ITER):
        self.epsilon = epsilon
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, Xs, ys, Xt):
        Xs = [np.asarray(X, dtype=float) for X in Xs]
        ys = [np.asarray(y) for y in ys]
        merged_X = np.vstack(Xs)
        merged_y = np.concatenate(ys)
        result = otda_baseline(
            merged_X, merged_y, Xt,
            epsilon=self.epsilon, tol=self.tol, max_iter=self.max_iter,
        )
        self.result_ = result
        self.coupling_ = result.sinkhorn_result.plan
        self.iterations_ = result.sinkhorn_result.iterations
        self.converged_ = result.sinkhorn_result.converged
        self.num_classes_ = int(merged_y.max()) + 1
        self.source_labels_ = merged_y
        return self

    def predict(self, method="lp"):
        return self.predict_full(method).labels

    def predict_full(self, method="lp"):
        if not hasattr(self, "result_"):
            raise ConfigError("adapter is not fitted; call fit first")
        if method == "lp":
            return self.result_.lp
        if method == "pt":
            return self.result_.pt
        raise ConfigError(f"unknown decoding method {method!r}; use 'lp' or 'pt'")

    def predict_proba(self, method="lp"):
        return self.predict_full(method).scores.probabilities.T
