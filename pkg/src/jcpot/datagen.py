"""Seeded synthetic target-shift scenarios.

Two isotropic Gaussian blobs in d dimensions, one per class;  K source
domains with randomized class proportions and one target domain with
fixed proportions.  Everything is a pure function of (parameters, seed):

- proportions for the K sources come from ``default_rng(seed)``,
- the target is drawn with ``default_rng(seed + 1)``,
- source k is drawn with ``default_rng(seed + 2 + k)``,

so domains can be regenerated independently.  Target labels and true
proportions live in evaluation-only fields; no solver API accepts a
Scenario, only its point arrays.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, MissingClassError
from .validation import check_positive, check_simplex

DEFAULT_MEAN0 = (0.0, 0.0)
DEFAULT_MEAN1 = (3.0, 3.0)
DEFAULT_SIGMA = 1.0
DEFAULT_PROP_RANGE = (0.1, 0.9)
DEFAULT_TARGET_PROP = (0.2, 0.8)


def largest_remainder_counts(n, proportions):
    """Integer class counts summing to n, proportional to ``proportions``.

    Floors n * p and hands the leftover units to the largest remainders;
    remainder ties go to the lower class index, so the result is
    deterministic.
    """
    p = check_simplex(proportions, "proportions", atol=1e-9)
    n = int(n)
    raw = n * p
    counts = np.floor(raw).astype(int)
    leftover = n - counts.sum()
    if leftover:
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:leftover]] += 1
    return counts


def gen_gaussian_binary(n, proportions, mean0=DEFAULT_MEAN0, mean1=DEFAULT_MEAN1,
                        sigma=DEFAULT_SIGMA, seed=0):
    """One labeled dataset: class c ~ N(mean_c, sigma^2 I), counts by largest remainder.

    Returns (X, y) with class-0 rows first.  A class whose count rounds to
    zero is an error, not an empty slice.
    """
    mean0 = np.asarray(mean0, dtype=float).ravel()
    mean1 = np.asarray(mean1, dtype=float).ravel()
    if mean0.shape != mean1.shape:
        raise ConfigError("mean0 and mean1 must have the same dimension")
    if sigma != 0.0:
        check_positive(sigma, "sigma")
    counts = largest_remainder_counts(n, proportions)
    if counts.shape[0] != 2:
        raise ConfigError("gen_gaussian_binary needs exactly two proportions")
    if np.any(counts == 0):
        raise MissingClassError(int(np.argmin(counts)))
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = mean0.shape[0]
    parts = []
    for c, (mean, n_c) in enumerate(zip((mean0, mean1), counts)):
        parts.append(mean + sigma * rng.standard_normal((n_c, d)))
    X = np.vstack(parts)
    y = np.repeat(np.arange(2), counts)
    return X, y


@dataclass(frozen=True)
class Scenario:
    """K labeled sources plus one unlabeled target.

    ``true_labels`` / ``true_proportions`` exist for evaluation only;
    solvers receive ``target_points`` and never this record.
    """

    sources: tuple             # K pairs (X_k, y_k)
    target_points: np.ndarray  # (n, d)
    true_labels: np.ndarray    # (n,) evaluation-only
    true_proportions: np.ndarray  # empirical target class proportions (exact)
    source_proportions: np.ndarray  # (K,) drawn class-0 proportions
    seed: int
    params: dict               # generator parameters, echoed

    @property
    def k(self):
        return len(self.sources)


def gen_multisource_scenario(k, n_source=500, n_target=400,
                             target_prop=DEFAULT_TARGET_PROP,
                             prop_range=DEFAULT_PROP_RANGE,
                             mean0=DEFAULT_MEAN0, mean1=DEFAULT_MEAN1,
                             sigma=DEFAULT_SIGMA, seed=0):
    """K source domains with class-0 proportion ~ U[prop_range], fixed-target scenario."""
    k = int(k)
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    low, high = (float(prop_range[0]), float(prop_range[1]))
    if not (0.0 < low <= high < 1.0):
        raise ConfigError(f"prop_range must satisfy 0 < low <= high < 1, got {prop_range}")
    target_prop = check_simplex(target_prop, "target_prop", atol=1e-9)

    p0 = np.random.default_rng(seed).uniform(low, high, size=k)
    Xt, yt = gen_gaussian_binary(n_target, target_prop, mean0, mean1, sigma,
                                 seed=seed + 1)
    sources = tuple(
        gen_gaussian_binary(n_source, (p, 1.0 - p), mean0, mean1, sigma,
                            seed=seed + 2 + i)
        for i, p in enumerate(p0)
    )
    counts = np.bincount(yt, minlength=2)
    return Scenario(
        sources=sources,
        target_points=Xt,
        true_labels=yt,
        true_proportions=counts / counts.sum(),
        source_proportions=p0,
        seed=int(seed),
        params={
            "k": k, "n_source": int(n_source), "n_target": int(n_target),
            "target_prop": tuple(float(p) for p in target_prop),
            "prop_range": (low, high),
            "mean0": tuple(float(m) for m in np.asarray(mean0, dtype=float).ravel()),
            "mean1": tuple(float(m) for m in np.asarray(mean1, dtype=float).ravel()),
            "sigma": float(sigma),
        },
    )
