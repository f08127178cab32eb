"""Linear operators between per-instance masses and per-class proportions.

For n labeled instances over C classes:

- ``d1`` (C, n) aggregates instance mass into class proportions: h = d1 m.
- ``d2`` (n, C) distributes class proportions equally over the instances
  of each class: m = d2 h.

d1 d2 is the C x C identity exactly, so the two directions invert each
other on proportion vectors.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, MissingClassError
from .validation import as_labels, as_mass


@dataclass(frozen=True)
class ClassOperators:
    d1: np.ndarray            # (C, n) binary aggregation
    d2: np.ndarray            # (n, C) equal-share distribution
    class_counts: np.ndarray  # (C,)
    labels: np.ndarray        # (n,)

    @property
    def num_classes(self):
        return self.d1.shape[0]

    @property
    def n(self):
        return self.d1.shape[1]


def build_class_operators(labels, num_classes):
    """Build the aggregation/distribution operator pair for a label vector.

    Every class in 0..num_classes-1 must occur at least once: the
    equal-share division is undefined for an empty class, so that is a
    hard error rather than a silent drop.
    """
    labels = as_labels(labels)
    num_classes = int(num_classes)
    if num_classes < 1:
        raise DataError(f"num_classes must be >= 1, got {num_classes}")
    n = labels.shape[0]
    if n < 1:
        raise DataError("labels must be non-empty")
    if labels.min() < 0 or labels.max() >= num_classes:
        bad = labels.min() if labels.min() < 0 else labels.max()
        raise DataError(f"label {bad} outside 0..{num_classes - 1}")
    counts = np.bincount(labels, minlength=num_classes)
    if np.any(counts == 0):
        raise MissingClassError(int(np.argmin(counts)))
    d1 = np.zeros((num_classes, n))
    d1[labels, np.arange(n)] = 1.0
    d2 = (d1 / counts[:, None]).T
    return ClassOperators(d1=d1, d2=d2, class_counts=counts, labels=labels)


def proportions_from_mass(ops, m):
    """Class proportions h = d1 m of an instance-mass vector."""
    m = as_mass(m, n=ops.n, name="m")
    return ops.d1 @ m


def mass_from_proportions(ops, h):
    """Instance masses m = d2 h; within a class every instance gets equal mass."""
    h = as_mass(h, n=ops.num_classes, name="h")
    return ops.d2 @ h
