"""Dataset and prediction CSV I/O.

Dataset format: UTF-8, LF line endings, header ``f0,...,f{d-1},label``,
``.`` decimal separator; label -1 marks an unlabeled row.  Floats are
written with ``repr`` so a write/read round trip is bit-exact.

Predictions format: header ``index,pred_label,score_c0,...,score_c{C-1}``.
"""

import csv
import os

import numpy as np

from .exceptions import ParseError
from .validation import as_labels, as_points


def _parse_float(cell, path, lineno, col):
    try:
        return float(cell)
    except ValueError:
        raise ParseError(
            f"{path}, line {lineno}: column {col} is not a number: {cell!r}"
        ) from None


def _parse_int(cell, path, lineno, col):
    try:
        return int(cell)
    except ValueError:
        raise ParseError(
            f"{path}, line {lineno}: column {col} is not an integer: {cell!r}"
        ) from None


def load_labeled_csv(path):
    """Read (points, labels) from a dataset CSV; label -1 means unlabeled.

    Parse problems (missing/renamed header, ragged row, non-numeric cell)
    raise :class:`ParseError` naming the file and line; row order is
    preserved.
    """
    if not os.path.exists(path):
        raise ParseError(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}, line 1: empty file, expected a header row") from None
        d = len(header) - 1
        expected = [f"f{i}" for i in range(d)] + ["label"]
        if d < 1 or header != expected:
            raise ParseError(
                f"{path}, line 1: bad header {header!r}, expected f0,...,f{{d-1}},label"
            )
        rows, labels = [], []
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue  # tolerate a trailing blank line
            if len(cells) != d + 1:
                raise ParseError(
                    f"{path}, line {lineno}: expected {d + 1} cells, got {len(cells)}"
                )
            rows.append([_parse_float(c, path, lineno, header[i])
                         for i, c in enumerate(cells[:d])])
            labels.append(_parse_int(cells[d], path, lineno, "label"))
        if not rows:
            raise ParseError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float), np.asarray(labels, dtype=int)


def save_labeled_csv(path, X, y=None):
    """Write a dataset CSV; y=None writes label -1 (unlabeled) everywhere."""
    X = as_points(X, "X")
    n, d = X.shape
    if y is None:
        y = np.full(n, -1, dtype=int)
    else:
        y = as_labels(y, n=n, name="y")
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join([f"f{i}" for i in range(d)] + ["label"]) + "\n")
        for i in range(n):
            fh.write(",".join(repr(float(v)) for v in X[i]) + f",{int(y[i])}\n")
    return path


def save_predictions_csv(path, prediction):
    """Write ``index,pred_label,score_c0,...`` rows for a Prediction."""
    probs = prediction.scores.probabilities  # (C, n)
    C, n = probs.shape
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(["index", "pred_label"] + [f"score_c{c}" for c in range(C)]) + "\n")
        for j in range(n):
            scores = ",".join(repr(float(probs[c, j])) for c in range(C))
            fh.write(f"{j},{int(prediction.labels[j])},{scores}\n")
    return path


def load_predictions_csv(path):
    """Read back a predictions CSV as (indices, labels, scores (n, C))."""
    if not os.path.exists(path):
        raise ParseError(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}, line 1: empty file") from None
        if header[:2] != ["index", "pred_label"]:
            raise ParseError(f"{path}, line 1: bad header {header!r}")
        C = len(header) - 2
        idx, labels, scores = [], [], []
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != C + 2:
                raise ParseError(
                    f"{path}, line {lineno}: expected {C + 2} cells, got {len(cells)}"
                )
            idx.append(_parse_int(cells[0], path, lineno, "index"))
            labels.append(_parse_int(cells[1], path, lineno, "pred_label"))
            scores.append([_parse_float(c, path, lineno, header[2 + i])
                           for i, c in enumerate(cells[2:])])
    return (np.asarray(idx, dtype=int), np.asarray(labels, dtype=int),
            np.asarray(scores, dtype=float))


def scenario_to_csvs(scenario, outdir):
    """Write a scenario as ``source_<k>.csv``, ``target.csv`` (unlabeled) and
    ``target_true.csv`` (labels, for evaluation only).  Returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = {"sources": []}
    for i, (X, y) in enumerate(scenario.sources):
        paths["sources"].append(
            save_labeled_csv(os.path.join(outdir, f"source_{i}.csv"), X, y)
        )
    paths["target"] = save_labeled_csv(
        os.path.join(outdir, "target.csv"), scenario.target_points, None
    )
    paths["target_true"] = save_labeled_csv(
        os.path.join(outdir, "target_true.csv"),
        scenario.target_points, scenario.true_labels,
    )
    return paths
