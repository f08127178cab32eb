"""Benchmark orchestration: run one method over repetitions, aggregate, report.

Repetition seeds are a pure function of the master seed:
``seed + 1000 * rep``.  With generated data each repetition draws a fresh
scenario from its derived seed; with datasets loaded from CSV the data is
fixed and only seed-dependent stages (the target-only split) vary.

Solver errors do not escape as exceptions: the returned report carries a
structured ``error`` record (type, message, exit code) so the CLI can both
persist the report and exit with the right status.  Non-convergence is a
flag unless ``strict`` is set, in which case it becomes an error record
with exit code 5.
"""

import time
from dataclasses import dataclass, asdict

import numpy as np

from . import io as dataset_io
from .adaptation import classify_pt
from .datagen import (
    DEFAULT_MEAN0,
    DEFAULT_MEAN1,
    DEFAULT_PROP_RANGE,
    DEFAULT_SIGMA,
    DEFAULT_TARGET_PROP,
    gen_multisource_scenario,
)
from .estimators import JcpotAdapter, OtdaAdapter
from .exceptions import ConfigError, DataError, JcpotError, NonConvergenceError
from .metrics import accuracy, l1_proportion_error, mass_leakage
from .ot_core import DEFAULT_EPSILON, DEFAULT_MAX_ITER, DEFAULT_TOL
from .report import Report, RunRecord, SCHEMA_VERSION
from .validation import check_positive

METHODS = ("jcpot-lp", "jcpot-pt", "otda-lp", "otda-pt", "no-adapt", "target-only")


@dataclass
class RunConfig:
    """Everything one benchmark run needs; every field has a CLI flag."""

    method: str = "jcpot-lp"
    epsilon: float = DEFAULT_EPSILON
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    weights: str = "uniform"      # "uniform" or comma-separated convex weights
    seed: int = 0
    repetitions: int = 1
    strict: bool = False
    # generator parameters (used when no source paths are given)
    k: int = 10
    n_source: int = 500
    n_target: int = 400
    target_prop: tuple = DEFAULT_TARGET_PROP
    prop_range: tuple = DEFAULT_PROP_RANGE
    mean0: tuple = DEFAULT_MEAN0
    mean1: tuple = DEFAULT_MEAN1
    sigma: float = DEFAULT_SIGMA
    # dataset paths (override the generator when set)
    sources: tuple = ()           # labeled source CSVs
    target: str = ""              # unlabeled target CSV
    target_true: str = ""         # labeled target CSV, evaluation only

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(
                f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}"
            )
        check_positive(self.epsilon, "epsilon")
        check_positive(self.tol, "tol")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if int(self.repetitions) < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        parse_weights_spec(self.weights)
        if bool(self.sources) != bool(self.target):
            raise ConfigError("give both --sources and --target, or neither")
        return self


def parse_weights_spec(spec):
    """'uniform' -> None (solver default); else a list of floats summing to 1."""
    if spec is None or spec == "uniform":
        return None
    if isinstance(spec, str):
        try:
            values = [float(p) for p in spec.split(",")]
        except ValueError:
            raise ConfigError(f"bad weights spec {spec!r}") from None
    else:
        values = [float(p) for p in spec]
    if abs(sum(values) - 1.0) > 1e-9 or any(v < 0 for v in values):
        raise ConfigError(f"weights must be nonnegative and sum to 1, got {values}")
    return values


def derived_seed(master_seed, rep):
    """Per-repetition seed; pure function of its arguments."""
    return int(master_seed) + 1000 * int(rep)


def _load_fixed_data(config):
    sources = [dataset_io.load_labeled_csv(p) for p in config.sources]
    for path, (_, y) in zip(config.sources, sources):
        if np.any(y < 0):
            raise DataError(f"{path}: source rows must be labeled (label >= 0)")
    Xt, yt = dataset_io.load_labeled_csv(config.target)
    true_labels = None
    if config.target_true:
        Xt_true, true_labels = dataset_io.load_labeled_csv(config.target_true)
        if Xt_true.shape != Xt.shape or np.any(true_labels < 0):
            raise DataError(
                f"{config.target_true}: must relabel exactly the target points"
            )
    elif np.all(yt >= 0):
        true_labels = yt  # a labeled target doubles as its own evaluation record
    return sources, Xt, true_labels


def _scenario_data(config, rep_seed):
    scenario = gen_multisource_scenario(
        k=config.k, n_source=config.n_source, n_target=config.n_target,
        target_prop=config.target_prop, prop_range=config.prop_range,
        mean0=config.mean0, mean1=config.mean1, sigma=config.sigma,
        seed=rep_seed,
    )
    return list(scenario.sources), scenario.target_points, scenario.true_labels


def _true_proportions(true_labels, num_classes):
    counts = np.bincount(true_labels, minlength=num_classes)
    return counts / counts.sum()


def _stratified_split(labels, train_fraction, rng):
    """Per-class shuffle-and-cut; returns (train_idx, eval_idx)."""
    train, evaluate = [], []
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        idx = idx[rng.permutation(idx.shape[0])]
        cut = max(1, int(round(train_fraction * idx.shape[0])))
        cut = min(cut, idx.shape[0] - 1) if idx.shape[0] > 1 else 1
        train.append(idx[:cut])
        evaluate.append(idx[cut:])
    return np.concatenate(train), np.concatenate(evaluate)


def _run_once(config, sources, Xt, true_labels, rep_seed, weights):
    """Execute one method on one dataset; returns a partial RunRecord dict."""
    rec = {}
    method = config.method
    num_classes = 1 + max(int(y.max()) for _, y in sources)

    if method.startswith("jcpot"):
        adapter = JcpotAdapter(epsilon=config.epsilon, tol=config.tol,
                               max_iter=config.max_iter, weights=weights)
        adapter.fit([X for X, _ in sources], [y for _, y in sources], Xt)
        pred = adapter.predict_full("lp" if method.endswith("lp") else "pt")
        rec["h_hat"] = [float(v) for v in adapter.proportions_]
        rec["iterations"] = adapter.iterations_
        rec["converged"] = adapter.converged_
        rec["trace"] = [float(v) for v in adapter.trace_]
        if true_labels is not None:
            w = adapter.problem_.weights
            rec["leakage"] = float(sum(
                wk * mass_leakage(g, y, true_labels)
                for wk, g, (_, y) in zip(w, adapter.couplings_, sources)
            ))
            rec["l1_error"] = l1_proportion_error(
                adapter.proportions_, _true_proportions(true_labels, num_classes)
            )
    elif method.startswith("otda"):
        adapter = OtdaAdapter(epsilon=config.epsilon, tol=config.tol,
                              max_iter=config.max_iter)
        adapter.fit([X for X, _ in sources], [y for _, y in sources], Xt)
        pred = adapter.predict_full("lp" if method.endswith("lp") else "pt")
        rec["iterations"] = adapter.iterations_
        rec["converged"] = adapter.converged_
        if true_labels is not None:
            rec["leakage"] = mass_leakage(
                adapter.coupling_, adapter.source_labels_, true_labels
            )
    elif method == "no-adapt":
        merged_X = np.vstack([X for X, _ in sources])
        merged_y = np.concatenate([y for _, y in sources])
        pred = classify_pt(merged_X, merged_y, Xt, num_classes=num_classes)
    elif method == "target-only":
        if true_labels is None:
            raise DataError("target-only needs target labels (generator or --target-true)")
        rng = np.random.default_rng(rep_seed)
        train_idx, eval_idx = _stratified_split(true_labels, 0.8, rng)
        pred = classify_pt(Xt[train_idx], true_labels[train_idx], Xt[eval_idx],
                           num_classes=num_classes)
        rec["accuracy"] = accuracy(pred.labels, true_labels[eval_idx])
        return rec, pred
    else:  # pragma: no cover - validate() already rejected it
        raise ConfigError(f"unknown method {method!r}")

    if true_labels is not None and "accuracy" not in rec:
        rec["accuracy"] = accuracy(pred.labels, true_labels)
    return rec, pred


def run_benchmark(config, keep_predictions=False):
    """Run ``config.method`` over the configured repetitions and aggregate.

    Returns a :class:`Report`.  Library errors are captured in the
    report's ``error`` record rather than raised, so callers always get
    the runs that completed.
    """
    config.validate()
    weights = parse_weights_spec(config.weights)
    report = Report(config=_echo_config(config), schema_version=SCHEMA_VERSION)
    predictions = []
    t_generate = t_solve = 0.0
    t_start = time.perf_counter()

    try:
        fixed = None
        if config.sources:
            t0 = time.perf_counter()
            fixed = _load_fixed_data(config)
            t_generate += time.perf_counter() - t0
        for rep in range(int(config.repetitions)):
            rep_seed = derived_seed(config.seed, rep)
            if fixed is not None:
                sources, Xt, true_labels = fixed
            else:
                t0 = time.perf_counter()
                sources, Xt, true_labels = _scenario_data(config, rep_seed)
                t_generate += time.perf_counter() - t0
            t0 = time.perf_counter()
            rec, pred = _run_once(config, sources, Xt, true_labels, rep_seed, weights)
            t_solve += time.perf_counter() - t0
            report.runs.append(RunRecord(rep=rep, seed=rep_seed, **rec))
            predictions.append(pred)
    except JcpotError as exc:
        report.error = {
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": exc.exit_code,
        }

    if report.error is None and config.strict:
        bad = [r.rep for r in report.runs if r.converged is False]
        if bad:
            exc = NonConvergenceError(
                f"repetition(s) {', '.join(map(str, bad))} did not converge "
                f"within max_iter={config.max_iter}"
            )
            report.error = {
                "type": type(exc).__name__,
                "message": str(exc),
                "exit_code": exc.exit_code,
            }

    accs = [r.accuracy for r in report.runs if r.accuracy is not None]
    l1s = [r.l1_error for r in report.runs if r.l1_error is not None]
    if accs:
        report.aggregates["accuracy_mean"] = float(np.mean(accs))
        report.aggregates["accuracy_std"] = float(np.std(accs))
    if l1s:
        report.aggregates["l1_error_mean"] = float(np.mean(l1s))
        report.aggregates["l1_error_std"] = float(np.std(l1s))
    report.aggregates["runs_completed"] = len(report.runs)
    report.timing = {
        "generate_or_load": t_generate,
        "solve_and_decode": t_solve,
        "total": time.perf_counter() - t_start,
    }
    if keep_predictions:
        return report, predictions
    return report


def _echo_config(config):
    echo = asdict(config)
    for key in ("target_prop", "prop_range", "mean0", "mean1"):
        echo[key] = [float(v) for v in echo[key]]
    echo["sources"] = ";".join(echo["sources"])  # comma-free: stays one string
    parsed = parse_weights_spec(config.weights)
    echo["weights"] = "uniform" if parsed is None else parsed
    return echo
