"""Command-line interface.

Subcommands: ``gen`` (scenario -> CSVs), ``fit`` (estimate proportions),
``adapt`` (method -> predictions CSV), ``bench`` (repetitions -> report),
``oracle`` (proportion grid check).

Every flag has a config-file equivalent (``--config file.json``, keys are
the flag names with underscores).  Precedence: built-in defaults, then the
config file, then explicitly passed flags.

Exit codes: 0 success, 2 invalid config, 3 data error, 4 numerical
failure, 5 non-convergence under ``--strict``.
"""

import argparse
import json
import sys

import numpy as np

from .adaptation import classify_pt
from .benchmark import (
    METHODS,
    RunConfig,
    _load_fixed_data,
    parse_weights_spec,
    run_benchmark,
)
from .datagen import gen_multisource_scenario
from .estimators import JcpotAdapter, OtdaAdapter
from .exceptions import ConfigError, JcpotError, NonConvergenceError
from .io import save_predictions_csv, scenario_to_csvs
from .oracle import simplex_grid_oracle
from .report import _format_value, export_tables, serialize_report

_CONFIG = RunConfig()  # built-in defaults, shared with the library API

GEN_DEFAULTS = {
    "k": _CONFIG.k, "n_source": _CONFIG.n_source, "n_target": _CONFIG.n_target,
    "target_prop": _CONFIG.target_prop, "prop_range": _CONFIG.prop_range,
    "mean0": _CONFIG.mean0, "mean1": _CONFIG.mean1, "sigma": _CONFIG.sigma,
    "seed": _CONFIG.seed, "outdir": None,
}
SOLVER_DEFAULTS = {
    "epsilon": _CONFIG.epsilon, "tol": _CONFIG.tol, "max_iter": _CONFIG.max_iter,
    "weights": _CONFIG.weights, "strict": False,
}
DATA_DEFAULTS = {"sources": None, "target": None, "target_true": None}
FIT_DEFAULTS = {**SOLVER_DEFAULTS, **DATA_DEFAULTS, "out": None}
ADAPT_DEFAULTS = {**FIT_DEFAULTS, "method": "jcpot-lp", "predictions": "predictions.csv"}
BENCH_DEFAULTS = {
    "method": _CONFIG.method, "seed": _CONFIG.seed,
    "repetitions": _CONFIG.repetitions, "report": None, "tables_dir": None,
    **{k: GEN_DEFAULTS[k] for k in
       ("k", "n_source", "n_target", "target_prop", "prop_range",
        "mean0", "mean1", "sigma")},
    **SOLVER_DEFAULTS, **DATA_DEFAULTS,
}
ORACLE_DEFAULTS = {**SOLVER_DEFAULTS, **DATA_DEFAULTS, "step": 0.01, "out": None}


def _floats_arg(text):
    try:
        return tuple(float(p) for p in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _add(parser, *names, **kwargs):
    kwargs.setdefault("default", None)  # None = "not passed", so config can fill it
    parser.add_argument(*names, **kwargs)


def _add_solver_flags(p):
    _add(p, "--epsilon", type=float, help="entropic regularization (rescaled cost)")
    _add(p, "--tol", type=float, help="convergence threshold")
    _add(p, "--max-iter", type=int, help="iteration cap")
    _add(p, "--weights", help="'uniform' or comma-separated convex weights")
    _add(p, "--strict", action="store_const", const=True,
         help="treat non-convergence as an error (exit 5)")


def _add_data_flags(p):
    _add(p, "--sources", nargs="+", help="labeled source CSVs")
    _add(p, "--target", help="target CSV (labels ignored/unlabeled)")
    _add(p, "--target-true", help="labeled target CSV, evaluation only")


def _add_generator_flags(p):
    _add(p, "--k", type=int, help="number of source domains")
    _add(p, "--n-source", type=int, help="instances per source")
    _add(p, "--n-target", type=int, help="target instances")
    _add(p, "--target-prop", type=_floats_arg, help="target class proportions, e.g. 0.2,0.8")
    _add(p, "--prop-range", type=_floats_arg, help="source class-0 proportion range, e.g. 0.1,0.9")
    _add(p, "--mean0", type=_floats_arg, help="class-0 mean, e.g. 0,0")
    _add(p, "--mean1", type=_floats_arg, help="class-1 mean, e.g. 3,3")
    _add(p, "--sigma", type=float, help="isotropic standard deviation")
    _add(p, "--seed", type=int, help="master seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jcpot",
        description="Multi-source OT domain adaptation under target shift",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic scenario as CSV files")
    _add(p, "--config", help="JSON config file")
    _add_generator_flags(p)
    _add(p, "--outdir", help="output directory (required)")

    p = sub.add_parser("fit", help="estimate target class proportions")
    _add(p, "--config", help="JSON config file")
    _add_data_flags(p)
    _add_solver_flags(p)
    _add(p, "--out", help="write a key/value result file")

    p = sub.add_parser("adapt", help="run a method and write predictions")
    _add(p, "--config", help="JSON config file")
    _add_data_flags(p)
    _add_solver_flags(p)
    _add(p, "--method", help="jcpot-lp | jcpot-pt | otda-lp | otda-pt | no-adapt")
    _add(p, "--predictions", help="predictions CSV path (default predictions.csv)")

    p = sub.add_parser("bench", help="run repetitions and write a report")
    _add(p, "--config", help="JSON config file")
    _add(p, "--method", help=" | ".join(METHODS))
    _add(p, "--repetitions", type=int)
    _add_generator_flags(p)
    _add_data_flags(p)
    _add_solver_flags(p)
    _add(p, "--report", help="report path (default: stdout)")
    _add(p, "--tables-dir", help="also export report tables as CSVs here")

    p = sub.add_parser("oracle", help="grid-search check of proportion estimation")
    _add(p, "--config", help="JSON config file")
    _add_data_flags(p)
    _add_solver_flags(p)
    _add(p, "--step", type=float, help="grid resolution (default 0.01)")
    _add(p, "--out", help="write the grid as CSV")

    return parser


def _resolve(defaults, args):
    """defaults < config file < explicitly passed flags."""
    values = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON in {config_path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            if key not in defaults:
                raise ConfigError(f"{config_path}: unknown config key {key!r}")
            values[key] = value
    for key in defaults:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    for key in ("target_prop", "prop_range", "mean0", "mean1"):
        if key in values and values[key] is not None:
            values[key] = _floats_arg(values[key]) \
                if isinstance(values[key], str) else tuple(values[key])
    return values


def _require(values, *keys):
    for key in keys:
        if not values[key]:
            raise ConfigError(f"--{key.replace('_', '-')} is required")


def _load_for_solver(values):
    cfg = RunConfig(sources=tuple(values["sources"]), target=values["target"],
                    target_true=values["target_true"] or "")
    return _load_fixed_data(cfg)


def _print_kv(pairs, out_path=None):
    text = "".join(f"{k} = {_format_value(v)}\n" for k, v in pairs)
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def cmd_gen(args):
    values = _resolve(GEN_DEFAULTS, args)
    _require(values, "outdir")
    scenario = gen_multisource_scenario(
        k=values["k"], n_source=values["n_source"], n_target=values["n_target"],
        target_prop=values["target_prop"], prop_range=values["prop_range"],
        mean0=values["mean0"], mean1=values["mean1"], sigma=values["sigma"],
        seed=values["seed"],
    )
    paths = scenario_to_csvs(scenario, values["outdir"])
    for p in paths["sources"] + [paths["target"], paths["target_true"]]:
        print(p)
    return 0


def cmd_fit(args):
    values = _resolve(FIT_DEFAULTS, args)
    _require(values, "sources", "target")
    sources, Xt, _ = _load_for_solver(values)
    adapter = JcpotAdapter(
        epsilon=values["epsilon"], tol=values["tol"], max_iter=values["max_iter"],
        weights=parse_weights_spec(values["weights"]),
    ).fit([X for X, _ in sources], [y for _, y in sources], Xt)
    _print_kv(
        [
            ("h_hat", [float(v) for v in adapter.proportions_]),
            ("iterations", adapter.iterations_),
            ("converged", adapter.converged_),
            ("epsilon", float(values["epsilon"])),
            ("tol", float(values["tol"])),
            ("max_iter", int(values["max_iter"])),
        ],
        values["out"],
    )
    if values["strict"] and not adapter.converged_:
        raise NonConvergenceError(
            f"no convergence within max_iter={values['max_iter']}"
        )
    return 0


def cmd_adapt(args):
    values = _resolve(ADAPT_DEFAULTS, args)
    _require(values, "sources", "target")
    method = values["method"]
    if method not in ("jcpot-lp", "jcpot-pt", "otda-lp", "otda-pt", "no-adapt"):
        raise ConfigError(
            f"unknown adapt method {method!r} (target-only is bench-only)"
        )
    sources, Xt, _ = _load_for_solver(values)
    weights = parse_weights_spec(values["weights"])
    converged = True
    if method.startswith("jcpot"):
        adapter = JcpotAdapter(epsilon=values["epsilon"], tol=values["tol"],
                               max_iter=values["max_iter"], weights=weights)
        adapter.fit([X for X, _ in sources], [y for _, y in sources], Xt)
        pred = adapter.predict_full("lp" if method.endswith("lp") else "pt")
        converged = adapter.converged_
    elif method.startswith("otda"):
        adapter = OtdaAdapter(epsilon=values["epsilon"], tol=values["tol"],
                              max_iter=values["max_iter"])
        adapter.fit([X for X, _ in sources], [y for _, y in sources], Xt)
        pred = adapter.predict_full("lp" if method.endswith("lp") else "pt")
        converged = adapter.converged_
    else:
        merged_X = np.vstack([X for X, _ in sources])
        merged_y = np.concatenate([y for _, y in sources])
        pred = classify_pt(merged_X, merged_y, Xt)
    save_predictions_csv(values["predictions"], pred)
    print(values["predictions"])
    if values["strict"] and not converged:
        raise NonConvergenceError(f"no convergence within max_iter={values['max_iter']}")
    return 0


def cmd_bench(args):
    values = _resolve(BENCH_DEFAULTS, args)
    config = RunConfig(
        method=values["method"], epsilon=values["epsilon"], tol=values["tol"],
        max_iter=values["max_iter"], weights=values["weights"],
        seed=values["seed"], repetitions=values["repetitions"],
        strict=bool(values["strict"]),
        k=values["k"], n_source=values["n_source"], n_target=values["n_target"],
        target_prop=values["target_prop"], prop_range=values["prop_range"],
        mean0=values["mean0"], mean1=values["mean1"], sigma=values["sigma"],
        sources=tuple(values["sources"] or ()), target=values["target"] or "",
        target_true=values["target_true"] or "",
    )
    report = run_benchmark(config)
    text = serialize_report(report)
    if values["report"]:
        with open(values["report"], "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        print(values["report"])
    else:
        sys.stdout.write(text)
    if values["tables_dir"]:
        export_tables(report, values["tables_dir"])
    if report.error is not None:
        print(f"error: {report.error['message']}", file=sys.stderr)
        return int(report.error["exit_code"])
    return 0


def cmd_oracle(args):
    values = _resolve(ORACLE_DEFAULTS, args)
    _require(values, "sources", "target")
    sources, Xt, _ = _load_for_solver(values)
    result = simplex_grid_oracle(
        sources, Xt, epsilon=values["epsilon"], step=values["step"],
        weights=parse_weights_spec(values["weights"]),
        tol=values["tol"], max_iter=values["max_iter"],
    )
    _print_kv([
        ("argmin", [float(v) for v in result.argmin]),
        ("grid_points", int(result.grid.shape[0])),
        ("skipped", [float(v) for v in result.skipped]),
        ("all_converged", bool(result.converged.all())),
    ])
    if values["out"]:
        with open(values["out"], "w", newline="\n", encoding="utf-8") as fh:
            fh.write("pi,objective,converged\n")
            for pi, obj, ok in zip(result.grid, result.objectives, result.converged):
                fh.write(f"{repr(float(pi))},{repr(float(obj))},{'true' if ok else 'false'}\n")
    if values["strict"] and not result.converged.all():
        raise NonConvergenceError("some grid points did not converge")
    return 0


_COMMANDS = {
    "gen": cmd_gen, "fit": cmd_fit, "adapt": cmd_adapt,
    "bench": cmd_bench, "oracle": cmd_oracle,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except JcpotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
