"""Benchmark reports: a diff-able key/value + tables text format.

The serialized document has ``key = value`` lines grouped into sections:
``[config]``, one ``[run <i>]`` per repetition, ``[aggregates]``, an
optional ``[error]``, and a final ``[timing]`` section.  Timing is the
only volatile part; :func:`report_body` strips it so two runs with the
same config can be compared byte-for-byte.

Values round-trip losslessly: floats are written with ``repr`` (shortest
exact form), ints bare, booleans ``true``/``false``, ``none`` for absent,
and lists as comma-joined scalars.  Strings must not look like any of
those or start with ``[`` — method names, paths and specs in practice.
"""

from dataclasses import dataclass, field

from .exceptions import ParseError

SCHEMA_VERSION = 1


@dataclass
class RunRecord:
    rep: int
    seed: int
    accuracy: float = None
    l1_error: float = None
    h_hat: list = None          # estimated proportions, when the method has them
    iterations: int = None
    converged: bool = None
    leakage: float = None       # mismatched-class coupling mass fraction
    trace: list = None          # per-sweep convergence errors


@dataclass
class Report:
    config: dict
    runs: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    error: dict = None          # structured error record: type/message/exit_code
    timing: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


def _looks_typed(s):
    if s in ("none", "true", "false", ""):
        return True
    try:
        float(s)
        return True
    except ValueError:
        return False


def _format_value(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_format_value(x) for x in v)
    s = str(v)
    # quote strings that would otherwise parse as another type or split
    if _looks_typed(s) or "," in s or s.startswith('"') or s.startswith("["):
        return '"' + s.replace('"', '""') + '"'
    return s


def _parse_scalar(s):
    if s.startswith('"') and s.endswith('"') and len(s) >= 2:
        return s[1:-1].replace('""', '"')
    if s == "none":
        return None
    if s == "true":
        return True
    if s == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    return s


def _parse_value(s):
    if s.startswith('"'):
        return _parse_scalar(s)
    if "," in s:
        return [_parse_scalar(p) for p in s.split(",")]
    return _parse_scalar(s)


def _emit_section(lines, name, mapping):
    lines.append(f"[{name}]")
    for key, value in mapping.items():
        lines.append(f"{key} = {_format_value(value)}")
    lines.append("")


_RUN_FIELDS = ("rep", "seed", "accuracy", "l1_error", "h_hat",
               "iterations", "converged", "leakage", "trace")


def serialize_report(report, include_timing=True):
    """Render a Report to its text form (LF line endings)."""
    lines = [
        "# benchmark report",
        f"schema_version = {report.schema_version}",
        "",
    ]
    _emit_section(lines, "config", dict(sorted(report.config.items())))
    for run in report.runs:
        _emit_section(lines, f"run {run.rep}",
                      {k: getattr(run, k) for k in _RUN_FIELDS})
    _emit_section(lines, "aggregates", dict(sorted(report.aggregates.items())))
    if report.error is not None:
        _emit_section(lines, "error", dict(sorted(report.error.items())))
    if include_timing:
        lines.append("# timing: wall-clock seconds, excluded from determinism checks")
        _emit_section(lines, "timing", dict(sorted(report.timing.items())))
    return "\n".join(lines)


def report_body(text):
    """The deterministic part of a serialized report (timing stripped)."""
    lines = []
    skipping = False
    for line in text.split("\n"):
        if line.startswith("[timing]") or line.startswith("# timing"):
            skipping = True
            continue
        if skipping:
            if line.startswith("["):
                skipping = False
            else:
                continue
        lines.append(line)
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def parse_report(text):
    """Inverse of :func:`serialize_report`."""
    sections = []
    current = None
    schema_version = None
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = (line[1:-1], {})
            sections.append(current)
            continue
        if " = " not in line:
            raise ParseError(f"report line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition(" = ")
        if current is None:
            if key == "schema_version":
                schema_version = int(value)
                continue
            raise ParseError(f"report line {lineno}: {key!r} outside any section")
        current[1][key] = _parse_value(value)

    if schema_version is None:
        raise ParseError("report has no schema_version")
    report = Report(config={}, schema_version=schema_version)
    list_config_keys = ("target_prop", "prop_range", "mean0", "mean1")
    for name, mapping in sections:
        if name == "config":
            for key in list_config_keys:
                # single-element lists serialize without a comma
                v = mapping.get(key)
                if v is not None and not isinstance(v, (list, str)):
                    mapping[key] = [v]
            report.config = mapping
        elif name.startswith("run "):
            kwargs = dict(mapping)
            for key in ("h_hat", "trace"):
                # single-element lists serialize without a comma
                if kwargs.get(key) is not None and not isinstance(kwargs[key], list):
                    kwargs[key] = [kwargs[key]]
            report.runs.append(RunRecord(**kwargs))
        elif name == "aggregates":
            report.aggregates = mapping
        elif name == "error":
            report.error = mapping
        elif name == "timing":
            report.timing = mapping
        else:
            raise ParseError(f"unknown report section {name!r}")
    return report


def export_tables(report, outdir):
    """Write the tabular parts of a report as CSV files; returns the paths."""
    import os

    os.makedirs(outdir, exist_ok=True)
    runs_path = os.path.join(outdir, "runs.csv")
    cols = ("rep", "seed", "accuracy", "l1_error", "iterations", "converged",
            "leakage", "h_hat")
    with open(runs_path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(cols[:-1]) + ",h_hat\n")
        for run in report.runs:
            cells = [_format_value(getattr(run, c)) for c in cols[:-1]]
            h = "" if run.h_hat is None else ";".join(repr(float(v)) for v in run.h_hat)
            fh.write(",".join(cells) + f",{h}\n")
    traces_path = os.path.join(outdir, "traces.csv")
    with open(traces_path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("rep,sweep,err\n")
        for run in report.runs:
            for i, err in enumerate(run.trace or []):
                fh.write(f"{run.rep},{i},{repr(float(err))}\n")
    return {"runs": runs_path, "traces": traces_path}
