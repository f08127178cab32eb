"""Multi-source optimal-transport domain adaptation under target shift.

Jointly estimates unknown target class proportions and one entropic
transport coupling per source domain, then decodes target labels by label
propagation or barycentric mapping.  Includes a single-coupling baseline
without proportion correction, a seeded synthetic scenario generator, a
grid-search verification oracle, and a benchmark harness with CLI.
"""

from .adaptation import (
    LabelScores,
    OtdaResult,
    Prediction,
    barycentric_map,
    classify_pt,
    label_propagation,
    otda_baseline,
    predict_from_scores,
)
from .benchmark import (
    METHODS,
    RunConfig,
    derived_seed,
    parse_weights_spec,
    run_benchmark,
)
from .class_ops import (
    ClassOperators,
    build_class_operators,
    mass_from_proportions,
    proportions_from_mass,
)
from .datagen import (
    Scenario,
    gen_gaussian_binary,
    gen_multisource_scenario,
    largest_remainder_counts,
)
from .estimators import JcpotAdapter, OtdaAdapter
from .exceptions import (
    ConfigError,
    DataError,
    DegenerateKernelError,
    DegenerateMassError,
    JcpotError,
    KernelUnderflowError,
    MissingClassError,
    NonConvergenceError,
    NumericalError,
    ParseError,
)
from .io import (
    load_labeled_csv,
    load_predictions_csv,
    save_labeled_csv,
    save_predictions_csv,
    scenario_to_csvs,
)
from .metrics import accuracy, l1_proportion_error, mass_leakage
from .oracle import OracleResult, simplex_grid_oracle
from .ot_core import (
    DiscreteMeasure,
    GibbsKernel,
    SinkhornResult,
    col_projection,
    entropy,
    exact_ot_oracle,
    gibbs_kernel,
    kl_divergence,
    row_projection,
    sinkhorn,
    squared_euclidean_cost,
    transport_cost,
    uniform_measure,
)
from .report import (
    Report,
    RunRecord,
    export_tables,
    parse_report,
    report_body,
    serialize_report,
)
from .solver import (
    JcpotProblem,
    JcpotSolution,
    class_row_projection,
    jcpot_fit,
    proportion_update,
)

__version__ = "0.1.0"

__all__ = [
    "ClassOperators", "ConfigError", "DataError", "DegenerateKernelError",
    "DegenerateMassError", "DiscreteMeasure", "GibbsKernel", "JcpotAdapter",
    "JcpotError", "JcpotProblem", "JcpotSolution", "KernelUnderflowError",
    "LabelScores", "METHODS", "MissingClassError", "NonConvergenceError",
    "NumericalError", "OracleResult", "OtdaAdapter", "OtdaResult", "ParseError",
    "Prediction", "Report", "RunConfig", "RunRecord", "Scenario", "SinkhornResult",
    "accuracy", "barycentric_map", "build_class_operators", "class_row_projection",
    "classify_pt", "col_projection", "derived_seed", "entropy", "exact_ot_oracle",
    "export_tables", "gen_gaussian_binary", "gen_multisource_scenario",
    "gibbs_kernel", "jcpot_fit", "kl_divergence", "l1_proportion_error",
    "label_propagation", "largest_remainder_counts", "load_labeled_csv",
    "load_predictions_csv", "mass_from_proportions", "mass_leakage",
    "otda_baseline", "parse_report", "parse_weights_spec", "predict_from_scores",
    "proportion_update", "proportions_from_mass", "report_body", "row_projection",
    "run_benchmark", "save_labeled_csv", "save_predictions_csv",
    "scenario_to_csvs", "serialize_report", "simplex_grid_oracle", "sinkhorn",
    "squared_euclidean_cost", "transport_cost", "uniform_measure",
]
