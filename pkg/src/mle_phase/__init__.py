"""Phase transition of MLE existence in high-dimensional logistic regression.

The package computes the exact asymptotic boundary h(beta0, gamma0) below
which the logistic MLE exists (as p/n -> kappa), detects separation of
finite datasets by linear programming, estimates empirical phase diagrams
by Monte Carlo, and validates everything through conic-geometry
estimators (the empirical boundary statistic Q_n, statistical dimensions,
and the kinematic formula).
"""

from .boundary import (
    BoundarySolution,
    CurvePoint,
    ObjectiveEval,
    boundary_curve,
    objective,
    solve_boundary,
    solve_boundary_1d,
)
from .conegeom import (
    KinematicVerdict,
    QnEstimate,
    StatDimEstimate,
    estimate_qn,
    kinematic_predict,
    minimize_positive_part,
    statistical_dimension,
    tiny_orthant_oracle,
)
from .phasesim import (
    CellResult,
    GridSpec,
    PhaseDiagram,
    diagram_to_csv,
    diagram_to_json,
    diagram_to_svg,
    estimate_cell,
    run_phase_diagram,
    simulate_dataset,
)
from .probability import (
    ModelParams,
    QuadratureRule,
    default_rule_for,
    gauss_hermite_rule,
    normal_cdf,
    normal_pdf,
    psi,
    psi_double_prime,
    psi_prime,
    sample_yv,
    sigmoid,
    yv_quadrature,
)
from .rng import RngSeed
from .separability import (
    Dataset,
    DatasetMeta,
    SeparabilityVerdict,
    SolverStatus,
    check_separation,
    check_single_variable_separation,
    load_dataset_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySolution",
    "CellResult",
    "CurvePoint",
    "Dataset",
    "DatasetMeta",
    "GridSpec",
    "KinematicVerdict",
    "ModelParams",
    "ObjectiveEval",
    "PhaseDiagram",
    "QnEstimate",
    "QuadratureRule",
    "RngSeed",
    "SeparabilityVerdict",
    "SolverStatus",
    "StatDimEstimate",
    "boundary_curve",
    "check_separation",
    "check_single_variable_separation",
    "default_rule_for",
    "diagram_to_csv",
    "diagram_to_json",
    "diagram_to_svg",
    "estimate_cell",
    "estimate_qn",
    "gauss_hermite_rule",
    "kinematic_predict",
    "load_dataset_csv",
    "minimize_positive_part",
    "normal_cdf",
    "normal_pdf",
    "objective",
    "psi",
    "psi_double_prime",
    "psi_prime",
    "run_phase_diagram",
    "sample_yv",
    "sigmoid",
    "simulate_dataset",
    "solve_boundary",
    "solve_boundary_1d",
    "statistical_dimension",
    "tiny_orthant_oracle",
    "yv_quadrature",
]
