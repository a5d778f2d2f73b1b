"""Regularization methods for linear ill-posed operator equations.

Discretized first-kind integral equations ``A u = f`` on the unit interval
are solved from noisy data ``f_delta`` with four families of methods:
Tikhonov regularization, quasi-solutions on a norm ball, Landweber
iteration, and a dynamical-systems flow with a decaying regularizer.
Parameter-choice rules (a-priori, discrepancy, stopping times) and a sweep
harness for convergence studies are included.
"""

from __future__ import annotations

from .dsm import (
    DsmDiscrepancyResult,
    DsmTrajectory,
    EpsilonSchedule,
    StopRoot,
    dsm_evolve,
    dsm_stop_discrepancy,
    dsm_stop_root,
)
from .errors import (
    ConfigError,
    DegenerateOperatorError,
    IllposedError,
    InvalidKernelError,
    NoRootError,
    NoiseDominatesDataError,
    NumericalError,
    OutOfDomainError,
)
from .estimators import (
    DsmEstimator,
    LandweberEstimator,
    QuasiSolutionEstimator,
    TikhonovEstimator,
)
from .harness import (
    REPORT_HEADER,
    MethodSpec,
    ReportRow,
    SweepConfig,
    format_report,
    parse_alpha_rule,
    parse_dsm_stop,
    parse_landweber_stop,
    parse_schedule,
    read_report,
    run_cell,
    run_sweep,
    write_report,
)
from .landweber import (
    DiscrepancyStop,
    FixedStop,
    IterationTrace,
    OracleStop,
    landweber_run,
    theoretical_stop_bound,
)
from .linops import (
    DiscreteOperator,
    Grid,
    SpectralData,
    build_fredholm_operator,
    build_integration_operator,
    dirichlet_green_kernel,
    resolvent_solve,
    scale_to_unit,
    spectral,
)
from .problems import (
    PROBLEM_KINDS,
    TRUTH_FUNCTIONS,
    HadamardRow,
    NoisyData,
    Problem,
    add_noise,
    hadamard_instability_table,
    make_problem,
    minimal_norm_solution,
    stable_differentiate,
    truth_cospi,
    truth_hat,
    truth_one,
    truth_sin1,
)
from .quasisol import BallCompactum, QuasiResult, project_onto_ball, quasi_solution
from .variational import (
    AlphaRule,
    MorozovResult,
    apriori_alpha,
    morozov_alpha,
    tikhonov_residual,
    tikhonov_solve,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaRule",
    "BallCompactum",
    "ConfigError",
    "DegenerateOperatorError",
    "DiscrepancyStop",
    "DiscreteOperator",
    "DsmDiscrepancyResult",
    "DsmEstimator",
    "DsmTrajectory",
    "EpsilonSchedule",
    "FixedStop",
    "Grid",
    "HadamardRow",
    "IllposedError",
    "InvalidKernelError",
    "IterationTrace",
    "LandweberEstimator",
    "MethodSpec",
    "MorozovResult",
    "NoRootError",
    "NoiseDominatesDataError",
    "NoisyData",
    "NumericalError",
    "OracleStop",
    "OutOfDomainError",
    "PROBLEM_KINDS",
    "Problem",
    "QuasiResult",
    "QuasiSolutionEstimator",
    "REPORT_HEADER",
    "ReportRow",
    "SpectralData",
    "StopRoot",
    "SweepConfig",
    "TRUTH_FUNCTIONS",
    "TikhonovEstimator",
    "add_noise",
    "apriori_alpha",
    "build_fredholm_operator",
    "build_integration_operator",
    "dirichlet_green_kernel",
    "dsm_evolve",
    "dsm_stop_discrepancy",
    "dsm_stop_root",
    "format_report",
    "hadamard_instability_table",
    "landweber_run",
    "make_problem",
    "minimal_norm_solution",
    "morozov_alpha",
    "parse_alpha_rule",
    "parse_dsm_stop",
    "parse_landweber_stop",
    "parse_schedule",
    "project_onto_ball",
    "quasi_solution",
    "read_report",
    "resolvent_solve",
    "run_cell",
    "run_sweep",
    "scale_to_unit",
    "spectral",
    "stable_differentiate",
    "theoretical_stop_bound",
    "tikhonov_residual",
    "tikhonov_solve",
    "truth_cospi",
    "truth_hat",
    "truth_one",
    "truth_sin1",
    "write_report",
]
