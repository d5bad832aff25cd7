"""Variance-reduced stochastic gradient solvers for constrained and
l1-regularized finite-sum problems, with computable linear-rate certificates.

The library splits into problem definitions (:mod:`vrgrad.problems`),
projections (:mod:`vrgrad.geometry`), seeded sampling
(:mod:`vrgrad.sampling`), the solvers themselves (:mod:`vrgrad.solvers`),
certificate machinery (:mod:`vrgrad.certificates`), and dataset utilities
(:mod:`vrgrad.data`).  The ``vrgrad`` command line wraps the common runs.
"""

__version__ = "0.1.0"

from .certificates import (
    CertificateError,
    CertificateReport,
    EnumerationBudgetError,
    OptimalFacts,
    beta_from_constants,
    bounded_gap_M,
    build_certificate,
    hoffman_theta_bound,
    mu_estimate,
    reference_solution,
    ssc_probe,
    theoretical_rate,
    variance_diagnostic,
)
from .data import SyntheticSpec, gen_synthetic, read_libsvm, write_libsvm
from .geometry import project_box, project_l1_ball, prox_l1
from .problems import (
    Box,
    L1Ball,
    L1Regularizer,
    LipschitzInfo,
    LossSpec,
    ProblemSpec,
    SparseDesignMatrix,
    aggregate_lipschitz,
    component_lipschitz,
    compute_lipschitz_info,
    eval_component_grad,
    eval_full_grad,
    eval_objective,
)
from .sampling import SamplingDistribution, build_distribution, draw, draw_many
from .solvers import (
    DivergenceError,
    LineSearchError,
    RunTrace,
    SolverConfig,
    run_afg,
    run_hybrid_vrpsg2,
    run_projected_sgd,
    run_prox_svrg,
    run_vrpsg,
)

__all__ = [
    "Box",
    "CertificateError",
    "CertificateReport",
    "DivergenceError",
    "EnumerationBudgetError",
    "L1Ball",
    "L1Regularizer",
    "LineSearchError",
    "LipschitzInfo",
    "LossSpec",
    "OptimalFacts",
    "ProblemSpec",
    "RunTrace",
    "SamplingDistribution",
    "SolverConfig",
    "SparseDesignMatrix",
    "SyntheticSpec",
    "aggregate_lipschitz",
    "beta_from_constants",
    "bounded_gap_M",
    "build_certificate",
    "build_distribution",
    "component_lipschitz",
    "compute_lipschitz_info",
    "draw",
    "draw_many",
    "eval_component_grad",
    "eval_full_grad",
    "eval_objective",
    "gen_synthetic",
    "hoffman_theta_bound",
    "mu_estimate",
    "project_box",
    "project_l1_ball",
    "prox_l1",
    "read_libsvm",
    "reference_solution",
    "run_afg",
    "run_hybrid_vrpsg2",
    "run_projected_sgd",
    "run_prox_svrg",
    "run_vrpsg",
    "ssc_probe",
    "theoretical_rate",
    "variance_diagnostic",
    "write_libsvm",
]
