"""Exact p-adic arithmetic and Hyers' direct method for cubic and quartic
functional equations over Q_p."""

from .control import (
    ControlFunction,
    HypothesisReport,
    corollary_conditions,
    evaluate_control,
    phi_tilde,
    phi_tilde_condition,
    uniqueness_tail_condition,
    vanishing_condition,
)
from .direct_method import (
    IterationConfig,
    IterationTrace,
    StabilityReport,
    approximant,
    closed_form_oracle,
    iterate_to_limit,
    uniqueness_probe,
    verify_defect_bound,
    verify_intermediate_bound,
    verify_stability_bound,
)
from .equations import (
    EquationFamily,
    PolynomialFunction,
    cubic_defect,
    evaluate,
    is_exact_solution,
    jun_kim_defect,
    park_bae_defect,
    quartic_defect,
)
from .estimator import DirectMethodRepair
from .harness import ExperimentConfig, ReportDocument, emit_report, run_experiment
from .padic_core import (
    Magnitude,
    PAdicScalar,
    PrimeContext,
    Valuation,
    digit_expansion,
    norm,
    valuation,
)
from .parser import parse_polynomial, render_polynomial

__version__ = "0.1.0"
