"""Condensed detachment proof search and proof refinement.

The layers, bottom up: terms (unification and measurement), inference
(the detachment rule and retention filters), proofs (checking and
metrics), search (given-clause saturation), formulas (file syntax),
campaign (multi-run methodologies), report and cli (presentation).
"""

from .terms import (
    Application,
    Term,
    Variable,
    app,
    canonicalize,
    contains_pattern,
    is_variant,
    match,
    rename_apart,
    skeleton,
    substitute,
    unify,
    var,
    variables,
    weight,
)
from .inference import (
    ByAxiom,
    ByCd,
    Clause,
    FilterConfig,
    Rejection,
    condensed_detachment,
    make_clause,
    passes_filters,
    subsumes,
)
from .proofs import (
    CheckResult,
    Metrics,
    Proof,
    ProofStep,
    check_proof,
    metrics_of_steps,
    proof_metrics,
    steps_as_resonators,
)
from .search import (
    GoalHit,
    Hint,
    Resonator,
    SearchResult,
    SearchStats,
    StrategyConfig,
    extract_proof,
    ground_goal,
    saturate,
)
from .formulas import (
    NamedFormula,
    ParseError,
    ProblemSpec,
    ProofDocument,
    SpecError,
    document_to_proof,
    load_problem,
    load_proof,
    parse_formula,
    parse_problem,
    parse_proof,
    print_formula,
    print_proof,
    proof_to_document,
)
from .campaign import (
    BlockSteps,
    CampaignPlan,
    CampaignResult,
    Cram,
    DependenceEntry,
    LemmaAdjunction,
    RunReport,
    Sweep,
    block_steps_loop,
    cram,
    dependence,
    lemma_adjunction,
    load_plan,
    parse_grid,
    parse_plan,
    run_plan,
    sweep,
)
from .report import render_report_figure, report_line, report_lines, write_report

__version__ = "0.1.0"

__all__ = [
    "Application", "Term", "Variable", "app", "canonicalize",
    "contains_pattern", "is_variant", "match", "rename_apart", "skeleton",
    "substitute", "unify", "var", "variables", "weight",
    "ByAxiom", "ByCd", "Clause", "FilterConfig", "Rejection",
    "condensed_detachment", "make_clause", "passes_filters", "subsumes",
    "CheckResult", "Metrics", "Proof", "ProofStep", "check_proof",
    "metrics_of_steps", "proof_metrics", "steps_as_resonators",
    "GoalHit", "Hint", "Resonator", "SearchResult", "SearchStats",
    "StrategyConfig", "extract_proof", "ground_goal", "saturate",
    "NamedFormula", "ParseError", "ProblemSpec", "ProofDocument",
    "SpecError", "document_to_proof", "load_problem", "load_proof",
    "parse_formula", "parse_problem", "parse_proof", "print_formula",
    "print_proof", "proof_to_document",
    "BlockSteps", "CampaignPlan", "CampaignResult", "Cram",
    "DependenceEntry", "LemmaAdjunction", "RunReport", "Sweep",
    "block_steps_loop", "cram", "dependence", "lemma_adjunction",
    "load_plan", "parse_grid", "parse_plan", "run_plan", "sweep",
    "render_report_figure", "report_line", "report_lines", "write_report",
    "__version__",
]
