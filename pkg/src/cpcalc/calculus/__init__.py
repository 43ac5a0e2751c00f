"""First-order differential calculi: ansatz, conditions, solver, checks."""
from .ansatz import (
    CALCULI,
    CASE_TERMS,
    TERM_NAMES,
    Ansatz,
    published_coefficients,
    published_relation,
    term_tensors,
)
from .engine import CONDITIONS, CalculusEngine
from .projection import Projection, projection_for, solve_relation_coefficients
from .solve import CASES, SolveReport, SolveSettings, make_context, solve_case
from .verify import (
    IndependenceError,
    VerifyReport,
    ansatz_rank,
    expand_ansatz,
    factorization_check,
    require_independent,
    verify_calculus,
)

__all__ = [
    "CALCULI", "CASE_TERMS", "TERM_NAMES", "Ansatz", "published_coefficients", "published_relation",
    "term_tensors", "CONDITIONS", "CalculusEngine", "Projection", "projection_for",
    "solve_relation_coefficients", "CASES", "SolveReport", "SolveSettings", "make_context", "solve_case",
    "IndependenceError", "VerifyReport", "ansatz_rank", "expand_ansatz", "factorization_check",
    "require_independent", "verify_calculus",
]
