from .obligations import (KINDS, Obligation, ObligationResult, ProofContext,
                          get_context)
from .smtlib import emit_script, smt_term
from .solver import SolverResult, find_solver, parse_model, run_solver
