"""Pointed residuated lattices with a guard: terms, a decision oracle over the
standard models, guard and variable elimination, uniform interpolants and a
finite-algebra workbench."""

from .elimination import EliminationResult, eliminate, eliminate_basic
from .fm import ConstraintSystem, LinearConstraint, brute_force_feasible, fm_feasible
from .guards import deduction_left, deduction_right, eliminate_guards, reverse_disjunct
from .interpolation import (
    NoWitness, WitnessError, canonical_witness, left_interpolant, right_interpolant,
)
from .normal_form import la_conormalize, la_normalize, normalize, uniformize_y
from .oracle import check, decide, decide_oag_qf, evaluate, satisfiable
from .syntax import ParseError, load_problem, parse_conclusion, parse_term, print_term
from .terms import (
    E, LAMBDA, ZERO, Signature, Term, Var, VarContext, equiv, free_vars, nabla, substitute,
)

__version__ = "0.1.0"

__all__ = [
    "E", "LAMBDA", "ZERO", "ConstraintSystem", "EliminationResult", "LinearConstraint", "NoWitness",
    "ParseError", "Signature", "Term", "Var", "VarContext", "WitnessError", "brute_force_feasible",
    "canonical_witness", "check", "decide", "decide_oag_qf", "deduction_left", "deduction_right",
    "eliminate", "eliminate_basic", "eliminate_guards", "equiv", "evaluate", "fm_feasible", "free_vars",
    "la_conormalize", "la_normalize", "left_interpolant", "load_problem", "nabla", "normalize",
    "parse_conclusion", "parse_term", "print_term", "reverse_disjunct", "right_interpolant",
    "satisfiable", "substitute", "uniformize_y",
]
