"""Compile PDDL3 state-trajectory constraints away, with or without grounding."""

from .compiler import compile_task
from .errors import (
    PDDLError, PDDLSyntaxError, PlanFormatError, ResourceLimitError, TypeMismatchError, UndeclaredSymbolError,
    UnsupportedFeatureError,
)
from .lcc import compile_lcc
from .logic import (
    BOTTOM, TOP, And, Atom, Constant, Equals, Exists, Forall, Implies, Literal, Not, Or, Substitution, Variable,
    apply_substitution, canonical, canonical_key, free_variables, simplify,
)
from .model import ActionSchema, ConditionalEffect, Constraint, ConstraintKind, DomainDef, ProblemDef
from .parser import PlanStep, parse_domain, parse_formula, parse_plan, parse_problem
from .printer import domain_to_pddl, problem_to_pddl
from .regression import (
    is_regression_trivial, lifted_gamma, lifted_regression, mgu, weakest_condition,
)
from .semantics import holds, trajectory, validate_plan
from .tcore import compile_ground_tcore, compile_lifted_tcore

__version__ = '0.1.0'
