"""Ground execution semantics: model checking, progression, plan validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InapplicableActionError, TypeMismatchError, UndeclaredSymbolError
from .logic import (
    And, Atom, Constant, Equals, Exists, Forall, Formula, Implies, Literal, Not, Or, Truth, Variable,
    apply_substitution,
)
from .model import ActionSchema, Constraint, ConstraintKind, DomainDef, ProblemDef, Universe
from .parser import PlanStep

__all__ = [
    'State', 'GroundAction', 'Verdict', 'FailureKind', 'holds', 'instantiate', 'applicable', 'apply',
    'trajectory', 'satisfies_constraint', 'check_sequence', 'validate_plan', 'resolve_step',
]

State = FrozenSet[Atom]


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: Tuple[Constant, ...]
    precondition: Formula
    effects: Tuple[Tuple[Formula, Literal], ...]  # (condition, literal), all ground

    def __str__(self) -> str:
        return '(' + ' '.join([self.name] + [c.name for c in self.args]) + ')'


def holds(s: State, phi: Formula, universe: Universe) -> bool:
    """Tarskian evaluation of a closed formula; quantifiers range over typed objects."""
    if isinstance(phi, Atom):
        return phi in s
    if isinstance(phi, Truth):
        return phi.value
    if isinstance(phi, Equals):
        if isinstance(phi.lhs, Variable) or isinstance(phi.rhs, Variable):
            raise ValueError(f'free variable in {phi}')
        return phi.lhs.name == phi.rhs.name
    if isinstance(phi, Not):
        return not holds(s, phi.arg, universe)
    if isinstance(phi, And):
        return all(holds(s, a, universe) for a in phi.args)
    if isinstance(phi, Or):
        return any(holds(s, a, universe) for a in phi.args)
    if isinstance(phi, Implies):
        return not holds(s, phi.lhs, universe) or holds(s, phi.rhs, universe)
    if isinstance(phi, (Forall, Exists)):
        want_all = isinstance(phi, Forall)
        for tup in universe.tuples(phi.vars):
            v = holds(s, apply_substitution(phi.body, dict(zip(phi.vars, tup))), universe)
            if v != want_all:
                return v
        return want_all
    raise TypeError(f'not a formula: {phi!r}')


def instantiate(schema: ActionSchema, args: Sequence[Constant], universe: Universe) -> GroundAction:
    """Ground ``schema`` with ``args``, expanding each quantified effect over the universe."""
    if len(args) != len(schema.params):
        raise TypeMismatchError(f'{schema.name} expects {len(schema.params)} arguments, got {len(args)}')
    for p, a in zip(schema.params, args):
        if not universe.types.is_subtype(a.type, p.type):
            raise TypeMismatchError(f'{schema.name}: argument {a} is not of type {p.type}')
    theta = dict(zip(schema.params, args))
    pre = apply_substitution(schema.precondition, theta)
    effects = []
    for eff in schema.effects:
        eff = apply_substitution(eff, theta)
        for tup in universe.tuples(eff.z_vars):
            zt = dict(zip(eff.z_vars, tup))
            effects.append((apply_substitution(eff.condition, zt), apply_substitution(eff.literal, zt)))
    return GroundAction(schema.name, tuple(args), pre, tuple(effects))


def applicable(s: State, a: GroundAction, universe: Universe) -> bool:
    return holds(s, a.precondition, universe)


def apply(s: State, a: GroundAction, universe: Universe, check: bool = True) -> State:
    """Successor state: triggered deletes removed, then triggered adds added."""
    if check and not applicable(s, a, universe):
        raise InapplicableActionError(-1, str(a))
    adds, dels = set(), set()
    for cond, lit in a.effects:
        if holds(s, cond, universe):
            (adds if lit.positive else dels).add(lit.atom)
    return frozenset((s - dels) | adds)


def resolve_step(domain: DomainDef, universe: Universe, step: PlanStep) -> GroundAction:
    schema = domain.action(step.name)
    try:
        args = [universe.constant(n) for n in step.args]
    except UndeclaredSymbolError as e:
        raise UndeclaredSymbolError(f'plan step {step}: {e}') from None
    return instantiate(schema, args, universe)


def trajectory(domain: DomainDef, problem: ProblemDef, plan: Sequence[PlanStep]) -> List[State]:
    universe = problem.universe(domain)
    states = [frozenset(problem.init)]
    for i, step in enumerate(plan):
        g = resolve_step(domain, universe, step)
        if not applicable(states[-1], g, universe):
            raise InapplicableActionError(i, str(step))
        states.append(apply(states[-1], g, universe, check=False))
    return states


# ---------------------------------------------------------------------------
# constraints


def check_sequence(kind: ConstraintKind, phi: Sequence[bool], psi: Optional[Sequence[bool]] = None
                   ) -> Tuple[bool, Tuple[int, ...]]:
    """Decide a constraint from per-state truth values by a single scan.

    Returns ``(ok, witness)``; the witness lists the offending state indices.
    """
    n = len(phi)
    if kind is ConstraintKind.ALWAYS:
        for i in range(n):
            if not phi[i]:
                return False, (i,)
        return True, ()
    if kind is ConstraintKind.SOMETIME:
        return any(phi), ()
    if kind is ConstraintKind.AT_MOST_ONCE:
        starts = [i for i in range(n) if phi[i] and (i == 0 or not phi[i - 1])]
        return (len(starts) <= 1), (tuple(starts[:2]) if len(starts) > 1 else ())
    if kind is ConstraintKind.SOMETIME_BEFORE:
        seen = False
        for i in range(n):
            if phi[i] and not seen:
                return False, (i,)
            seen = seen or psi[i]
        return True, ()
    if kind is ConstraintKind.SOMETIME_AFTER:
        pending = None
        for i in range(n):
            if psi[i]:
                pending = None
            elif phi[i] and pending is None:
                pending = i
        return pending is None, (() if pending is None else (pending,))
    raise ValueError(kind)


def satisfies_constraint(sigma: Sequence[State], c: Constraint, universe: Universe
                         ) -> Tuple[bool, Tuple[int, ...]]:
    phi = [holds(s, c.phi, universe) for s in sigma]
    psi = [holds(s, c.psi, universe) for s in sigma] if c.psi is not None else None
    return check_sequence(c.kind, phi, psi)


class FailureKind(enum.Enum):
    INAPPLICABLE = 'inapplicable-action'
    GOAL = 'goal-unsatisfied'
    CONSTRAINT = 'constraint-violated'


@dataclass(frozen=True)
class Verdict:
    valid: bool
    kind: Optional[FailureKind] = None
    index: Optional[int] = None
    constraint: Optional[Constraint] = None
    witness: Tuple[int, ...] = ()
    states: Tuple[State, ...] = field(default=(), compare=False, repr=False)

    def __str__(self) -> str:
        if self.valid:
            return 'valid'
        if self.kind is FailureKind.INAPPLICABLE:
            return f'invalid: action {self.index} is not applicable'
        if self.kind is FailureKind.GOAL:
            return 'invalid: goal not satisfied in final state'
        where = ', '.join(map(str, self.witness))
        return f'invalid: constraint {self.constraint} violated (states {where})' if where else \
            f'invalid: constraint {self.constraint} violated'


def validate_plan(domain: DomainDef, problem: ProblemDef, plan: Sequence[PlanStep]) -> Verdict:
    universe = problem.universe(domain)
    try:
        sigma = trajectory(domain, problem, plan)
    except InapplicableActionError as e:
        return Verdict(False, FailureKind.INAPPLICABLE, index=e.index)
    for c in problem.constraints:
        ok, wit = satisfies_constraint(sigma, c, universe)
        if not ok:
            return Verdict(False, FailureKind.CONSTRAINT, constraint=c, witness=wit, states=tuple(sigma))
    if not holds(sigma[-1], problem.goal, universe):
        return Verdict(False, FailureKind.GOAL, states=tuple(sigma))
    return Verdict(True, states=tuple(sigma))
