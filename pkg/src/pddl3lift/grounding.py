"""Naive full grounding and ground (propositional) regression."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .errors import ResourceLimitError
from .logic import (
    BOTTOM, TOP, And, Atom, Equals, Exists, Forall, Formula, Implies, Literal, Not, Or, Truth,
    apply_substitution, atoms_of, disj, map_atoms, simplify,
)
from .model import ActionSchema, Constraint, DomainDef, ProblemDef, Universe
from .semantics import GroundAction, instantiate

__all__ = ['DEFAULT_GROUND_CAP', 'GroundedProblem', 'expand_quantifiers', 'ground', 'ground_actions',
           'ground_gamma', 'ground_regression', 'ground_effect_pairs']

DEFAULT_GROUND_CAP = 200_000


def expand_quantifiers(phi: Formula, universe: Universe) -> Formula:
    """Replace quantifiers by finite conjunctions/disjunctions over the typed objects."""
    if isinstance(phi, (Atom, Equals, Truth)):
        return phi
    if isinstance(phi, Not):
        return Not(expand_quantifiers(phi.arg, universe))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(expand_quantifiers(a, universe) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(expand_quantifiers(phi.lhs, universe), expand_quantifiers(phi.rhs, universe))
    if isinstance(phi, (Forall, Exists)):
        parts = [expand_quantifiers(apply_substitution(phi.body, dict(zip(phi.vars, tup))), universe)
                 for tup in universe.tuples(phi.vars)]
        if isinstance(phi, Forall):
            return And(tuple(parts)) if parts else TOP
        return Or(tuple(parts)) if parts else BOTTOM
    raise TypeError(f'not a formula: {phi!r}')


def _ground_formula(phi: Formula, universe: Universe) -> Formula:
    return simplify(expand_quantifiers(phi, universe))


def ground_actions(domain: DomainDef, universe: Universe, cap: int = DEFAULT_GROUND_CAP
                   ) -> List[GroundAction]:
    """One ground action per type-compatible argument tuple.

    Instances whose precondition simplifies to false are left out: they can
    never be applied, so no plan changes, and this keeps e.g. an action with
    a ``(not (= ?x ?y))`` guard at the ordered-pair count.  Nothing is pruned
    by reachability.
    """
    out: List[GroundAction] = []
    for schema in domain.actions:
        for args in universe.tuples(schema.params):
            g = instantiate(schema, args, universe)
            pre = _ground_formula(g.precondition, universe)
            if pre == BOTTOM:
                continue
            effects = []
            for cond, lit in g.effects:
                c = _ground_formula(cond, universe)
                if c != BOTTOM:
                    effects.append((c, lit))
            out.append(GroundAction(g.name, g.args, pre, tuple(effects)))
            if len(out) > cap:
                raise ResourceLimitError(f'more than {cap} ground actions (raise the cap with --ground-cap)')
    return out


@dataclass
class GroundedProblem:
    atoms: Set[Atom]
    actions: List[GroundAction]
    init: frozenset
    goal: Formula
    constraints: Tuple[Constraint, ...]
    universe: Universe = field(repr=False, default=None)

    def action_names(self) -> List[str]:
        return [str(a) for a in self.actions]


def ground(domain: DomainDef, problem: ProblemDef, cap: int = DEFAULT_GROUND_CAP) -> GroundedProblem:
    universe = problem.universe(domain)
    actions = ground_actions(domain, universe, cap)
    goal = _ground_formula(problem.goal, universe)
    constraints = tuple(
        Constraint(c.kind, _ground_formula(c.phi, universe),
                   None if c.psi is None else _ground_formula(c.psi, universe), c.index)
        for c in problem.constraints)
    atoms: Set[Atom] = set(problem.init)
    atoms.update(atoms_of(goal))
    for c in constraints:
        for f in c.formulas:
            atoms.update(atoms_of(f))
    for a in actions:
        atoms.update(atoms_of(a.precondition))
        for cond, lit in a.effects:
            atoms.update(atoms_of(cond))
            atoms.add(lit.atom)
    return GroundedProblem(atoms, actions, frozenset(problem.init), goal, constraints, universe)


def ground_effect_pairs(a: Union[GroundAction, ActionSchema]) -> Iterator[Tuple[Formula, Literal]]:
    """(condition, literal) pairs of a ground action or of a 0-ary schema with ground effects."""
    if isinstance(a, GroundAction):
        yield from a.effects
        return
    for eff in a.effects:
        if eff.z_vars or a.params:
            raise ValueError(f'action {a.name} is not ground')
        yield eff.condition, eff.literal


def ground_gamma(lit: Literal, a) -> Formula:
    """Disjunction of the conditions of all effects of ``a`` producing ``lit``."""
    return simplify(disj(*[c for c, l in ground_effect_pairs(a) if l == lit]))


def ground_regression(phi: Formula, a) -> Formula:
    """Regress a ground, quantifier-free formula through a ground action."""
    def replace(f: Atom) -> Formula:
        add = ground_gamma(Literal(f, True), a)
        dele = ground_gamma(Literal(f, False), a)
        return Or((add, And((f, Not(dele)))))
    return simplify(map_atoms(phi, replace))


def ground_regression_trivial(phi: Formula, a) -> bool:
    for f in atoms_of(phi):
        if ground_gamma(Literal(f, True), a) != BOTTOM or ground_gamma(Literal(f, False), a) != BOTTOM:
            return False
    return True
