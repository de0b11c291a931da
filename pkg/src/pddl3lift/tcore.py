"""Regression-based constraint compilation (lifted, and the ground baseline).

Both variants share one code path; they differ only in the regression
operator and in whether schemas are grounded first.  The lifted variant
keeps the action count unchanged.
"""

from __future__ import annotations

import time
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .grounding import DEFAULT_GROUND_CAP, ground, ground_regression, ground_regression_trivial
from .logic import (
    BOTTOM, TOP, And, Formula, Implies, Literal, Not, conj, fresh_name, rename_bound_apart, simplify,
)
from .model import (
    ActionSchema, ConditionalEffect, Constraint, ConstraintKind, DomainDef, ProblemDef, promote_constants,
)
from .monitors import Monitors, check_no_collision, mint
from .regression import is_regression_trivial, lifted_regression
from .semantics import holds
from .stats import CompiledTask, input_stats

__all__ = ['check_initially_violated', 'augment_initial_state', 'compile_c_regression', 'compile_lifted_tcore',
           'compile_ground_tcore', 'constraint_hygiene',
           'ground_schemas']

K = ConstraintKind
Regress = Callable[[Formula, ActionSchema], Formula]
Trivial = Callable[[Formula, ActionSchema], bool]


def check_initially_violated(domain: DomainDef, problem: ProblemDef,
                             constraints: Optional[Sequence[Constraint]] = None) -> Optional[Constraint]:
    """First A constraint false in I, or SB constraint whose trigger is true in I."""
    universe = problem.universe(domain)
    init = frozenset(problem.init)
    for c in problem.constraints if constraints is None else constraints:
        if c.kind is K.ALWAYS and not holds(init, c.phi, universe):
            return c
        if c.kind is K.SOMETIME_BEFORE and holds(init, c.phi, universe):
            return c
    return None


def augment_initial_state(domain: DomainDef, problem: ProblemDef, monitors: Monitors,
                          constraints: Optional[Sequence[Constraint]] = None) -> frozenset:
    universe = problem.universe(domain)
    init = frozenset(problem.init)
    extra = set()
    for c in problem.constraints if constraints is None else constraints:
        if c.kind is K.SOMETIME and holds(init, c.phi, universe):
            extra.add(monitors.hold_of(c))
        elif c.kind is K.SOMETIME_AFTER and (holds(init, c.psi, universe) or not holds(init, c.phi, universe)):
            extra.add(monitors.hold_of(c))
        elif c.kind is K.SOMETIME_BEFORE and holds(init, c.psi, universe):
            extra.add(monitors.seen_of(c.psi))
        elif c.kind is K.AT_MOST_ONCE and holds(init, c.phi, universe):
            extra.add(monitors.seen_of(c.phi))
    return init | extra


def _eff(cond: Formula, atom, positive: bool = True) -> ConditionalEffect:
    return ConditionalEffect((), cond, Literal(atom, positive))


def compile_c_regression(a: ActionSchema, constraints: Sequence[Constraint], monitors: Monitors,
                         regress: Regress, trivial: Trivial) -> Tuple[List[Formula], List[ConditionalEffect]]:
    """New preconditions P and effects E for action ``a``.

    Items governed by a regression that leaves its formula unchanged are
    omitted: the A precondition, the monotone hold/seen effects of ST, AO
    and SB, the AO precondition, and both SA effects when both of its
    regressions are unchanged.  The SB precondition is always kept.
    """
    P: List[Formula] = []
    E: List[ConditionalEffect] = []
    cache: Dict[int, Tuple[Formula, bool]] = {}

    def R(phi: Formula) -> Tuple[Formula, bool]:
        key = id(phi)
        if key not in cache:
            t = trivial(phi, a)
            cache[key] = (phi if t else regress(phi, a), t)
        return cache[key]

    for c in constraints:
        if c.kind is K.ALWAYS:
            r, t = R(c.phi)
            if not t:
                P.append(r)
        elif c.kind is K.SOMETIME:
            r, t = R(c.phi)
            if not t:
                E.append(_eff(r, monitors.hold_of(c)))
        elif c.kind is K.AT_MOST_ONCE:
            r, t = R(c.phi)
            if not t:
                seen = monitors.seen_of(c.phi)
                E.append(_eff(r, seen))
                P.append(Not(And((seen, Not(c.phi), r))))
        elif c.kind is K.SOMETIME_BEFORE:
            rphi, _ = R(c.phi)
            rpsi, tpsi = R(c.psi)
            seen = monitors.seen_of(c.psi)
            if not tpsi:
                E.append(_eff(rpsi, seen))
            P.append(Implies(rphi, seen))
        elif c.kind is K.SOMETIME_AFTER:
            rphi, tphi = R(c.phi)
            rpsi, tpsi = R(c.psi)
            if not (tphi and tpsi):
                hold = monitors.hold_of(c)
                E.append(_eff(rpsi, hold))
                E.append(_eff(And((rphi, Not(rpsi))), hold, False))
    P = [p for p in map(simplify, P) if p != TOP]
    E = [e for e in (ConditionalEffect((), simplify(e.condition), e.literal) for e in E) if e.condition != BOTTOM]
    return P, _dedup_effects(E)


def _dedup_effects(effects: Sequence[ConditionalEffect]) -> List[ConditionalEffect]:
    out, seen = [], set()
    for e in effects:
        if e not in seen:
            seen.add(e)
            out.append(e)
    return out


def constraint_hygiene(constraints: Sequence[Constraint], actions: Sequence[ActionSchema]) -> Tuple[Constraint, ...]:
    """Rename bound variables of constraint formulas away from every action parameter name."""
    taken = {p.name for a in actions for p in a.params}
    return tuple(Constraint(c.kind, rename_bound_apart(c.phi, taken),
                            None if c.psi is None else rename_bound_apart(c.psi, taken), c.index)
                 for c in constraints)


def _strip_constraints_req(reqs) -> Tuple[str, ...]:
    return tuple(r for r in reqs if r != ':constraints')


def _unsolvable(domain: DomainDef, problem: ProblemDef, actions, bad: Constraint, stats, mode, amap=None
                ) -> CompiledTask:
    d = domain.with_actions(actions, requirements=_strip_constraints_req(domain.requirements))
    p = ProblemDef(problem.name, d.name, problem.objects, frozenset(problem.init), BOTTOM, ())
    d, p = promote_constants(d, p)
    _finish_stats(stats, d, 0, 0)
    return CompiledTask(d, p, mode, stats, unsolvable=bad, action_map=amap)


def _finish_stats(stats, d: DomainDef, n_pre: int, n_mon: int) -> None:
    stats.n_actions_out = len(d.actions)
    stats.n_effect_items_out = sum(len(a.effects) for a in d.actions)
    stats.n_preconds_added = n_pre
    stats.n_monitoring_atoms = n_mon


def _compile_with(domain: DomainDef, problem: ProblemDef, actions: Sequence[ActionSchema],
                  constraints: Sequence[Constraint], goal: Formula, regress: Regress, trivial: Trivial,
                  mode: str, stats, amap=None) -> CompiledTask:
    bad = check_initially_violated(domain, problem, constraints)
    if bad is not None:
        return _unsolvable(domain, problem, actions, bad, stats, mode, amap)
    constraints = constraint_hygiene(constraints, actions)
    monitors = mint(constraints)
    check_no_collision(domain, monitors)
    init = augment_initial_state(domain, problem, monitors, constraints)
    new_actions = []
    n_pre = 0
    for a in actions:
        P, E = compile_c_regression(a, constraints, monitors, regress, trivial)
        n_pre += len(P)
        if not P and not E:
            new_actions.append(a)
            continue
        pre = simplify(conj(a.precondition, *P)) if P else a.precondition
        new_actions.append(ActionSchema(a.name, a.params, pre, a.effects + tuple(E)))
    holds_ = [monitors.hold[c.index] for c in constraints if c.index in monitors.hold]
    new_goal = simplify(conj(goal, *holds_)) if holds_ else goal
    d = domain.with_actions(new_actions, predicates=tuple(domain.predicates) + tuple(monitors.predicates()),
                            requirements=_strip_constraints_req(domain.requirements))
    p = ProblemDef(problem.name, d.name, problem.objects, init, new_goal, ())
    d, p = promote_constants(d, p)
    _finish_stats(stats, d, n_pre, len(monitors.order))
    return CompiledTask(d, p, mode, stats, action_map=amap,
                        monitors={a.predicate: 'monitor' for a in monitors.order})


def compile_lifted_tcore(domain: DomainDef, problem: ProblemDef, regress: Optional[Regress] = None
                         ) -> CompiledTask:
    """Compile constraints away with lifted regression; no grounding, same action count.

    ``regress`` replaces the regression operator (used by mutation tests).
    """
    t0 = time.perf_counter()
    stats = input_stats('lifted-tcore', domain, problem)
    regress = regress or partial(lifted_regression, types=domain.types)
    trivial = partial(is_regression_trivial, types=domain.types)
    task = _compile_with(domain, problem, domain.actions, problem.constraints, problem.goal, regress, trivial,
                         'lifted-tcore', stats)
    stats.wall_time_seconds = time.perf_counter() - t0
    return task


def ground_schema_name(name: str, args: Sequence[str], taken) -> str:
    base = '_'.join((name,) + tuple(args))
    return base if base not in taken else fresh_name(base + '_', taken)


def ground_schemas(domain: DomainDef, problem: ProblemDef, cap: int = DEFAULT_GROUND_CAP):
    """Ground actions as parameterless schemas, the name map, and the grounded problem.

    The map sends each schema name to the original schema name and arguments.
    """
    gp = ground(domain, problem, cap)
    taken: set = set()
    amap: Dict[str, Tuple[str, Tuple[str, ...]]] = {}
    schemas = []
    for g in gp.actions:
        args = tuple(c.name for c in g.args)
        name = ground_schema_name(g.name, args, taken)
        taken.add(name)
        amap[name] = (g.name, args)
        schemas.append(ActionSchema(name, (), g.precondition,
                                    tuple(ConditionalEffect((), c, lit) for c, lit in g.effects)))
    ground_problem = ProblemDef(problem.name, problem.domain_name, problem.objects, problem.init, gp.goal,
                                gp.constraints)
    return schemas, amap, ground_problem


def compile_ground_tcore(domain: DomainDef, problem: ProblemDef, cap: int = DEFAULT_GROUND_CAP) -> CompiledTask:
    """Ground everything, then run the same compilation with propositional regression.

    Each ground action becomes a parameterless schema; ``action_map`` maps
    its name back to the original schema and arguments.
    """
    t0 = time.perf_counter()
    stats = input_stats('ground-tcore', domain, problem)
    schemas, amap, gprob = ground_schemas(domain, problem, cap)
    task = _compile_with(domain, gprob, schemas, gprob.constraints, gprob.goal,
                         ground_regression, ground_regression_trivial, 'ground-tcore', stats, amap)
    stats.wall_time_seconds = time.perf_counter() - t0
    return task
