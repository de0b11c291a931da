"""Regression-free constraint compilation with a terminal ``fin`` action.

Monitoring atoms are updated from the state an action is applied in, so
they lag the trajectory by one step; ``fin`` performs the last update and
sets ``__end``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .logic import BOTTOM, TOP, And, Formula, Implies, Literal, Not, conj, canonical_key, fresh_name, simplify
from .model import (
    ActionSchema, ConditionalEffect, Constraint, ConstraintKind, DomainDef, ProblemDef, promote_constants,
)
from .monitors import Monitors, check_no_collision, mint
from .stats import CompiledTask, input_stats
from .tcore import check_initially_violated, constraint_hygiene

__all__ = ['OpCounter', 'compile_c', 'compile_lcc']

log = logging.getLogger(__name__)
K = ConstraintKind


@dataclass
class OpCounter:
    """Counts item constructions and action visits during compilation."""

    ops: int = 0

    def tick(self, n: int = 1) -> None:
        self.ops += n


def _eff(cond: Formula, atom, positive: bool = True) -> ConditionalEffect:
    return ConditionalEffect((), cond, Literal(atom, positive))


def compile_c(constraints: Sequence[Constraint], monitors: Monitors, counter: OpCounter = None
              ) -> Tuple[List[Formula], List[ConditionalEffect]]:
    """Action-independent preconditions P and effects E."""
    counter = counter or OpCounter()
    P: List[Formula] = []
    E: List[ConditionalEffect] = []
    for c in constraints:
        if c.kind is K.ALWAYS:
            P.append(c.phi)
            counter.tick()
        elif c.kind is K.SOMETIME:
            E.append(_eff(c.phi, monitors.hold_of(c)))
            counter.tick()
        elif c.kind is K.AT_MOST_ONCE:
            seen, prevent = monitors.seen_of(c.phi), monitors.prevent_of(c.phi)
            E.append(_eff(c.phi, seen))
            E.append(_eff(And((Not(c.phi), seen)), prevent))
            P.append(Not(And((c.phi, prevent))))
            counter.tick(3)
        elif c.kind is K.SOMETIME_BEFORE:
            seen = monitors.seen_of(c.psi)
            E.append(_eff(c.psi, seen))
            P.append(Implies(c.phi, seen))
            counter.tick(2)
        elif c.kind is K.SOMETIME_AFTER:
            hold = monitors.hold_of(c)
            E.append(_eff(And((c.phi, Not(c.psi))), hold, False))
            E.append(_eff(c.psi, hold))
            counter.tick(2)
    pres, keys = [], set()
    for p in map(simplify, P):
        k = canonical_key(p)
        if p != TOP and k not in keys:
            keys.add(k)
            pres.append(p)
    effs = []
    for e in E:
        e = ConditionalEffect((), simplify(e.condition), e.literal)
        if e.condition != BOTTOM and e not in effs:
            effs.append(e)
    return pres, effs


def compile_lcc(domain: DomainDef, problem: ProblemDef, counter: OpCounter = None) -> CompiledTask:
    """Compile constraints away without regression; adds exactly one action."""
    t0 = time.perf_counter()
    counter = counter or OpCounter()
    stats = input_stats('lcc', domain, problem)
    bad = check_initially_violated(domain, problem)
    if bad is not None:
        log.warning('constraint %s is violated in the initial state; the compiled problem has no plan', bad)
    constraints = constraint_hygiene(problem.constraints, domain.actions)
    monitors = mint(constraints, prevent=True, end=True)
    check_no_collision(domain, monitors)
    P, E = compile_c(constraints, monitors, counter)
    not_end = Not(monitors.end)
    # P, E and the guard are built once and shared by reference across actions
    actions = []
    for a in domain.actions:
        counter.tick()
        actions.append(ActionSchema(a.name, a.params, simplify(conj(a.precondition, *P, not_end)),
                                    a.effects + tuple(E)))
    fin_name = 'fin' if 'fin' not in domain.action_map else fresh_name('fin', set(domain.action_map))
    fin = ActionSchema(fin_name, (), simplify(conj(*P, not_end)),
                       tuple(E) + (_eff(TOP, monitors.end),))
    counter.tick()
    actions.append(fin)
    sa_holds = {monitors.hold_of(c) for c in constraints if c.kind is K.SOMETIME_AFTER}
    init = frozenset(problem.init) | sa_holds
    holds_ = [monitors.hold[c.index] for c in constraints if c.index in monitors.hold]
    goal = simplify(conj(problem.goal, *holds_, monitors.end))
    d = domain.with_actions(actions, predicates=tuple(domain.predicates) + tuple(monitors.predicates()),
                            requirements=tuple(r for r in domain.requirements if r != ':constraints'))
    p = ProblemDef(problem.name, d.name, problem.objects, init, goal, ())
    d, p = promote_constants(d, p)
    stats.n_actions_out = len(actions)
    stats.n_effect_items_out = sum(len(a.effects) for a in actions)
    stats.n_preconds_added = len(P) * len(actions)
    stats.n_monitoring_atoms = len(monitors.order)
    stats.op_count = counter.ops
    stats.wall_time_seconds = time.perf_counter() - t0
    return CompiledTask(d, p, 'lcc', stats, unsolvable=None,
                        monitors={m.predicate: 'monitor' for m in monitors.order})
