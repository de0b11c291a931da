import logging
import random

import numpy as np
import pytest

from pddl3lift import ConstraintKind, parse_domain, parse_problem
from pddl3lift.fixtures import FIXTURES, load, plan
from pddl3lift.lcc import OpCounter, compile_c, compile_lcc
from pddl3lift.logic import TOP, Atom, Not
from pddl3lift.model import Constraint
from pddl3lift.monitors import mint
from pddl3lift.tcore import constraint_hygiene
from pddl3lift.oracle.fastmodel import BitIndex, VecStates, ground_qf, herbrand_base
from pddl3lift.oracle.fuzz import fuzz_case
from pddl3lift.semantics import apply, applicable, holds, instantiate, trajectory

from conftest import same
from worked_examples import check, lcc_items
from test_tcore import _with

K = ConstraintKind
LCC_ITEMS = lcc_items()


@pytest.mark.parametrize('label,got,want', LCC_ITEMS, ids=[e[0] for e in LCC_ITEMS])
def test_lcc_items(label, got, want):
    assert check(label, got, want), f'{label}: got {got}, expected {want}'


def test_compile_c_trivial_inputs():
    assert compile_c((), mint((), prevent=True, end=True)) == ([], [])
    c = (Constraint(K.ALWAYS, TOP, None, 0),)
    assert compile_c(c, mint(c, prevent=True, end=True)) == ([], [])


def test_unconstrained_problem():
    d, p = load('bw2-plain')
    task = compile_lcc(d, p)
    end = Atom('__end')
    assert [a.name for a in task.domain.actions] == [a.name for a in d.actions] + ['fin']
    for a, orig in zip(task.domain.actions, d.actions):
        assert a.effects == orig.effects
        assert Not(end) in a.precondition.args
    assert same(task.problem.goal, p.goal.__class__(p.goal.args + (end,)))


@pytest.mark.parametrize('key', sorted(FIXTURES))
def test_fixture_structure(key):
    d, p = load(key)
    task = compile_lcc(d, p)
    assert len(task.domain.actions) == len(d.actions) + 1
    fin = task.domain.actions[-1]
    assert fin.params == () and fin.name == 'fin'
    assert all(e.literal.atom.predicate.startswith('__') for e in fin.effects)
    preds = {pd.name for pd in task.domain.predicates}
    assert '__end' in preds
    n_ao = sum(1 for c in p.constraints if c.kind is K.AT_MOST_ONCE)
    assert len({x for x in preds if x.startswith('__prevent')}) == len(
        {str(c.phi) for c in p.constraints if c.kind is K.AT_MOST_ONCE}) <= n_ao
    sa_holds = {Atom(f'__hold_{c.index}') for c in p.constraints if c.kind is K.SOMETIME_AFTER}
    assert task.problem.init - p.init == sa_holds


def test_fin_name_avoids_clash():
    d = parse_domain('(define (domain d) (:predicates (q)) (:action fin :parameters () :effect (q)))')
    p = parse_problem('(define (problem p) (:domain d) (:init) (:goal (q)))', d)
    task = compile_lcc(d, p)
    assert task.domain.actions[-1].name not in {'fin'} and len(task.domain.actions) == 2


def test_initial_violation_only_warns(caplog):
    d, p = _with(['(always (onTable b1))'])
    with caplog.at_level(logging.WARNING):
        task = compile_lcc(d, p)
    assert task.unsolvable is None
    assert 'initial state' in caplog.text


@pytest.mark.parametrize('seed', range(40))
def test_sometime_after_effects_exclusive(seed):
    case = fuzz_case(seed)
    task = compile_lcc(case.domain, case.problem)
    fin = task.domain.actions[-1]
    u = case.problem.universe(case.domain)
    vs = VecStates(BitIndex(herbrand_base(case.domain, u)))
    for c in case.problem.constraints:
        if c.kind is not K.SOMETIME_AFTER:
            continue
        hold = Atom(f'__hold_{c.index}')
        pos = [e.condition for e in fin.effects if e.literal.atom == hold and e.literal.positive]
        neg = [e.condition for e in fin.effects if e.literal.atom == hold and not e.literal.positive]
        for a in pos:
            for b in neg:
                both = vs.eval(ground_qf(a, u)) & vs.eval(ground_qf(b, u))
                assert not np.any(both)


def _expected_monitors(c, m, history, u):
    """Monitor values after replaying ``history`` (the states s_0..s_{i-1})."""
    phi = [holds(s, c.phi, u) for s in history]
    psi = [holds(s, c.psi, u) for s in history] if c.psi is not None else None
    n = len(history)
    if c.kind is K.SOMETIME:
        return {m.hold_of(c): any(phi)}
    if c.kind is K.SOMETIME_AFTER:
        return {m.hold_of(c): all(any(psi[k] for k in range(j, n)) for j in range(n) if phi[j])}
    if c.kind is K.SOMETIME_BEFORE:
        return {m.seen_of(c.psi): any(psi)}
    if c.kind is K.AT_MOST_ONCE:
        prevent = any(not phi[k] and any(phi[:k]) for k in range(n))
        return {m.seen_of(c.phi): any(phi), m.prevent_of(c.phi): prevent}
    return {}


def _random_walk(task, rng, steps):
    d, p = task.domain, task.problem
    u = p.universe(d)
    s = frozenset(p.init)
    states = [s]
    originals = [a for a in d.actions if a.name != 'fin']
    for _ in range(steps):
        cands = [instantiate(a, args, u) for a in originals for args in u.tuples(a.params)]
        cands = [g for g in cands if applicable(s, g, u)]
        if not cands:
            break
        s = apply(s, rng.choice(cands), u)
        states.append(s)
    return states


@pytest.mark.parametrize('seed', range(40))
def test_one_step_delay(seed):
    case = fuzz_case(seed)
    task = compile_lcc(case.domain, case.problem)
    u = case.problem.universe(case.domain)
    cons = constraint_hygiene(case.problem.constraints, case.domain.actions)
    m = mint(cons, prevent=True, end=True)
    rng = random.Random(seed)
    strip = lambda s: frozenset(a for a in s if not a.predicate.startswith('__'))  # noqa: E731
    for _ in range(5):
        states = _random_walk(task, rng, 6)
        for i in range(1, len(states)):
            history = [strip(s) for s in states[:i]]
            for c in cons:
                for atom, want in _expected_monitors(c, m, history, u).items():
                    assert (atom in states[i]) == want, (seed, c, i, atom)
            assert Atom('__end') not in states[i]


def test_seen_and_prevent_delay_on_fixture():
    d, p = load('bw2-mixed')
    task = compile_lcc(d, p)
    u = p.universe(d)
    sigma = trajectory(task.domain, task.problem, plan('bw2-mixed'))
    orig = trajectory(d, p, plan('bw2-mixed'))
    ao, sb = p.constraints[1], p.constraints[2]
    for i in range(1, len(sigma)):
        hist = orig[:i]
        seen_ao = any(holds(s, ao.phi, u) for s in hist)
        seen_sb = any(holds(s, sb.psi, u) for s in hist)
        prevent = any(not holds(hist[k], ao.phi, u) and any(holds(hist[j], ao.phi, u) for j in range(k))
                      for k in range(len(hist)))
        assert (Atom('__seen_0') in sigma[i]) == seen_ao
        assert (Atom('__seen_1') in sigma[i]) == seen_sb
        assert (Atom('__prevent_0') in sigma[i]) == prevent


def test_op_counter_counts_items_and_actions():
    d, p = load('bw2-mixed')
    counter = OpCounter()
    task = compile_lcc(d, p, counter)
    # ST 1, AO 3, SB 2 items; 7 actions plus fin
    assert counter.ops == 6 + len(d.actions) + 1 == task.stats.op_count
