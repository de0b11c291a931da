import random

import pytest

from pddl3lift import ConstraintKind, PlanStep, parse_domain, parse_problem
from pddl3lift.errors import InapplicableActionError
from pddl3lift.fixtures import blocksworld2_domain, load, plan, text
from pddl3lift.logic import TOP, Atom, Constant, Literal
from pddl3lift.model import ActionSchema, ConditionalEffect, Constraint, TypeHierarchy, Universe
from pddl3lift.semantics import (
    FailureKind, applicable, apply, check_sequence, holds, instantiate, satisfies_constraint, trajectory,
    validate_plan,
)

from conftest import BLOCKS5, formula

K = ConstraintKind
U5 = Universe(BLOCKS5, TypeHierarchy({'block': 'object'}))


def A(pred, *args):
    return Atom(pred, tuple(Constant(a, 'block') for a in args))


def test_holds_examples():
    assert holds(frozenset({A('ontable', 'b1')}), formula('(onTable b1)'), U5)
    assert holds(frozenset({A('on', 'b2', 'b3')}), formula('(exists (?topb - block) (on ?topb b3))'), U5)
    assert holds(frozenset(), formula('(forall (?x - block) (not (onTable ?x)))'), U5)
    assert not holds(frozenset(), formula('(exists (?x - block) (onTable ?x))'), U5)
    assert holds(frozenset(), formula('(not (= b1 b2))'), U5)


def test_applicable_and_apply_putdown2():
    d = parse_domain(text('putdown2-domain.pddl'))
    g = instantiate(d.action('putdown2'), [Constant('b1', 'block')], U5)
    s = frozenset({A('holding', 'b1')})
    assert applicable(s, g, U5)
    assert not applicable(frozenset(), g, U5)
    assert apply(s, g, U5) == {A('handempty'), A('ontable', 'b1'), A('clear', 'b1')}
    with pytest.raises(InapplicableActionError):
        apply(frozenset(), g, U5)


def test_apply_no_triggered_effects_and_add_wins():
    p = Atom('p')
    noop = instantiate(ActionSchema('noop', (), TOP, (ConditionalEffect((), formula('(handEmpty)'), Literal(p)),)),
                       [], U5)
    s = frozenset({A('ontable', 'b1')})
    assert apply(s, noop, U5) == s
    both = instantiate(ActionSchema('both', (), TOP, (ConditionalEffect((), TOP, Literal(p, False)),
                                                      ConditionalEffect((), TOP, Literal(p, True)))), [], U5)
    assert p in apply(frozenset({p}), both, U5)
    assert p in apply(frozenset(), both, U5)


def test_conditions_read_pre_state():
    p, q = Atom('p'), Atom('q')
    a = ActionSchema('a', (), TOP, (ConditionalEffect((), TOP, Literal(p, False)),
                                    ConditionalEffect((), p, Literal(q, True))))
    assert apply(frozenset({p}), instantiate(a, [], U5), U5) == {q}


def test_trajectory_examples():
    d, p = load('ricochet')
    assert trajectory(d, p, []) == [frozenset(p.init)]
    sigma = trajectory(d, p, plan('ricochet'))
    assert len(sigma) == 3
    with pytest.raises(InapplicableActionError) as err:
        trajectory(d, p, [PlanStep('slide', ('r', 'c1', 'c2')), PlanStep('slide', ('r', 'c1', 'c2'))])
    assert err.value.index == 1


def test_constraint_examples():
    assert check_sequence(K.AT_MOST_ONCE, [True, False, True]) == (False, (0, 2))
    assert check_sequence(K.SOMETIME_BEFORE, [False, False, True], [False, True, False])[0]
    assert not check_sequence(K.SOMETIME_BEFORE, [True, False], [True, True])[0]
    assert check_sequence(K.SOMETIME_AFTER, [True], [True])[0]
    assert not check_sequence(K.SOMETIME_AFTER, [False, True, False], [True, False, False])[0]


def _bw2_plain_with(constraint):
    d = blocksworld2_domain()
    src = text('bw2-unconstrained-problem.pddl').rstrip().rstrip(')')
    return d, parse_problem(src + f'(:constraints {constraint}))', d)


def test_validate_plan_examples():
    d, p = load('bw2-plain')
    pi = plan('bw2-plain')
    assert validate_plan(d, p, pi).valid
    d, p = _bw2_plain_with('(always (not (on b2 b3)))')
    v = validate_plan(d, p, pi)
    assert not v.valid and v.kind is FailureKind.CONSTRAINT and v.witness == (2,)
    v = validate_plan(d, p, [PlanStep('stack2', ('b2', 'b3'))])
    assert v.kind is FailureKind.INAPPLICABLE and v.index == 0
    v = validate_plan(d, p, pi[:1])
    assert v.kind is FailureKind.GOAL
    assert 'valid' == str(validate_plan(*load('bw2-mixed'), plan('bw2-mixed')))


# --- independent reference evaluator, coded straight from the definitions

def reference(kind, phi, psi):
    n = len(phi)
    idx = range(n)
    if kind is K.ALWAYS:
        return all(phi[i] for i in idx)
    if kind is K.SOMETIME:
        return any(phi[i] for i in idx)
    if kind is K.AT_MOST_ONCE:
        # at most one maximal interval: no i < j < k with phi, not phi, phi
        return not any(phi[i] and not phi[j] and phi[k] for i in idx for j in idx for k in idx if i < j < k)
    if kind is K.SOMETIME_BEFORE:
        return all(any(psi[j] for j in range(i)) for i in idx if phi[i])
    if kind is K.SOMETIME_AFTER:
        return all(any(psi[j] for j in range(i, n)) for i in idx if phi[i])
    raise ValueError(kind)


ATOMS = [Atom(f'p{i}') for i in range(4)]


def _random_trajectory(rng):
    return [frozenset(a for a in ATOMS if rng.random() < 0.5) for _ in range(rng.randint(1, 7))]


def _random_constraint(rng):
    kind = rng.choice(list(K))
    pick = lambda: rng.choice(ATOMS + [formula(f'(or (p{rng.randrange(4)}) (p{rng.randrange(4)}))',  # noqa: E731
                                                  domain=_PROP)])
    return Constraint(kind, pick(), pick() if kind.binary else None, 0)


_PROP = parse_domain('(define (domain prop) (:predicates (p0) (p1) (p2) (p3)))')
UP = Universe({}, TypeHierarchy())


def test_checker_matches_reference_on_random_trajectories():
    rng = random.Random(7)
    for _ in range(1000):
        sigma = _random_trajectory(rng)
        c = _random_constraint(rng)
        phi = [holds(s, c.phi, UP) for s in sigma]
        psi = [holds(s, c.psi, UP) for s in sigma] if c.psi is not None else None
        ok, witness = satisfies_constraint(sigma, c, UP)
        assert ok == reference(c.kind, phi, psi), (c, sigma)
        assert ok == (witness == ()) or c.kind is K.SOMETIME


def test_monotone_prefixes():
    rng = random.Random(11)
    for _ in range(300):
        sigma = _random_trajectory(rng)
        ext = sigma + _random_trajectory(rng)
        phi = rng.choice(ATOMS)
        if not satisfies_constraint(sigma, Constraint(K.ALWAYS, phi), UP)[0]:
            assert not satisfies_constraint(ext, Constraint(K.ALWAYS, phi), UP)[0]
        if satisfies_constraint(sigma, Constraint(K.SOMETIME, phi), UP)[0]:
            assert satisfies_constraint(ext, Constraint(K.SOMETIME, phi), UP)[0]


def test_frame_property_and_determinism():
    d, p = load('bw2-mixed')
    u = p.universe(d)
    s = frozenset(p.init)
    g = instantiate(d.action('pickup'), [u.constant('b2')], u)
    out = apply(s, g, u)
    touched = {lit.atom for _, lit in g.effects}
    assert {a for a in s if a not in touched} <= out
    assert apply(s, g, u) == out
    assert trajectory(d, p, plan('bw2-mixed')) == trajectory(d, p, plan('bw2-mixed'))
