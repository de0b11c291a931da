import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pddl3lift.logic import (
    BOTTOM, TOP, And, Atom, Constant, Equals, Exists, Forall, Implies, Not, Or, Substitution, Variable,
    apply_substitution, canonical, canonical_key, free_variables, simplify, to_pddl,
)
from pddl3lift.model import TypeHierarchy, Universe
from pddl3lift.semantics import holds

from conftest import formula, same

ATOMS = [Atom(f'p{i}') for i in range(8)]
C = {n: Constant(n, 'object') for n in ('c1', 'c2')}


def random_prop(rng, depth=4):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return rng.choice((TOP, BOTTOM))
        if r < 0.15:
            return Equals(rng.choice(list(C.values())), rng.choice(list(C.values())))
        return rng.choice(ATOMS)
    op = rng.choice(('not', 'and', 'or', 'imply', 'and', 'or'))
    if op == 'not':
        return Not(random_prop(rng, depth - 1))
    if op == 'imply':
        return Implies(random_prop(rng, depth - 1), random_prop(rng, depth - 1))
    kids = tuple(random_prop(rng, depth - 1) for _ in range(rng.randint(1, 3)))
    return (And if op == 'and' else Or)(kids)


prop_strategy = st.integers(0, 2**32 - 1).map(lambda s: random_prop(random.Random(s)))
UNIV = Universe({'c1': 'object', 'c2': 'object'}, TypeHierarchy())


def truth_table(phi):
    return tuple(holds(frozenset(a for a, b in zip(ATOMS, bits) if b), phi, UNIV)
                 for bits in itertools.product((0, 1), repeat=len(ATOMS)))


@settings(max_examples=150, deadline=None)
@given(prop_strategy)
def test_simplify_preserves_truth_table(phi):
    assert truth_table(simplify(phi)) == truth_table(phi)


@settings(max_examples=300, deadline=None)
@given(prop_strategy)
def test_simplify_idempotent(phi):
    once = simplify(phi)
    assert simplify(once) == once
    assert canonical(canonical(phi)) == canonical(phi)


def test_simplify_examples():
    b = Variable('b', 'block')
    b1 = Constant('b1', 'block')
    lhs = Or((Equals(b, b1), And((Atom('ontable', (b1,)), Not(BOTTOM)))))
    assert simplify(lhs) == Or((Equals(b, b1), Atom('ontable', (b1,))))
    phi = Atom('p')
    assert simplify(Or((BOTTOM, phi))) == phi
    seen = Atom('__seen_0')
    assert simplify(And((seen, Not(phi), phi))) == BOTTOM
    assert simplify(And(())) == TOP and simplify(Or(())) == BOTTOM


def test_simplify_folds_equalities_and_vacuous_quantifiers():
    x = Variable('x', 'object')
    assert simplify(Equals(C['c1'], C['c2'])) == BOTTOM
    assert simplify(Equals(x, x)) == TOP
    assert simplify(Exists((x,), Atom('p0'))) == Atom('p0')
    assert simplify(Forall((x,), Atom('q', (x,)))) == Forall((x,), Atom('q', (x,)))


def test_canonical_key_ignores_child_order():
    a, b, c = ATOMS[:3]
    assert canonical_key(Or((a, And((b, c))))) == canonical_key(Or((And((c, b)), a)))
    assert canonical_key(Or((a, b))) != canonical_key(And((a, b)))


def test_free_variables():
    assert free_variables(formula('(exists (?topb - block) (on ?topb b3))')) == frozenset()
    x = Variable('x', 'block')
    y = Variable('y', 'block')
    assert free_variables(formula('(on ?x b3)', x='block')) == {x}
    assert free_variables(formula('(forall (?x - block) (on ?x ?y))', y='block')) == {y}


def test_substitution_examples():
    b = Variable('b', 'block')
    b1 = Constant('b1', 'block')
    assert apply_substitution(Atom('ontable', (b,)), {b: b1}) == Atom('ontable', (b1,))
    phi = formula('(and (on ?b b1) (exists (?t - block) (on ?t ?b)))', b='block')
    assert apply_substitution(phi, {}) == phi
    topb = Variable('topb', 'block')
    ex = formula('(exists (?topb - block) (on ?topb ?b))', b='block')
    out = apply_substitution(ex, {topb: Constant('b9', 'block'), b: Constant('b3', 'block')})
    assert out == formula('(exists (?topb - block) (on ?topb b3))')
    assert free_variables(out) == frozenset()


def test_substitution_distributes_over_connectives(rng):
    x, y = Variable('x', 'object'), Variable('y', 'object')
    theta = {x: C['c1'], y: x}
    parts = [Atom('q', (x, y)), Not(Atom('q', (y, x))), Equals(x, y)]
    sub = lambda f: apply_substitution(f, theta)  # noqa: E731
    for cls in (And, Or):
        assert sub(cls(tuple(parts))) == cls(tuple(map(sub, parts)))
    assert sub(Implies(parts[0], parts[1])) == Implies(sub(parts[0]), sub(parts[1]))
    z = Variable('z', 'object')
    body = Atom('q', (z, x))
    assert sub(Forall((z,), body)) == Forall((z,), sub(body))
    assert sub(Exists((z,), body)) == Exists((z,), sub(body))


def test_substitution_closure_is_idempotent():
    x, y, z = (Variable(n, 'object') for n in 'xyz')
    theta = Substitution({x: y, y: z, z: C['c1']}).closure()
    phi = Atom('q', (x, y))
    assert apply_substitution(apply_substitution(phi, theta), theta) == apply_substitution(phi, theta)


def test_substitution_type_check():
    types = TypeHierarchy({'block': 'object', 'ball': 'object'})
    with pytest.raises(Exception):
        Substitution({Variable('b', 'block'): Constant('o', 'ball')}, types)


def test_to_pddl_truth_values():
    assert to_pddl(TOP) == '(and)' and to_pddl(BOTTOM) == '(or)'
    assert same(formula('(and)'), TOP)
