import random

import pytest

from pddl3lift import Variable, parse_formula
from pddl3lift.fixtures import blocksworld2_domain, blocksworld2_problem, load
from pddl3lift.logic import And, Exists, Forall, Implies, Not, Or, apply_substitution, canonical_key, simplify

BLOCKS5 = {f'b{i}': 'block' for i in range(1, 6)}


@pytest.fixture(scope='session')
def bw2():
    return blocksworld2_domain()


@pytest.fixture
def rng():
    return random.Random(1234)


def formula(text, domain=None, objects=BLOCKS5, **scope):
    """Parse ``text`` against Blocksworld2; keyword args declare free variables by type."""
    domain = domain or blocksworld2_domain()
    return parse_formula(text, domain, objects, scope={k: Variable(k, t) for k, t in scope.items()})


def alpha_normal(phi, depth=0):
    """Rename bound variables after their nesting depth so alpha-variants coincide."""
    if isinstance(phi, Not):
        return Not(alpha_normal(phi.arg, depth))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(alpha_normal(a, depth) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(alpha_normal(phi.lhs, depth), alpha_normal(phi.rhs, depth))
    if isinstance(phi, (Forall, Exists)):
        ren = {v: Variable(f'_{depth}_{i}', v.type) for i, v in enumerate(phi.vars)}
        body = apply_substitution(phi.body, ren)
        return type(phi)(tuple(ren[v] for v in phi.vars), alpha_normal(body, depth + 1))
    return phi


def same(a, b) -> bool:
    """Structural equality after simplification, up to child order and bound-variable names."""
    return canonical_key(alpha_normal(simplify(a))) == canonical_key(alpha_normal(simplify(b)))


__all__ = ['formula', 'same', 'BLOCKS5', 'load', 'blocksworld2_problem']
