"""Blocksworld2 worked examples as (label, got, expected) triples.

Comparison is structural after simplification and canonical ordering.
"""

from pddl3lift import Variable
from pddl3lift.fixtures import blocksworld2_domain, load
from pddl3lift.lcc import compile_c, compile_lcc
from pddl3lift.logic import TOP, Atom, Constant, Implies, Literal, Not, canonical_key, conj, simplify
from pddl3lift.monitors import mint
from pddl3lift.regression import (
    is_regression_trivial, lifted_gamma, lifted_regression, mgu, weakest_condition,
)
from pddl3lift.tcore import compile_c_regression, compile_lifted_tcore, constraint_hygiene

from conftest import formula, same

B = Variable('b', 'block')


def _lit(text, positive=True, **scope):
    return Literal(formula(text, **scope), positive)


def _effect(action, literal_text):
    return next(e for e in action.effects if str(e.literal) == literal_text)


def regression_examples():
    d = blocksworld2_domain()
    put = d.action('putdown2')
    out = []
    u = mgu(_lit('(onTable b1)'), _lit('(onTable ?b)', b='block'), d.types)
    out.append(('mgu onTable(b1) onTable(?b)', dict(u.substitution), {B: Constant('b1', 'block')}))
    out.append(('mgu identity', dict(mgu(_lit('(clear ?x)', x='block'), _lit('(clear ?x)', x='block')).substitution),
                {}))
    out.append(('mgu predicate mismatch', mgu(_lit('(onTable b1)'), _lit('(holding ?b)', b='block')), None))

    def w(l, eff):
        return weakest_condition(l, _effect(put, eff), d.types)

    out.append(('w onTable(b1)', w(_lit('(onTable b1)'), '(ontable ?b)'), formula('(= ?b b1)', b='block')))
    out.append(('w clear(b5) when', w(_lit('(clear b5)'), '(clear ?b)'),
                formula('(and (not (towerBase ?b)) (= ?b b5))', b='block')))
    out.append(('w clear(b5) forall', w(_lit('(clear b5)'), '(clear ?topb)'), formula('(on b5 ?b)', b='block')))

    def gamma(text, positive=True):
        return lifted_gamma(_lit(text, positive), put, d.types)

    out.append(('gamma onTable(b1)', gamma('(onTable b1)'), formula('(= ?b b1)', b='block')))
    out.append(('gamma clear(b5)', gamma('(clear b5)'),
                formula('(or (and (not (towerBase ?b)) (= ?b b5)) (on b5 ?b))', b='block')))
    out.append(('gamma not onTable(b1)', gamma('(onTable b1)', False), formula('(or)')))

    def R(text):
        return lifted_regression(formula(text), put, d.types)

    out.append(('R onTable(b1)', R('(onTable b1)'), formula('(or (= ?b b1) (onTable b1))', b='block')))
    out.append(('R clear(b5)', R('(clear b5)'),
                formula('(or (on b5 ?b) (clear b5) (and (not (towerBase ?b)) (= ?b b5)))', b='block')))
    psi = formula('(exists (?topb - block) (on ?topb b3))')
    out.append(('R psi', R('(exists (?topb - block) (on ?topb b3))'), psi))
    out.append(('trivial psi', is_regression_trivial(psi, put, d.types), True))
    out.append(('trivial onTable(b1)', is_regression_trivial(formula('(onTable b1)'), put, d.types), False))
    return out


def tcore_putdown2_items():
    """LiftedTCORE items for putdown2 against the three constraints."""
    d, p = load('bw2-mixed')
    put = d.action('putdown2')
    cons = constraint_hygiene(p.constraints, d.actions)
    m = mint(cons)
    P, E = compile_c_regression(put, cons, m, lambda f, a: lifted_regression(f, a, d.types),
                                lambda f, a: is_regression_trivial(f, a, d.types))
    r_clear = formula('(or (on b5 ?b) (clear b5) (and (not (towerBase ?b)) (= ?b b5)))', b='block')
    r_table = formula('(or (= ?b b1) (onTable b1))', b='block')
    hold, seen_phi, seen_psi = Atom('__hold_0'), Atom('__seen_0'), Atom('__seen_1')
    want_P = [simplify(conj(Not(conj(seen_phi, Not(formula('(onTable b1)')), r_table)))),
              simplify(Implies(r_clear, seen_psi))]
    want_E = [(r_clear, hold), (r_table, seen_phi)]
    task = compile_lifted_tcore(d, p)
    cput = task.domain.action('putdown2')
    out = [
        ('tcore P', _key_set(P), _key_set(want_P)),
        ('tcore E', _eff_set(E), _eff_set_raw(want_E)),
        ('tcore seen_psi effect omitted', any(e.literal.atom == seen_psi for e in E), False),
        ('tcore compiled putdown2 effects', cput.effects[:len(put.effects)], put.effects),
        ('tcore compiled putdown2 precondition', _key(cput.precondition),
         _key(simplify(conj(put.precondition, *want_P)))),
        ('tcore action count', len(task.domain.actions), len(d.actions)),
        ('tcore goal', _key(task.problem.goal), _key(simplify(conj(p.goal, hold)))),
    ]
    return out


def lcc_items():
    d, p = load('bw2-mixed')
    cons = constraint_hygiene(p.constraints, d.actions)
    m = mint(cons, prevent=True, end=True)
    P, E = compile_c(cons, m)
    hold, seen_phi, prevent, seen_psi = (Atom(n) for n in ('__hold_0', '__seen_0', '__prevent_0', '__seen_1'))
    clear_b5, on_b1 = formula('(clear b5)'), formula('(onTable b1)')
    psi = formula('(exists (?topb - block) (on ?topb b3))')
    want_P = [Implies(clear_b5, seen_psi), Not(conj(on_b1, prevent))]
    want_E = [(clear_b5, hold), (psi, seen_psi), (on_b1, seen_phi), (conj(Not(on_b1), seen_phi), prevent)]
    task = compile_lcc(d, p)
    fin = task.domain.actions[-1]
    end = Atom('__end')
    return [
        ('lcc P', _key_set(P), _key_set(want_P)),
        ('lcc E', _eff_set(E), _eff_set_raw(want_E)),
        ('lcc fin name', fin.name, 'fin'),
        ('lcc fin precondition', _key(fin.precondition), _key(simplify(conj(*want_P, Not(end))))),
        ('lcc fin effects', _eff_set(fin.effects), _eff_set_raw(want_E + [(TOP, end)])),
        ('lcc every action carries P and E', all(
            _eff_set(a.effects[len(d.action(a.name).effects):]) == _eff_set_raw(want_E)
            and _key(a.precondition) == _key(simplify(conj(d.action(a.name).precondition, *want_P, Not(end))))
            for a in task.domain.actions[:-1]), True),
    ]


def _key(f):
    return canonical_key(simplify(f))


def _key_set(fs):
    return sorted(_key(f) for f in fs)


def _eff_set(effs):
    return sorted((_key(e.condition), str(e.literal)) for e in effs)


def _eff_set_raw(pairs):
    return sorted((_key(c), str(Literal(a))) for c, a in pairs)


def all_examples():
    return regression_examples() + tcore_putdown2_items() + lcc_items()


def check(label, got, want):
    if isinstance(want, bool) or want is None or isinstance(want, (dict, list, tuple, int, str)):
        return got == want
    return same(got, want)
