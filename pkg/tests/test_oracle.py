import pytest

from pddl3lift import parse_problem
from pddl3lift.fixtures import FIXTURES, blocksworld2_domain, load
from pddl3lift.grounding import ground
from pddl3lift.logic import TOP
from pddl3lift.model import ActionSchema, Universe
from pddl3lift.oracle import check_compiler_equivalence, check_regression_exhaustive, enumerate_valid_plans, sample_formulas
from pddl3lift.oracle.fastmodel import herbrand_base
from pddl3lift.oracle.fuzz import fuzz_case
from pddl3lift.oracle.mutants import drop_persistence
from pddl3lift.parser import PlanStep
from pddl3lift.semantics import apply, applicable, validate_plan
from pddl3lift.stats import MODES

from conftest import formula

TWO = {'b1': 'block', 'b2': 'block'}


def naive_valid_plans(domain, problem, k):
    """Depth-first search over ground actions that validates every candidate with the reference validator."""
    gp = ground(domain, problem)
    u = problem.universe(domain)
    out = set()

    def walk(s, prefix):
        steps = [PlanStep(g.name, tuple(c.name for c in g.args)) for g in prefix]
        if validate_plan(domain, problem, steps).valid:
            out.add(tuple(str(g) for g in prefix))
        if len(prefix) == k:
            return
        for g in gp.actions:
            if applicable(s, g, u):
                walk(apply(s, g, u), prefix + [g])

    walk(frozenset(problem.init), [])
    return out


def _two_block(constraints='', goal='(handEmpty)'):
    d = blocksworld2_domain()
    src = ('(define (problem two) (:domain blocksworld2) (:objects b1 b2 - block) '
           '(:init (onTable b1) (on b2 b1) (clear b2) (towerBase b1) (handEmpty)) '
           f'(:goal {goal}) {constraints})')
    return d, parse_problem(src, d)


def test_empty_plan_when_goal_holds():
    d, p = _two_block()
    assert enumerate_valid_plans(d, p, 0).plans == {()}


def test_initially_violated_always_gives_no_plans():
    d, p = _two_block('(:constraints (always (holding b1)))')
    assert len(enumerate_valid_plans(d, p, 4)) == 0


def test_two_block_enumeration_matches_naive():
    d, p = _two_block(goal='(holding b1)')
    fast = enumerate_valid_plans(d, p, 4)
    assert len(fast) > 0
    assert fast.plans == naive_valid_plans(d, p, 4)


@pytest.mark.parametrize('key', sorted(FIXTURES))
def test_fixture_enumeration_matches_naive(key):
    d, p = load(key)
    assert enumerate_valid_plans(d, p, 3).plans == naive_valid_plans(d, p, 3)


@pytest.mark.parametrize('seed', range(25))
def test_fuzz_enumeration_matches_naive(seed):
    case = fuzz_case(seed)
    assert enumerate_valid_plans(case.domain, case.problem, 3).plans == naive_valid_plans(
        case.domain, case.problem, 3)


def test_regression_check_effect_free_action():
    d = blocksworld2_domain()
    idle = ActionSchema('idle', (), TOP, ())
    u = Universe(TWO, d.types)
    rep = check_regression_exhaustive(d.with_actions([idle]), u, sample_formulas(d, u, 20))
    assert rep.ok and rep.instances_checked == 1


def test_regression_check_putdown2_two_blocks():
    d = blocksworld2_domain()
    u = Universe(TWO, d.types)
    rep = check_regression_exhaustive(d.with_actions([d.action('putdown2')]), u, [formula('(onTable b1)')])
    assert rep.ok and rep.states == 2 ** 13


def test_regression_check_detects_dropped_persistence():
    d = blocksworld2_domain()
    u = Universe(TWO, d.types)
    rep = check_regression_exhaustive(d, u, sample_formulas(d, u, 10), regress=lambda f, a: drop_persistence(f, a, d.types))
    assert not rep.ok and rep.counterexamples


@pytest.mark.parametrize('mode', MODES)
def test_unconstrained_equivalence(mode):
    d, p = load('bw2-plain')
    rep = check_compiler_equivalence(d, p, mode, 4)
    assert rep.ok and rep.n_original > 0, rep.summary()


@pytest.mark.parametrize('mode', ['lifted-tcore', 'lcc'])
def test_mixed_equivalence(mode):
    d, p = load('bw2-mixed')
    rep = check_compiler_equivalence(d, p, mode, 4)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize('seed', range(30))
def test_negative_suite(seed):
    case = fuzz_case(seed, negative=True)
    d, p = case.domain, case.problem
    original = enumerate_valid_plans(d, p, 3)
    assert len(original) == 0
    for mode in MODES:
        rep = check_compiler_equivalence(d, p, mode, 3, original=original)
        assert rep.ok, rep.summary()
        assert rep.n_compiled == 0
        if mode != 'lcc':
            assert rep.unsolvable_detected


def test_fuzz_cases_are_small_and_valid():
    for seed in range(100):
        case = fuzz_case(seed)
        d = case.domain
        assert len(d.predicates) <= 3 and max(p.arity for p in d.predicates) <= 2
        assert 1 <= len(d.actions) <= 3
        assert all(len(a.params) <= 2 and len(a.effects) <= 3 for a in d.actions)
        assert len(case.problem.objects) <= 4 and len(case.problem.constraints) <= 3
        assert 1 <= len(herbrand_base(d, case.problem.universe(d))) <= 12
