"""Bundled PDDL fixtures and a Blocksworld2 instance generator."""

from __future__ import annotations

from importlib import resources
from typing import List, Optional, Sequence, Tuple

from ..model import DomainDef, ProblemDef
from ..parser import PlanStep, parse_domain, parse_plan, parse_problem

# (domain file, problem file, plan file or None)
FIXTURES = {
    'bw2-mixed': ('blocksworld2-domain.pddl', 'bw2-mixed-problem.pddl', 'bw2-mixed.plan'),
    'bw2-plain': ('blocksworld2-domain.pddl', 'bw2-unconstrained-problem.pddl', 'bw2-plain.plan'),
    'bw2-always-sa': ('blocksworld2-domain.pddl', 'bw2-always-sa-problem.pddl', None),
    'bw2-two': ('blocksworld2-domain.pddl', 'bw2-two-problem.pddl', None),
    'ricochet': ('ricochet-domain.pddl', 'ricochet-problem.pddl', 'ricochet.plan'),
}


def text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text()


def path(name: str):
    return resources.files(__package__).joinpath(name)


def load(key: str) -> Tuple[DomainDef, ProblemDef]:
    dom_file, prob_file, _ = FIXTURES[key]
    domain = parse_domain(text(dom_file))
    return domain, parse_problem(text(prob_file), domain)


def plan(key: str) -> List[PlanStep]:
    plan_file = FIXTURES[key][2]
    if plan_file is None:
        raise KeyError(f'fixture {key} has no plan')
    return parse_plan(text(plan_file))


def blocksworld2_domain() -> DomainDef:
    return parse_domain(text('blocksworld2-domain.pddl'))


def blocksworld2_problem_text(n: int, constraints: Optional[Sequence[str]] = None, goal: Optional[str] = None) -> str:
    """n blocks on the table; default goal stacks b2 on b1."""
    blocks = [f'b{i}' for i in range(1, n + 1)]
    init = ' '.join(f'(onTable {b}) (clear {b})' for b in blocks)
    goal = goal or '(on b2 b1)'
    cons = ''
    if constraints:
        cons = '\n  (:constraints (and ' + ' '.join(constraints) + '))'
    return (f'(define (problem bw2-{n})\n  (:domain blocksworld2)\n'
            f'  (:objects {" ".join(blocks)} - block)\n'
            f'  (:init {init} (handEmpty))\n  (:goal {goal}){cons}\n)\n')


def blocksworld2_problem(n: int, constraints: Optional[Sequence[str]] = None, goal: Optional[str] = None,
                         domain: Optional[DomainDef] = None) -> Tuple[DomainDef, ProblemDef]:
    domain = domain or blocksworld2_domain()
    return domain, parse_problem(blocksworld2_problem_text(n, constraints, goal), domain)
