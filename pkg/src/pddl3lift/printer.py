"""PDDL writer.  Output re-parses to an equal domain/problem."""

from __future__ import annotations

from typing import Dict, List, Mapping

from .logic import TOP, Formula, to_pddl
from .model import ROOT_TYPE, ActionSchema, ConditionalEffect, Constraint, DomainDef, ProblemDef

__all__ = ['domain_to_pddl', 'problem_to_pddl', 'action_to_pddl', 'effect_to_pddl', 'constraint_to_pddl',
           'formula_to_pddl']

formula_to_pddl = to_pddl


def effect_to_pddl(eff: ConditionalEffect) -> str:
    out = to_pddl(eff.literal.as_formula())
    if eff.condition != TOP:
        out = f'(when {to_pddl(eff.condition)} {out})'
    if eff.z_vars:
        zs = ' '.join(f'?{z.name} - {z.type}' for z in eff.z_vars)
        out = f'(forall ({zs}) {out})'
    return out


def constraint_to_pddl(c: Constraint) -> str:
    return '(' + ' '.join([c.kind.value] + [to_pddl(f) for f in c.formulas]) + ')'


def _typed_names(pairs: Mapping[str, str]) -> str:
    groups: Dict[str, List[str]] = {}
    for n, t in pairs.items():
        groups.setdefault(t, []).append(n)
    return ' '.join(' '.join(ns) + f' - {t}' for t, ns in groups.items())


def action_to_pddl(a: ActionSchema, indent: str = '  ') -> str:
    params = ' '.join(f'?{p.name} - {p.type}' for p in a.params)
    lines = [f'{indent}(:action {a.name}', f'{indent}  :parameters ({params})']
    if a.precondition != TOP:
        lines.append(f'{indent}  :precondition {to_pddl(a.precondition)}')
    effs = [effect_to_pddl(e) for e in a.effects]
    if len(effs) == 1:
        lines.append(f'{indent}  :effect {effs[0]}')
    else:
        lines.append(f'{indent}  :effect (and')
        lines.extend(f'{indent}    {e}' for e in effs)
        lines.append(f'{indent}  )')
    lines.append(f'{indent})')
    return '\n'.join(lines)


BASE_REQUIREMENTS = (':strips', ':typing', ':adl', ':equality', ':conditional-effects')


def _has_negation(f: Formula) -> bool:
    return '(not ' in to_pddl(f)


def _requirements(d: DomainDef) -> List[str]:
    reqs = list(BASE_REQUIREMENTS)
    if any(_has_negation(a.precondition) or any(_has_negation(e.condition) for e in a.effects)
           for a in d.actions):
        reqs.append(':negative-preconditions')
    reqs.extend(r for r in d.requirements if r not in reqs)
    return reqs


def domain_to_pddl(d: DomainDef) -> str:
    reqs = _requirements(d)
    out = [f'(define (domain {d.name})', f'  (:requirements {" ".join(reqs)})']
    if d.types.parents:
        out.append(f'  (:types {_typed_names(d.types.parents)})')
    if d.constants:
        out.append(f'  (:constants {_typed_names(d.constants)})')
    out.append('  (:predicates')
    for p in d.predicates:
        params = ''.join(f' ?{v.name} - {v.type}' for v in p.params)
        out.append(f'    ({p.name}{params})')
    out.append('  )')
    for a in d.actions:
        out.append(action_to_pddl(a))
    out.append(')')
    return '\n'.join(out) + '\n'


def problem_to_pddl(p: ProblemDef) -> str:
    out = [f'(define (problem {p.name})', f'  (:domain {p.domain_name})']
    if p.objects:
        out.append(f'  (:objects {_typed_names(p.objects)})')
    out.append('  (:init')
    for a in sorted(p.init, key=to_pddl):
        out.append(f'    {to_pddl(a)}')
    out.append('  )')
    out.append(f'  (:goal {to_pddl(p.goal)})')
    if p.constraints:
        out.append('  (:constraints (and')
        out.extend(f'    {constraint_to_pddl(c)}' for c in p.constraints)
        out.append('  ))')
    out.append(')')
    return '\n'.join(out) + '\n'
