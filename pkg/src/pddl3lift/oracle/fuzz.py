"""Random small typed domains and problems for differential testing."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..logic import (
    TOP, And, Atom, Constant, Equals, Exists, Forall, Formula, Implies, Literal, Not, Or, Term, Variable,
)
from ..model import (
    ROOT_TYPE, ActionSchema, ConditionalEffect, Constraint, ConstraintKind, DomainDef, PredicateDef, ProblemDef,
    TypeHierarchy, Universe,
)
from ..parser import parse_domain, parse_problem
from ..printer import domain_to_pddl, problem_to_pddl
from ..semantics import holds
from .fastmodel import herbrand_base

MAX_ATOMS = 12
PARAM_NAMES = ('x', 'y')
Z_NAMES = ('z', 'u')
BOUND_NAMES = ('x', 'y', 'z', 'u', 'v')  # constraint formulas deliberately reuse action variable names


@dataclass
class FuzzCase:
    seed: int
    domain: DomainDef
    problem: ProblemDef
    domain_text: str
    problem_text: str


@dataclass
class _Ctx:
    rng: random.Random
    types: TypeHierarchy
    type_names: List[str]
    predicates: List[PredicateDef]
    objects: Dict[str, str]


def _random_types(rng: random.Random) -> Tuple[TypeHierarchy, List[str]]:
    r = rng.random()
    if r < 0.4:
        return TypeHierarchy(), [ROOT_TYPE]
    if r < 0.7:
        return TypeHierarchy({'ta': ROOT_TYPE, 'tb': ROOT_TYPE}), [ROOT_TYPE, 'ta', 'tb']
    return TypeHierarchy({'ta': ROOT_TYPE, 'tb': 'ta'}), [ROOT_TYPE, 'ta', 'tb']


def _random_objects(rng: random.Random, types: TypeHierarchy, names: List[str]) -> Dict[str, str]:
    n = rng.choice((2, 2, 3, 3, 3, 4))
    leafs = [t for t in names if not any(types.parents.get(u) == t for u in names if u != t)] or [ROOT_TYPE]
    objs = {}
    # every leaf type gets an object so no type is empty
    for i, t in enumerate(leafs[:n]):
        objs[f'o{i + 1}'] = t
    for i in range(len(objs), n):
        objs[f'o{i + 1}'] = rng.choice(names)
    return objs


def _term_candidates(ctx: _Ctx, slot: str, scope: Sequence[Variable], allow_objects: bool, strict: bool
                     ) -> List[Term]:
    ok = (lambda t: ctx.types.is_subtype(t, slot)) if strict else (lambda t: ctx.types.comparable(t, slot))
    out: List[Term] = [v for v in scope if ok(v.type)]
    if allow_objects:
        out += [Constant(o, t) for o, t in ctx.objects.items() if ok(t)]
    return out


def _random_atom(ctx: _Ctx, scope, allow_objects: bool) -> Formula:
    rng = ctx.rng
    preds = list(ctx.predicates)
    rng.shuffle(preds)
    for p in preds:
        args = []
        for v in p.params:
            cands = _term_candidates(ctx, v.type, scope, allow_objects, strict=rng.random() < 0.8)
            if not cands:
                break
            args.append(rng.choice(cands))
        else:
            return Atom(p.name, tuple(args))
    return TOP


def _random_atomic(ctx: _Ctx, scope, allow_objects: bool) -> Formula:
    rng = ctx.rng
    if rng.random() < 0.15:
        terms = list(scope) + ([Constant(o, t) for o, t in ctx.objects.items()] if allow_objects else [])
        if len(terms) >= 1:
            return Equals(rng.choice(terms), rng.choice(terms))
    return _random_atom(ctx, scope, allow_objects)


def _random_formula(ctx: _Ctx, scope: List[Variable], depth: int, qdepth: int, allow_objects: bool) -> Formula:
    rng = ctx.rng
    if depth <= 0 or rng.random() < 0.3:
        return _random_atomic(ctx, scope, allow_objects)
    choices = ['not', 'and', 'or', 'imply'] + (['exists', 'forall'] * 2 if qdepth > 0 else [])
    op = rng.choice(choices)
    if op == 'not':
        return Not(_random_formula(ctx, scope, depth - 1, qdepth, allow_objects))
    if op in ('and', 'or'):
        kids = tuple(_random_formula(ctx, scope, depth - 1, qdepth, allow_objects)
                     for _ in range(rng.choice((2, 2, 3))))
        return (And if op == 'and' else Or)(kids)
    if op == 'imply':
        return Implies(_random_formula(ctx, scope, depth - 1, qdepth, allow_objects),
                       _random_formula(ctx, scope, depth - 1, qdepth, allow_objects))
    taken = {v.name for v in scope}
    free_names = [n for n in BOUND_NAMES if n not in taken]
    if not free_names:
        return _random_atomic(ctx, scope, allow_objects)
    v = Variable(rng.choice(free_names), rng.choice(ctx.type_names))
    body = _random_formula(ctx, scope + [v], depth - 1, qdepth - 1, allow_objects)
    return (Exists if op == 'exists' else Forall)((v,), body)


def random_closed_formula(rng: random.Random, domain: DomainDef, universe: Universe, max_qdepth: int = 1,
                          depth: int = 3) -> Formula:
    ctx = _Ctx(rng, domain.types, domain.types.names, list(domain.predicates), dict(universe.objects))
    return _random_formula(ctx, [], depth, max_qdepth, True)


def _random_effect(ctx: _Ctx, params: List[Variable], quantified: bool) -> Optional[ConditionalEffect]:
    rng = ctx.rng
    preds = [p for p in ctx.predicates if p.params] if quantified else list(ctx.predicates)
    if not preds:
        return None
    p = rng.choice(preds)
    zs: List[Variable] = []
    if quantified:
        slot = rng.randrange(len(p.params))
        subs = [t for t in ctx.type_names if ctx.types.is_subtype(t, p.params[slot].type)]
        zs = [Variable(rng.choice(Z_NAMES), rng.choice(subs))]
    args: List[Term] = []
    for i, v in enumerate(p.params):
        if quantified and i == slot:
            args.append(zs[0])
            continue
        cands = _term_candidates(ctx, v.type, params + zs, False, strict=True)
        if not cands:
            return None
        args.append(rng.choice(cands))
    cond = TOP if rng.random() < 0.35 else _random_formula(ctx, params + zs, 2, 1, False)
    return ConditionalEffect(tuple(zs), cond, Literal(Atom(p.name, tuple(args)), rng.random() < 0.55))


def _random_schema(ctx: _Ctx, name: str) -> ActionSchema:
    rng = ctx.rng
    arity = rng.choice((0, 1, 1, 2, 2))
    params = [Variable(PARAM_NAMES[i], rng.choice(ctx.type_names)) for i in range(arity)]
    pre = TOP if rng.random() < 0.2 else _random_formula(ctx, params, 2, 1, False)
    effects: List[ConditionalEffect] = []
    q = _random_effect(ctx, params, True)
    if q is not None:
        effects.append(q)
    for _ in range(rng.choice((1, 2, 2)) if effects else rng.choice((1, 2, 3))):
        e = _random_effect(ctx, params, False)
        if e is not None:
            effects.append(e)
    rng.shuffle(effects)
    return ActionSchema(name, tuple(params), pre, tuple(effects[:3]))


def _random_constraint(ctx: _Ctx, index: int) -> Constraint:
    rng = ctx.rng
    kind = rng.choice(list(ConstraintKind))
    f = lambda: _random_formula(ctx, [], 2, 1, True)  # noqa: E731
    return Constraint(kind, f(), f() if kind.binary else None, index)


def random_domain(rng: random.Random) -> Tuple[DomainDef, Dict[str, str]]:
    types, names = _random_types(rng)
    while True:
        objects = _random_objects(rng, types, names)
        preds = []
        for i in range(rng.choice((1, 2, 2, 3, 3))):
            arity = rng.choice((0, 1, 1, 2, 2))
            preds.append(PredicateDef(f'p{i}', tuple(Variable(f'a{j}', rng.choice(names)) for j in range(arity))))
        dom = DomainDef('fuzz', types, {}, tuple(preds), ())
        n_atoms = len(herbrand_base(dom, Universe(objects, types)))
        if 1 <= n_atoms <= MAX_ATOMS and (n_atoms >= 4 or rng.random() < 0.2):
            break
    ctx = _Ctx(rng, types, names, preds, objects)
    actions = tuple(_random_schema(ctx, f'act{i}') for i in range(rng.choice((1, 2, 3, 3))))
    return DomainDef('fuzz', types, {}, tuple(preds), actions, (':adl', ':typing')), objects


def _initially_ok(dom: DomainDef, prob: ProblemDef, c: Constraint) -> bool:
    u = prob.universe(dom)
    init = frozenset(prob.init)
    if c.kind is ConstraintKind.ALWAYS:
        return holds(init, c.phi, u)
    if c.kind is ConstraintKind.SOMETIME_BEFORE:
        return not holds(init, c.phi, u)
    return True


def fuzz_case(seed: int, negative: bool = False, max_constraints: int = 3) -> FuzzCase:
    """A random domain/problem pair.

    Positive cases pass the initial-state checks of every always and
    sometime-before constraint; with ``negative`` at least one fails them.
    """
    rng = random.Random(seed)
    dom, objects = random_domain(rng)
    ctx = _Ctx(rng, dom.types, dom.types.names, list(dom.predicates), objects)
    universe = Universe(objects, dom.types)
    base = herbrand_base(dom, universe)
    init = frozenset(a for a in base if rng.random() < 0.4)
    goal = TOP if rng.random() < 0.3 else _random_formula(ctx, [], 2, 1, True)
    prob = ProblemDef(f'fuzz-{seed}', 'fuzz', objects, init, goal, ())
    constraints: List[Constraint] = []
    want = 0 if rng.random() < 0.1 and not negative else rng.randint(1, max_constraints)
    attempts = 0
    while len(constraints) < want and attempts < 200:
        attempts += 1
        c = _random_constraint(ctx, len(constraints))
        if negative and not constraints:
            if c.kind in (ConstraintKind.ALWAYS, ConstraintKind.SOMETIME_BEFORE) and not _initially_ok(dom, prob, c):
                constraints.append(c)
            continue
        if _initially_ok(dom, prob, c):
            constraints.append(c)
    if negative and not constraints:
        # fall back to a constraint that is false initially by construction
        constraints.append(Constraint(ConstraintKind.ALWAYS, Not(TOP) if not base else
                                      (Not(base[0]) if base[0] in init else base[0]), None, 0))
    prob = ProblemDef(prob.name, 'fuzz', objects, init, goal, tuple(constraints))
    dtext, ptext = domain_to_pddl(dom), problem_to_pddl(prob)
    dom2 = parse_domain(dtext)
    prob2 = parse_problem(ptext, dom2)
    return FuzzCase(seed, dom2, prob2, dtext, ptext)
