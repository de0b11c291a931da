"""Planning domains, problems, actions and trajectory constraints."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import UndeclaredSymbolError
from .logic import (
    TOP, Atom, Constant, Formula, Literal, Variable, constants_of, free_variables,
)

__all__ = [
    'TypeHierarchy', 'Universe', 'PredicateDef', 'ConditionalEffect', 'ActionSchema',
    'ConstraintKind', 'Constraint', 'DomainDef', 'ProblemDef', 'promote_constants',
]

ROOT_TYPE = 'object'


class TypeHierarchy:
    """Single-inheritance type tree rooted at ``object``."""

    def __init__(self, parents: Optional[Mapping[str, str]] = None):
        self.parents: Dict[str, str] = dict(parents or {})
        self.parents.pop(ROOT_TYPE, None)
        for t in list(self.parents.values()):
            if t != ROOT_TYPE and t not in self.parents:
                self.parents[t] = ROOT_TYPE
        for t in self.parents:
            seen = {t}
            p = self.parents[t]
            while p != ROOT_TYPE:
                if p in seen:
                    raise UndeclaredSymbolError(f'cyclic type hierarchy at {p}')
                seen.add(p)
                p = self.parents[p]

    def __contains__(self, t: str) -> bool:
        return t == ROOT_TYPE or t in self.parents

    def __eq__(self, other):
        return isinstance(other, TypeHierarchy) and self.parents == other.parents

    def __repr__(self):
        return f'TypeHierarchy({self.parents!r})'

    @property
    def names(self) -> List[str]:
        return [ROOT_TYPE] + list(self.parents)

    def ancestors(self, t: str) -> List[str]:
        out = [t]
        while t != ROOT_TYPE:
            t = self.parents.get(t, ROOT_TYPE)
            out.append(t)
        return out

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup == ROOT_TYPE or sup in self.ancestors(sub)

    def comparable(self, a: str, b: str) -> bool:
        return self.is_subtype(a, b) or self.is_subtype(b, a)


class Universe:
    """The finite set of objects of a problem together with their types."""

    def __init__(self, objects: Mapping[str, str], types: TypeHierarchy):
        self.objects: Dict[str, str] = dict(objects)
        self.types = types
        self._by_type: Dict[str, Tuple[Constant, ...]] = {}

    def of_type(self, t: str) -> Tuple[Constant, ...]:
        got = self._by_type.get(t)
        if got is None:
            got = tuple(Constant(n, ty) for n, ty in self.objects.items() if self.types.is_subtype(ty, t))
            self._by_type[t] = got
        return got

    def constant(self, name: str) -> Constant:
        try:
            return Constant(name, self.objects[name])
        except KeyError:
            raise UndeclaredSymbolError(f'undeclared object {name}') from None

    def tuples(self, variables: Sequence[Variable]) -> Iterator[Tuple[Constant, ...]]:
        return itertools.product(*(self.of_type(v.type) for v in variables))

    def count(self, variables: Sequence[Variable]) -> int:
        n = 1
        for v in variables:
            n *= len(self.of_type(v.type))
        return n


@dataclass(frozen=True)
class PredicateDef:
    name: str
    params: Tuple[Variable, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ConditionalEffect:
    """``forall z: condition |> literal``."""

    z_vars: Tuple[Variable, ...]
    condition: Formula
    literal: Literal

    @property
    def positive(self) -> bool:
        return self.literal.positive

    def __str__(self) -> str:
        from .printer import effect_to_pddl
        return effect_to_pddl(self)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: Tuple[Variable, ...]
    precondition: Formula = TOP
    effects: Tuple[ConditionalEffect, ...] = ()

    @property
    def add_effects(self) -> Tuple[ConditionalEffect, ...]:
        return tuple(e for e in self.effects if e.positive)

    @property
    def del_effects(self) -> Tuple[ConditionalEffect, ...]:
        return tuple(e for e in self.effects if not e.positive)

    def check(self) -> None:
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise UndeclaredSymbolError(f'action {self.name}: duplicate parameter names')
        extra = free_variables(self.precondition) - set(self.params)
        if extra:
            raise UndeclaredSymbolError(f'action {self.name}: unbound variables {sorted(map(str, extra))} in precondition')
        for eff in self.effects:
            scope = set(self.params) | set(eff.z_vars)
            extra = (free_variables(eff.condition) | free_variables(eff.literal)) - scope
            if extra:
                raise UndeclaredSymbolError(f'action {self.name}: unbound variables {sorted(map(str, extra))} in effect')


class ConstraintKind(enum.Enum):
    ALWAYS = 'always'
    SOMETIME = 'sometime'
    AT_MOST_ONCE = 'at-most-once'
    SOMETIME_BEFORE = 'sometime-before'
    SOMETIME_AFTER = 'sometime-after'

    @property
    def binary(self) -> bool:
        return self in (ConstraintKind.SOMETIME_BEFORE, ConstraintKind.SOMETIME_AFTER)

    @property
    def short(self) -> str:
        return {'always': 'A', 'sometime': 'ST', 'at-most-once': 'AO',
                'sometime-before': 'SB', 'sometime-after': 'SA'}[self.value]


@dataclass(frozen=True)
class Constraint:
    """A qualitative state-trajectory constraint.

    For ``sometime-before`` and ``sometime-after``, ``phi`` is the trigger
    and ``psi`` the condition required before (resp. at or after) it.
    """

    kind: ConstraintKind
    phi: Formula
    psi: Optional[Formula] = None
    index: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind.binary != (self.psi is not None):
            raise ValueError(f'{self.kind.value} takes {2 if self.kind.binary else 1} formula arguments')

    @property
    def formulas(self) -> Tuple[Formula, ...]:
        return (self.phi,) if self.psi is None else (self.phi, self.psi)

    def __str__(self) -> str:
        from .printer import constraint_to_pddl
        return constraint_to_pddl(self)

    @classmethod
    def always(cls, phi, index=0):
        return cls(ConstraintKind.ALWAYS, phi, None, index)

    @classmethod
    def sometime(cls, phi, index=0):
        return cls(ConstraintKind.SOMETIME, phi, None, index)

    @classmethod
    def at_most_once(cls, phi, index=0):
        return cls(ConstraintKind.AT_MOST_ONCE, phi, None, index)

    @classmethod
    def sometime_before(cls, phi, psi, index=0):
        return cls(ConstraintKind.SOMETIME_BEFORE, phi, psi, index)

    @classmethod
    def sometime_after(cls, phi, psi, index=0):
        return cls(ConstraintKind.SOMETIME_AFTER, phi, psi, index)


@dataclass(frozen=True)
class DomainDef:
    name: str
    types: TypeHierarchy = field(default_factory=TypeHierarchy)
    constants: Mapping[str, str] = field(default_factory=dict)
    predicates: Tuple[PredicateDef, ...] = ()
    actions: Tuple[ActionSchema, ...] = ()
    requirements: Tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def predicate_map(self) -> Dict[str, PredicateDef]:
        return {p.name: p for p in self.predicates}

    @cached_property
    def action_map(self) -> Dict[str, ActionSchema]:
        return {a.name: a for a in self.actions}

    def action(self, name: str) -> ActionSchema:
        try:
            return self.action_map[name]
        except KeyError:
            raise UndeclaredSymbolError(f'unknown action {name}') from None

    def with_actions(self, actions, predicates=None, requirements=None) -> 'DomainDef':
        return replace(self, actions=tuple(actions),
                       predicates=self.predicates if predicates is None else tuple(predicates),
                       requirements=self.requirements if requirements is None else tuple(requirements))


@dataclass(frozen=True)
class ProblemDef:
    name: str
    domain_name: str
    objects: Mapping[str, str] = field(default_factory=dict)
    init: frozenset = frozenset()
    goal: Formula = TOP
    constraints: Tuple[Constraint, ...] = ()

    def universe(self, domain: DomainDef) -> Universe:
        objs = dict(domain.constants)
        objs.update(self.objects)
        return Universe(objs, domain.types)


def promote_constants(domain: DomainDef, problem: ProblemDef) -> Tuple[DomainDef, ProblemDef]:
    """Move problem objects mentioned by action schemas into the domain constants.

    Compilation can copy problem objects into preconditions and effects;
    the domain text must then declare them.
    """
    used = set()
    for a in domain.actions:
        used.update(c.name for c in constants_of(a.precondition))
        for e in a.effects:
            used.update(c.name for c in constants_of(e.condition))
            used.update(t.name for t in e.literal.atom.args if isinstance(t, Constant))
    moved = {o: t for o, t in problem.objects.items() if o in used and o not in domain.constants}
    if not moved:
        return domain, problem
    consts = dict(domain.constants)
    consts.update(moved)
    objects = {o: t for o, t in problem.objects.items() if o not in moved}
    return replace(domain, constants=consts), replace(problem, objects=objects)
