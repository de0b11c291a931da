"""PDDL reader for the supported fragment.

Symbols are case-insensitive and lower-cased on input.  Conjunctive,
universally quantified and conditional effects are normalised into one
:class:`ConditionalEffect` per literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    PDDLSyntaxError, PlanFormatError, TypeMismatchError, UndeclaredSymbolError, UnsupportedFeatureError,
)
from .logic import (
    BOTTOM, TOP, And, Atom, Constant, Equals, Exists, Forall, Formula, Implies, Literal, Not, Or,
    Variable, free_variables,
)
from .model import (
    ROOT_TYPE, ActionSchema, ConditionalEffect, Constraint, ConstraintKind, DomainDef, PredicateDef,
    ProblemDef, TypeHierarchy,
)

__all__ = ['parse_domain', 'parse_problem', 'parse_formula', 'parse_plan', 'PlanStep', 'RESERVED_PREFIX']

RESERVED_PREFIX = '__'

SUPPORTED_REQUIREMENTS = {
    ':strips', ':typing', ':equality', ':negative-preconditions', ':disjunctive-preconditions',
    ':existential-preconditions', ':universal-preconditions', ':quantified-preconditions',
    ':conditional-effects', ':constraints', ':adl',
}
UNSUPPORTED_REQUIREMENTS = {
    ':fluents', ':numeric-fluents', ':object-fluents', ':durative-actions', ':duration-inequalities',
    ':continuous-effects', ':timed-initial-literals', ':preferences', ':derived-predicates',
    ':action-costs',
}
NUMERIC_HEADS = {'increase', 'decrease', 'assign', 'scale-up', 'scale-down', '<', '>', '<=', '>='}
TIMED_MODALITIES = {'within', 'hold-after', 'hold-during', 'always-within', 'at'}
CONSTRAINT_KINDS = {k.value: k for k in ConstraintKind}


# ---------------------------------------------------------------------------
# s-expressions


class Tok(str):
    line: int
    col: int


class SList(list):
    line: int = 0
    col: int = 0


_TOKEN_RE = re.compile(r'\(|\)|[^\s()]+')


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(';', 1)[0]
        for m in _TOKEN_RE.finditer(line):
            tok = Tok(m.group(0).lower())
            tok.line, tok.col = lineno, m.start() + 1
            yield tok


def read_sexprs(text: str) -> List:
    stack: List[SList] = []
    top: List = []
    for tok in _tokenize(text):
        if tok == '(':
            lst = SList()
            lst.line, lst.col = tok.line, tok.col
            stack.append(lst)
        elif tok == ')':
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            (stack[-1] if stack else top).append(done)
        else:
            (stack[-1] if stack else top).append(tok)
    if stack:
        raise PDDLSyntaxError("missing ')'", stack[-1].line, stack[-1].col)
    return top


def _pos(x) -> Tuple[int, int]:
    return getattr(x, 'line', 0), getattr(x, 'col', 0)


def _err(msg: str, at) -> PDDLSyntaxError:
    return PDDLSyntaxError(msg, *_pos(at))


def _expect_list(x, what: str) -> SList:
    if not isinstance(x, list):
        raise _err(f'expected {what}', x)
    return x


def _head(x) -> Optional[str]:
    return x[0] if isinstance(x, list) and x and isinstance(x[0], str) else None


def _parse_typed_list(items: Sequence, at) -> List[Tuple[str, str]]:
    """``a b - t c`` -> [(a, t), (b, t), (c, object)]."""
    out: List[Tuple[str, str]] = []
    pending: List[str] = []
    i = 0
    while i < len(items):
        it = items[i]
        if isinstance(it, list):
            raise _err('unexpected list in typed list', it)
        if it == '-':
            if i + 1 >= len(items):
                raise _err("type expected after '-'", it)
            ty = items[i + 1]
            if isinstance(ty, list):
                if _head(ty) == 'either':
                    raise UnsupportedFeatureError('either-types', 'union types are not supported')
                raise _err('bad type', ty)
            out.extend((p, str(ty)) for p in pending)
            pending = []
            i += 2
            continue
        pending.append(str(it))
        i += 1
    out.extend((p, ROOT_TYPE) for p in pending)
    return out


def _strip_var(name: str, at) -> str:
    if not name.startswith('?') or len(name) == 1:
        raise _err(f'expected a variable, got {name!r}', at)
    return name[1:]


# ---------------------------------------------------------------------------
# formulas


def _is_predicate_use(x, domain: DomainDef) -> bool:
    """``(at ?r ?c)`` with a declared ``at`` predicate is an atom, ``(at end ...)`` is not."""
    if x[0] not in domain.predicate_map:
        return False
    return not (x[0] == 'at' and len(x) > 1 and x[1] in ('end', 'start'))


class _FormulaReader:
    def __init__(self, domain: DomainDef, objects: Mapping[str, str], lenient: bool = False):
        self.domain = domain
        self.objects = dict(objects)
        self.lenient = lenient

    def term(self, tok, scope: Mapping[str, Variable], slot_type: str) -> 'Variable | Constant':
        if isinstance(tok, list):
            raise UnsupportedFeatureError('function terms', f'at line {_pos(tok)[0]}')
        name = str(tok)
        if name.startswith('?'):
            v = name[1:]
            if v not in scope:
                raise UndeclaredSymbolError(f'free variable {name} at line {_pos(tok)[0]} (formula must be closed)')
            return scope[v]
        if name in self.objects:
            return Constant(name, self.objects[name])
        if self.lenient:
            self.objects[name] = slot_type
            return Constant(name, slot_type)
        raise UndeclaredSymbolError(f'undeclared object {name} at line {_pos(tok)[0]}')

    def atom(self, x, scope) -> Atom:
        pred = str(x[0])
        pdef = self.domain.predicate_map.get(pred)
        if pdef is None:
            raise UndeclaredSymbolError(f'undeclared predicate {pred} at line {_pos(x)[0]}')
        args = x[1:]
        if len(args) != pdef.arity:
            raise _err(f'predicate {pred} expects {pdef.arity} arguments, got {len(args)}', x)
        return Atom(pred, tuple(self.term(a, scope, p.type) for a, p in zip(args, pdef.params)))

    def formula(self, x, scope: Mapping[str, Variable]) -> Formula:
        if not isinstance(x, list):
            raise _err(f'expected a formula, got {x!r}', x)
        if not x:
            return TOP
        head = x[0]
        if isinstance(head, list):
            raise _err('expected a connective or predicate', head)
        if head == 'and':
            kids = [self.formula(a, scope) for a in x[1:]]
            return TOP if not kids else (kids[0] if len(kids) == 1 else And(tuple(kids)))
        if head == 'or':
            kids = [self.formula(a, scope) for a in x[1:]]
            return BOTTOM if not kids else (kids[0] if len(kids) == 1 else Or(tuple(kids)))
        if head == 'not':
            if len(x) != 2:
                raise _err('not takes one argument', x)
            return Not(self.formula(x[1], scope))
        if head == 'imply':
            if len(x) != 3:
                raise _err('imply takes two arguments', x)
            return Implies(self.formula(x[1], scope), self.formula(x[2], scope))
        if head in ('forall', 'exists'):
            if len(x) != 3:
                raise _err(f'{head} takes a variable list and a body', x)
            vs = self.variables(x[1])
            inner = dict(scope)
            inner.update({v.name: v for v in vs})
            body = self.formula(x[2], inner)
            return (Forall if head == 'forall' else Exists)(tuple(vs), body)
        if head == '=':
            if len(x) != 3:
                raise _err('= takes two arguments', x)
            if isinstance(x[1], list) or isinstance(x[2], list):
                raise UnsupportedFeatureError(':fluents', 'numeric comparison')
            return Equals(self.term(x[1], scope, ROOT_TYPE), self.term(x[2], scope, ROOT_TYPE))
        if head in NUMERIC_HEADS:
            raise UnsupportedFeatureError(':fluents', f'({head} ...) at line {_pos(x)[0]}')
        if head == 'preference':
            raise UnsupportedFeatureError(':preferences', f'at line {_pos(x)[0]}')
        if (head in CONSTRAINT_KINDS or head in TIMED_MODALITIES) and not _is_predicate_use(x, self.domain):
            raise UnsupportedFeatureError('nested modalities', f'{head} inside a formula at line {_pos(x)[0]}')
        if head == 'when':
            raise _err('when is only allowed in effects', x)
        return self.atom(x, scope)

    def variables(self, x) -> List[Variable]:
        x = _expect_list(x, 'a variable list')
        out = []
        for name, ty in _parse_typed_list(x, x):
            if ty not in self.domain.types:
                raise UndeclaredSymbolError(f'undeclared type {ty} at line {_pos(x)[0]}')
            out.append(Variable(_strip_var(name, x), ty))
        return out

    def effects(self, x, scope, z: Tuple[Variable, ...] = (), cond: Formula = TOP) -> List[ConditionalEffect]:
        x = _expect_list(x, 'an effect')
        if not x:
            return []
        head = x[0]
        if head == 'and':
            out: List[ConditionalEffect] = []
            for e in x[1:]:
                out.extend(self.effects(e, scope, z, cond))
            return out
        if head == 'forall':
            if len(x) != 3:
                raise _err('forall takes a variable list and an effect', x)
            vs = self.variables(x[1])
            for v in vs:
                if v.name in scope:
                    raise _err(f'quantified effect variable ?{v.name} shadows an outer variable', x)
            inner = dict(scope)
            inner.update({v.name: v for v in vs})
            return self.effects(x[2], inner, z + tuple(vs), cond)
        if head == 'when':
            if len(x) != 3:
                raise _err('when takes a condition and an effect', x)
            c = self.formula(x[1], scope)
            return self.effects(x[2], scope, z, c if cond == TOP else And((cond, c)))
        if head in NUMERIC_HEADS:
            raise UnsupportedFeatureError(':fluents', f'({head} ...) at line {_pos(x)[0]}')
        positive = True
        if head == 'not':
            if len(x) != 2:
                raise _err('not takes one argument', x)
            x = _expect_list(x[1], 'an atom')
            positive = False
            if _head(x) in ('and', 'or', 'forall', 'exists', 'when', 'not', '='):
                raise _err('only atoms may be negated in effects', x)
        if _head(x) in ('or', 'exists', 'imply', '='):
            raise _err(f'{_head(x)} is not allowed in effects', x)
        atom = self.atom(x, scope)
        pdef = self.domain.predicate_map[atom.predicate]
        for t, p in zip(atom.args, pdef.params):
            if not self.domain.types.is_subtype(t.type, p.type):
                raise TypeMismatchError(
                    f'effect {atom} at line {_pos(x)[0]}: argument {t} of type {t.type} does not fit {p.type}')
        return [ConditionalEffect(z, cond, Literal(atom, positive))]


# ---------------------------------------------------------------------------
# domain


def _sections(tree, kind: str):
    if len(tree) != 1:
        if not tree:
            raise PDDLSyntaxError(f'empty {kind} file')
        raise _err(f'expected exactly one (define ...) form', tree[1])
    d = _expect_list(tree[0], '(define ...)')
    if _head(d) != 'define' or len(d) < 2:
        raise _err('expected (define ...)', d)
    header = _expect_list(d[1], f'({kind} name)')
    if _head(header) != kind or len(header) != 2:
        raise _err(f'expected ({kind} name)', header)
    return str(header[1]), d[2:]


def _check_requirements(reqs: Sequence[str], at) -> None:
    for r in reqs:
        if r in UNSUPPORTED_REQUIREMENTS:
            raise UnsupportedFeatureError(r)
        if r not in SUPPORTED_REQUIREMENTS:
            raise _err(f'unknown requirement {r}', at)


def parse_domain(text: str, allow_reserved: bool = False) -> DomainDef:
    """Parse a PDDL domain into a :class:`DomainDef`.

    ``allow_reserved`` admits ``__``-prefixed predicates, which only
    compiled output should contain.
    """
    name, body = _sections(read_sexprs(text), 'domain')
    requirements: List[str] = []
    type_parents: Dict[str, str] = {}
    constants: Dict[str, str] = {}
    predicates: List[PredicateDef] = []
    raw_actions = []
    for sec in body:
        sec = _expect_list(sec, 'a domain section')
        head = _head(sec)
        if head == ':requirements':
            requirements = [str(r) for r in sec[1:]]
            _check_requirements(requirements, sec)
        elif head == ':types':
            for t, parent in _parse_typed_list(sec[1:], sec):
                if t == ROOT_TYPE:
                    continue
                type_parents[t] = parent
        elif head == ':constants':
            constants.update(_parse_typed_list(sec[1:], sec))
        elif head == ':predicates':
            for p in sec[1:]:
                p = _expect_list(p, 'a predicate declaration')
                if not p or not isinstance(p[0], str):
                    raise _err('bad predicate declaration', p)
                pname = str(p[0])
                if pname.startswith(RESERVED_PREFIX) and not allow_reserved:
                    raise _err(f'predicate names starting with {RESERVED_PREFIX!r} are reserved', p)
                params = tuple(Variable(_strip_var(n, p), t) for n, t in _parse_typed_list(p[1:], p))
                predicates.append(PredicateDef(pname, params))
        elif head == ':action':
            raw_actions.append(sec)
        elif head in (':functions',):
            raise UnsupportedFeatureError(':fluents', ':functions section')
        elif head in (':durative-action',):
            raise UnsupportedFeatureError(':durative-actions')
        elif head in (':derived',):
            raise UnsupportedFeatureError(':derived-predicates')
        elif head == ':constraints':
            raise UnsupportedFeatureError('domain constraints', 'constraints belong in the problem')
        else:
            raise _err(f'unknown domain section {head}', sec)
    types = TypeHierarchy(type_parents)
    for pd in predicates:
        for v in pd.params:
            if v.type not in types:
                raise UndeclaredSymbolError(f'undeclared type {v.type} in predicate {pd.name}')
    for c, t in constants.items():
        if t not in types:
            raise UndeclaredSymbolError(f'undeclared type {t} of constant {c}')
    domain = DomainDef(name, types, constants, tuple(predicates), (), tuple(requirements))
    actions = tuple(_parse_action(sec, domain) for sec in raw_actions)
    names = [a.name for a in actions]
    if len(set(names)) != len(names):
        raise PDDLSyntaxError('duplicate action names')
    return DomainDef(name, types, constants, tuple(predicates), actions, tuple(requirements))


def _parse_action(sec, domain: DomainDef) -> ActionSchema:
    if len(sec) < 2 or not isinstance(sec[1], str):
        raise _err('action name expected', sec)
    name = str(sec[1])
    reader = _FormulaReader(domain, domain.constants)
    params: List[Variable] = []
    pre: Formula = TOP
    effects: List[ConditionalEffect] = []
    i = 2
    while i < len(sec):
        key = sec[i]
        if i + 1 >= len(sec):
            raise _err(f'value expected after {key}', key)
        val = sec[i + 1]
        if key == ':parameters':
            params = reader.variables(val)
        elif key == ':precondition':
            pre = reader.formula(_expect_list(val, 'a precondition'), {p.name: p for p in params})
        elif key == ':effect':
            effects = reader.effects(val, {p.name: p for p in params})
        else:
            raise _err(f'unknown action field {key}', key)
        i += 2
    act = ActionSchema(name, tuple(params), pre, tuple(effects))
    act.check()
    return act


# ---------------------------------------------------------------------------
# problem


def parse_problem(text: str, domain: DomainDef) -> ProblemDef:
    """Parse a PDDL problem against ``domain``."""
    name, body = _sections(read_sexprs(text), 'problem')
    domain_name = domain.name
    objects: Dict[str, str] = {}
    init_raw = []
    goal_raw = None
    constraints_raw = None
    for sec in body:
        sec = _expect_list(sec, 'a problem section')
        head = _head(sec)
        if head == ':domain':
            domain_name = str(sec[1])
        elif head == ':requirements':
            _check_requirements([str(r) for r in sec[1:]], sec)
        elif head == ':objects':
            for o, t in _parse_typed_list(sec[1:], sec):
                if t not in domain.types:
                    raise UndeclaredSymbolError(f'undeclared type {t} of object {o}')
                objects[o] = t
        elif head == ':init':
            init_raw = sec[1:]
        elif head == ':goal':
            if len(sec) != 2:
                raise _err(':goal takes one formula', sec)
            goal_raw = sec[1]
        elif head == ':constraints':
            if len(sec) != 2:
                raise _err(':constraints takes one expression', sec)
            constraints_raw = sec[1]
        elif head == ':metric':
            raise UnsupportedFeatureError(':metric', 'cost metrics are not supported')
        else:
            raise _err(f'unknown problem section {head}', sec)
    all_objects = dict(domain.constants)
    all_objects.update(objects)
    reader = _FormulaReader(domain, all_objects)
    init = set()
    for a in init_raw:
        a = _expect_list(a, 'an initial atom')
        h = _head(a)
        if h == '=':
            raise UnsupportedFeatureError(':fluents', f'numeric initial value at line {_pos(a)[0]}')
        if h in ('not', 'and', 'or') or (h == 'at' and not _is_predicate_use(a, domain)):
            raise _err('initial state must list positive ground atoms', a)
        atom = reader.atom(a, {})
        pdef = domain.predicate_map[atom.predicate]
        for t, p in zip(atom.args, pdef.params):
            if not domain.types.is_subtype(t.type, p.type):
                raise TypeMismatchError(f'initial atom {atom}: {t} is not of type {p.type}')
        init.add(atom)
    goal = reader.formula(goal_raw, {}) if goal_raw is not None else TOP
    constraints: List[Constraint] = []
    if constraints_raw is not None:
        _read_constraints(constraints_raw, reader, constraints)
    return ProblemDef(name, domain_name, objects, frozenset(init), goal, tuple(constraints))


def _read_constraints(x, reader: _FormulaReader, out: List[Constraint]) -> None:
    x = _expect_list(x, 'a constraint')
    head = _head(x)
    if head is None and not x:
        return
    if head == 'and':
        for c in x[1:]:
            _read_constraints(c, reader, out)
        return
    if head == 'forall':
        vs = reader.variables(x[1])
        inner = _expect_list(x[2], 'a constraint')
        if _head(inner) == 'always' and len(inner) == 2:
            scope = {v.name: v for v in vs}
            phi = Forall(tuple(vs), reader.formula(inner[1], scope))
            out.append(Constraint(ConstraintKind.ALWAYS, phi, None, len(out)))
            return
        raise UnsupportedFeatureError(
            'quantified constraints',
            f'(forall ... ({_head(inner)} ...)) at line {_pos(x)[0]}: move the quantifier inside the constraint formula')
    if head == 'exists':
        raise UnsupportedFeatureError('quantified constraints', f'at line {_pos(x)[0]}')
    if head == 'preference':
        raise UnsupportedFeatureError(':preferences', f'at line {_pos(x)[0]}')
    if head in TIMED_MODALITIES and not _is_predicate_use(x, reader.domain):
        raise UnsupportedFeatureError('metric-time constraints', f'{head} at line {_pos(x)[0]}')
    kind = CONSTRAINT_KINDS.get(head or '')
    if kind is None:
        raise _err(f'unknown constraint modality {head}', x)
    nargs = 2 if kind.binary else 1
    if len(x) != nargs + 1:
        raise _err(f'{head} takes {nargs} formula argument(s)', x)
    fs = [reader.formula(_expect_list(a, 'a formula'), {}) for a in x[1:]]
    for f in fs:
        if free_variables(f):
            raise UndeclaredSymbolError(f'constraint formula at line {_pos(x)[0]} is not closed')
    out.append(Constraint(kind, fs[0], fs[1] if nargs == 2 else None, len(out)))


def parse_formula(text: str, domain: DomainDef, objects: Optional[Mapping[str, str]] = None,
                  scope: Optional[Mapping[str, Variable]] = None, lenient: bool = False) -> Formula:
    """Parse a single formula.  With ``lenient``, unknown constants are accepted
    and typed after the predicate slot they occupy."""
    tree = read_sexprs(text)
    if len(tree) != 1:
        raise PDDLSyntaxError('expected exactly one formula')
    objs = dict(domain.constants)
    objs.update(objects or {})
    return _FormulaReader(domain, objs, lenient).formula(_expect_list(tree[0], 'a formula'), dict(scope or {}))


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class PlanStep:
    name: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return '(' + ' '.join((self.name,) + self.args) + ')'


_STEP_RE = re.compile(r'^\(\s*([^\s()]+)((?:\s+[^\s()]+)*)\s*\)$')


def parse_plan(text: str) -> List[PlanStep]:
    """One ground action per line, ``(name arg ...)``; ``;`` starts a comment."""
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(';', 1)[0].strip()
        if not line:
            continue
        line = re.sub(r'^\d+\s*:\s*', '', line)  # "0: (a b)" prefixes
        line = re.sub(r'\s*\[\d+(\.\d+)?\]$', '', line)  # trailing "[1]" durations
        m = _STEP_RE.match(line)
        if not m:
            raise PlanFormatError(f'malformed plan line {lineno}: {raw.strip()!r}')
        steps.append(PlanStep(m.group(1).lower(), tuple(a.lower() for a in m.group(2).split())))
    return steps
