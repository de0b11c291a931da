"""First-order terms and formulas, substitutions and the simplifier.

Formulas are immutable trees.  Terms compare by kind and name only; the
declared type rides along as metadata so that the same variable written
with and without its type annotation is still the same variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import TypeMismatchError

__all__ = [
    'Variable', 'Constant', 'Term', 'Formula', 'Atom', 'Equals', 'Not', 'And', 'Or', 'Implies',
    'Forall', 'Exists', 'Truth', 'TOP', 'BOTTOM', 'Literal', 'Substitution',
    'conj', 'disj', 'free_variables', 'atoms_of', 'constants_of', 'apply_substitution', 'rename_bound_apart',
    'simplify', 'canonical', 'canonical_key', 'to_pddl', 'fresh_name', 'quantifier_depth',
]


@dataclass(frozen=True)
class Variable:
    name: str
    type: str = field(default='object', compare=False)

    def __str__(self) -> str:
        return '?' + self.name

    def __repr__(self) -> str:
        return f'?{self.name}-{self.type}'


@dataclass(frozen=True)
class Constant:
    name: str
    type: str = field(default='object', compare=False)

    def __str__(self) -> str:
        return self.name

    __repr__ = __str__


Term = Union[Variable, Constant]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_pddl(self)

    def __repr__(self) -> str:
        return to_pddl(self)

    def __and__(self, other: 'Formula') -> 'Formula':
        return And((self, other))

    def __or__(self, other: 'Formula') -> 'Formula':
        return Or((self, other))

    def __invert__(self) -> 'Formula':
        return Not(self)


@dataclass(frozen=True, repr=False)
class Truth(Formula):
    value: bool


TOP = Truth(True)
BOTTOM = Truth(False)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def is_ground(self) -> bool:
        return all(isinstance(t, Constant) for t in self.args)


@dataclass(frozen=True, repr=False)
class Equals(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    vars: Tuple[Variable, ...]
    body: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    vars: Tuple[Variable, ...]
    body: Formula


@dataclass(frozen=True)
class Literal:
    """A signed atom, as found on the right-hand side of an effect."""

    atom: Atom
    positive: bool = True

    def negate(self) -> 'Literal':
        return Literal(self.atom, not self.positive)

    def as_formula(self) -> Formula:
        return self.atom if self.positive else Not(self.atom)

    def __str__(self) -> str:
        return to_pddl(self.as_formula())


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TOP
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: Formula) -> Formula:
    if not fs:
        return BOTTOM
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


# ---------------------------------------------------------------------------
# traversal helpers


def _term_vars(terms: Iterable[Term]) -> Iterator[Variable]:
    for t in terms:
        if isinstance(t, Variable):
            yield t


def free_variables(phi: Union[Formula, Literal]) -> frozenset:
    """The exact set of free variables of ``phi``."""
    if isinstance(phi, Literal):
        phi = phi.atom
    if isinstance(phi, Atom):
        return frozenset(_term_vars(phi.args))
    if isinstance(phi, Equals):
        return frozenset(_term_vars((phi.lhs, phi.rhs)))
    if isinstance(phi, Truth):
        return frozenset()
    if isinstance(phi, Not):
        return free_variables(phi.arg)
    if isinstance(phi, (And, Or)):
        out: frozenset = frozenset()
        for a in phi.args:
            out |= free_variables(a)
        return out
    if isinstance(phi, Implies):
        return free_variables(phi.lhs) | free_variables(phi.rhs)
    if isinstance(phi, (Forall, Exists)):
        return free_variables(phi.body) - frozenset(phi.vars)
    raise TypeError(f'not a formula: {phi!r}')


def all_variable_names(phi: Formula) -> set:
    """Names of every variable occurring in ``phi``, free or bound."""
    names: set = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            names.update(v.name for v in _term_vars(f.args))
        elif isinstance(f, Equals):
            names.update(v.name for v in _term_vars((f.lhs, f.rhs)))
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a)
        elif isinstance(f, Implies):
            walk(f.lhs)
            walk(f.rhs)
        elif isinstance(f, (Forall, Exists)):
            names.update(v.name for v in f.vars)
            walk(f.body)

    walk(phi)
    return names


def atoms_of(phi: Formula) -> Iterator[Atom]:
    """Every atom occurrence of ``phi`` (equalities excluded), left to right."""
    if isinstance(phi, Atom):
        yield phi
    elif isinstance(phi, Not):
        yield from atoms_of(phi.arg)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from atoms_of(a)
    elif isinstance(phi, Implies):
        yield from atoms_of(phi.lhs)
        yield from atoms_of(phi.rhs)
    elif isinstance(phi, (Forall, Exists)):
        yield from atoms_of(phi.body)


def constants_of(phi: Formula) -> Iterator[Constant]:
    """Every constant occurrence of ``phi``, including inside equalities."""
    if isinstance(phi, Atom):
        yield from (t for t in phi.args if isinstance(t, Constant))
    elif isinstance(phi, Equals):
        yield from (t for t in (phi.lhs, phi.rhs) if isinstance(t, Constant))
    elif isinstance(phi, Not):
        yield from constants_of(phi.arg)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from constants_of(a)
    elif isinstance(phi, Implies):
        yield from constants_of(phi.lhs)
        yield from constants_of(phi.rhs)
    elif isinstance(phi, (Forall, Exists)):
        yield from constants_of(phi.body)


def quantifier_depth(phi: Formula) -> int:
    if isinstance(phi, Not):
        return quantifier_depth(phi.arg)
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(a) for a in phi.args), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.lhs), quantifier_depth(phi.rhs))
    if isinstance(phi, (Forall, Exists)):
        return 1 + quantifier_depth(phi.body)
    return 0


def map_atoms(phi: Formula, fn: Callable[[Atom], Formula]) -> Formula:
    """Rebuild ``phi`` with every atom replaced by ``fn(atom)``, keeping structure."""
    if isinstance(phi, Atom):
        return fn(phi)
    if isinstance(phi, (Equals, Truth)):
        return phi
    if isinstance(phi, Not):
        return Not(map_atoms(phi.arg, fn))
    if isinstance(phi, And):
        return And(tuple(map_atoms(a, fn) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(map_atoms(a, fn) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(map_atoms(phi.lhs, fn), map_atoms(phi.rhs, fn))
    if isinstance(phi, Forall):
        return Forall(phi.vars, map_atoms(phi.body, fn))
    if isinstance(phi, Exists):
        return Exists(phi.vars, map_atoms(phi.body, fn))
    raise TypeError(f'not a formula: {phi!r}')


def fresh_name(base: str, taken) -> str:
    base = base.rstrip('0123456789').rstrip('_') or 'v'
    for i in itertools.count(1):
        cand = f'{base}_{i}'
        if cand not in taken:
            return cand
    raise AssertionError('unreachable')


# ---------------------------------------------------------------------------
# substitutions


class Substitution(Mapping):
    """A finite map from variables to terms.

    Identity bindings are dropped.  When ``types`` (a type hierarchy) is
    given, every binding is checked for type compatibility: a variable may
    only be bound to a constant of a subtype, or to a variable whose type is
    comparable with its own.
    """

    def __init__(self, bindings: Optional[Mapping] = None, types=None):
        items = {}
        for var, term in (bindings or {}).items():
            if not isinstance(var, Variable):
                raise TypeError(f'substitution key must be a variable, got {var!r}')
            if var == term:
                continue
            if types is not None:
                _check_binding(var, term, types)
            items[var] = term
        self._map = items

    def __getitem__(self, key):
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __repr__(self):
        inner = ', '.join(f'{k} -> {v}' for k, v in self._map.items())
        return '{' + inner + '}'

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self._map) == dict(other)
        return NotImplemented

    def term(self, t: Term) -> Term:
        return self._map.get(t, t) if isinstance(t, Variable) else t

    def closure(self) -> 'Substitution':
        """Resolve chains so that applying the result twice equals applying it once."""
        out = dict(self._map)
        for _ in range(len(out) + 1):
            changed = False
            for k, v in out.items():
                if isinstance(v, Variable) and v in out and out[v] != v:
                    out[k] = out[v]
                    changed = True
            if not changed:
                break
        return Substitution({k: v for k, v in out.items() if k != v})

    def compose(self, other: Mapping) -> 'Substitution':
        """``self`` followed by ``other``: x[[self.compose(other)]] == x[[self]][[other]]."""
        other = other if isinstance(other, Substitution) else Substitution(other)
        out = {k: other.term(v) for k, v in self._map.items()}
        for k, v in other.items():
            out.setdefault(k, v)
        return Substitution(out)

    def restrict(self, keep) -> 'Substitution':
        keep = set(keep)
        return Substitution({k: v for k, v in self._map.items() if k in keep})


def _check_binding(var: Variable, term: Term, types) -> None:
    if isinstance(term, Constant):
        if not types.is_subtype(term.type, var.type):
            raise TypeMismatchError(f'cannot bind {var} of type {var.type} to {term} of type {term.type}')
    elif not (types.is_subtype(term.type, var.type) or types.is_subtype(var.type, term.type)):
        raise TypeMismatchError(f'cannot bind {var} of type {var.type} to {term} of type {term.type}')


def apply_substitution(x, theta: Mapping):
    """Apply ``theta`` to a formula, literal, atom or conditional effect.

    Only free occurrences are replaced.  A quantifier whose bound variable
    would capture a variable introduced by ``theta`` is alpha-renamed first.
    """
    from .model import ConditionalEffect  # circular at import time

    if not theta:
        return x
    if not isinstance(theta, Substitution):
        theta = Substitution(theta)
    if isinstance(x, Literal):
        return Literal(_subst(x.atom, theta), x.positive)
    if isinstance(x, ConditionalEffect):
        inner = theta.restrict(set(theta) - set(x.z_vars))
        z_vars, cond, lit = x.z_vars, x.condition, x.literal
        incoming = {v.name for t in inner.values() for v in _term_vars((t,))}
        if any(z.name in incoming for z in z_vars):
            taken = incoming | all_variable_names(cond) | {v.name for v in free_variables(lit)}
            ren = {}
            new_z = []
            for z in z_vars:
                if z.name in incoming:
                    nz = Variable(fresh_name(z.name, taken), z.type)
                    taken.add(nz.name)
                    ren[z] = nz
                    new_z.append(nz)
                else:
                    new_z.append(z)
            cond = apply_substitution(cond, ren)
            lit = Literal(_subst(lit.atom, Substitution(ren)), lit.positive)
            z_vars = tuple(new_z)
        return ConditionalEffect(z_vars, _subst(cond, inner), Literal(_subst(lit.atom, inner), lit.positive))
    return _subst(x, theta)


def _subst(phi: Formula, theta: Substitution) -> Formula:
    if not theta:
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.predicate, tuple(theta.term(t) for t in phi.args))
    if isinstance(phi, Equals):
        return Equals(theta.term(phi.lhs), theta.term(phi.rhs))
    if isinstance(phi, Truth):
        return phi
    if isinstance(phi, Not):
        return Not(_subst(phi.arg, theta))
    if isinstance(phi, And):
        return And(tuple(_subst(a, theta) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(_subst(a, theta) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(_subst(phi.lhs, theta), _subst(phi.rhs, theta))
    if isinstance(phi, (Forall, Exists)):
        body_free = free_variables(phi.body)
        inner = Substitution({k: v for k, v in theta.items() if k not in phi.vars and k in body_free})
        if not inner:
            return phi
        incoming = {v.name for t in inner.values() for v in _term_vars((t,))}
        new_vars = []
        body = phi.body
        clash = [v for v in phi.vars if v.name in incoming]
        if clash:
            taken = incoming | all_variable_names(phi.body) | {k.name for k in inner}
            ren = {}
            for v in phi.vars:
                if v.name in incoming:
                    nv = Variable(fresh_name(v.name, taken), v.type)
                    taken.add(nv.name)
                    ren[v] = nv
                    new_vars.append(nv)
                else:
                    new_vars.append(v)
            body = _subst(body, Substitution(ren))
        else:
            new_vars = list(phi.vars)
        return type(phi)(tuple(new_vars), _subst(body, inner))
    raise TypeError(f'not a formula: {phi!r}')


def rename_bound_apart(phi: Formula, avoid) -> Formula:
    """Alpha-rename bound variables of ``phi`` whose names are in ``avoid``."""
    avoid = set(avoid)
    taken = set(avoid) | all_variable_names(phi)

    def walk(f: Formula) -> Formula:
        if isinstance(f, (Atom, Equals, Truth)):
            return f
        if isinstance(f, Not):
            return Not(walk(f.arg))
        if isinstance(f, And):
            return And(tuple(walk(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(walk(f.lhs), walk(f.rhs))
        if isinstance(f, (Forall, Exists)):
            ren = {}
            new_vars = []
            for v in f.vars:
                if v.name in avoid:
                    nv = Variable(fresh_name(v.name, taken), v.type)
                    taken.add(nv.name)
                    ren[v] = nv
                    new_vars.append(nv)
                else:
                    new_vars.append(v)
            body = _subst(f.body, Substitution(ren)) if ren else f.body
            return type(f)(tuple(new_vars), walk(body))
        raise TypeError(f'not a formula: {f!r}')

    return walk(phi)


# ---------------------------------------------------------------------------
# simplification


def _mk_eq(lhs: Term, rhs: Term) -> Formula:
    if lhs == rhs:
        return TOP
    if isinstance(lhs, Constant) and isinstance(rhs, Constant):
        return BOTTOM
    if isinstance(lhs, Constant) or (isinstance(rhs, Variable) and rhs.name < lhs.name):
        lhs, rhs = rhs, lhs
    return Equals(lhs, rhs)


def _mk_not(f: Formula) -> Formula:
    if isinstance(f, Truth):
        return BOTTOM if f.value else TOP
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def _negation_key(f: Formula):
    return canonical_key(f.arg) if isinstance(f, Not) else None


def _mk_junction(cls, args: Sequence[Formula]) -> Formula:
    unit, absorbing = (TOP, BOTTOM) if cls is And else (BOTTOM, TOP)
    flat = []
    for a in args:
        if isinstance(a, cls):
            flat.extend(a.args)
        else:
            flat.append(a)
    out = []
    seen = set()
    for a in flat:
        if a == unit:
            continue
        if a == absorbing:
            return absorbing
        k = canonical_key(a)
        if k in seen:
            continue
        seen.add(k)
        out.append(a)
    negated = {_negation_key(a) for a in out} - {None}
    if negated & seen:
        return absorbing
    if not out:
        return unit
    if len(out) == 1:
        return out[0]
    return cls(tuple(out))


def _mk_implies(lhs: Formula, rhs: Formula) -> Formula:
    if lhs == TOP:
        return rhs
    if lhs == BOTTOM or rhs == TOP:
        return TOP
    if rhs == BOTTOM:
        return _mk_not(lhs)
    if canonical_key(lhs) == canonical_key(rhs):
        return TOP
    return Implies(lhs, rhs)


def _mk_quant(cls, vars: Sequence[Variable], body: Formula) -> Formula:
    if isinstance(body, Truth):
        return body
    fv = free_variables(body)
    kept = tuple(v for v in vars if v in fv)
    if not kept:
        return body
    return cls(kept, body)


def simplify(phi: Formula) -> Formula:
    """Return a logically equivalent, simplified formula.

    Folds truth constants through connectives, flattens nested conjunctions
    and disjunctions, removes duplicate children, collapses ``x & ~x`` and
    ``x | ~x``, unwraps single children, drops vacuous quantifiers and decides
    equalities between identical terms or distinct constants.  Child order is
    kept stable so output stays readable; use :func:`canonical` for an
    order-insensitive normal form.

    Vacuous quantifier removal assumes every type has at least one object.
    """
    if isinstance(phi, (Atom, Truth)):
        return phi
    if isinstance(phi, Equals):
        return _mk_eq(phi.lhs, phi.rhs)
    if isinstance(phi, Not):
        return _mk_not(simplify(phi.arg))
    if isinstance(phi, And):
        return _mk_junction(And, [simplify(a) for a in phi.args])
    if isinstance(phi, Or):
        return _mk_junction(Or, [simplify(a) for a in phi.args])
    if isinstance(phi, Implies):
        return _mk_implies(simplify(phi.lhs), simplify(phi.rhs))
    if isinstance(phi, (Forall, Exists)):
        return _mk_quant(type(phi), phi.vars, simplify(phi.body))
    raise TypeError(f'not a formula: {phi!r}')


def _sort_canonical(phi: Formula) -> Formula:
    if isinstance(phi, Not):
        return Not(_sort_canonical(phi.arg))
    if isinstance(phi, (And, Or)):
        kids = sorted((_sort_canonical(a) for a in phi.args), key=to_pddl)
        return type(phi)(tuple(kids))
    if isinstance(phi, Implies):
        return Implies(_sort_canonical(phi.lhs), _sort_canonical(phi.rhs))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(tuple(sorted(phi.vars, key=lambda v: v.name)), _sort_canonical(phi.body))
    return phi


def canonical(phi: Formula) -> Formula:
    """Simplified formula with a deterministic, order-insensitive child ordering."""
    return _sort_canonical(simplify(phi))


def canonical_key(phi: Formula) -> str:
    """String key under which structurally identical formulas coincide."""
    return to_pddl(_sort_canonical(phi))


# ---------------------------------------------------------------------------
# rendering


def _term_str(t: Term) -> str:
    return str(t)


def _typed_vars(vs: Sequence[Variable]) -> str:
    return ' '.join(f'?{v.name} - {v.type}' for v in vs)


def to_pddl(phi: Formula) -> str:
    if isinstance(phi, Atom):
        if not phi.args:
            return f'({phi.predicate})'
        return '(' + phi.predicate + ' ' + ' '.join(map(_term_str, phi.args)) + ')'
    if isinstance(phi, Equals):
        return f'(= {_term_str(phi.lhs)} {_term_str(phi.rhs)})'
    if isinstance(phi, Truth):
        return '(and)' if phi.value else '(or)'
    if isinstance(phi, Not):
        return f'(not {to_pddl(phi.arg)})'
    if isinstance(phi, And):
        return '(and ' + ' '.join(map(to_pddl, phi.args)) + ')'
    if isinstance(phi, Or):
        return '(or ' + ' '.join(map(to_pddl, phi.args)) + ')'
    if isinstance(phi, Implies):
        return f'(imply {to_pddl(phi.lhs)} {to_pddl(phi.rhs)})'
    if isinstance(phi, Forall):
        return f'(forall ({_typed_vars(phi.vars)}) {to_pddl(phi.body)})'
    if isinstance(phi, Exists):
        return f'(exists ({_typed_vars(phi.vars)}) {to_pddl(phi.body)})'
    raise TypeError(f'not a formula: {phi!r}')
