"""Lifted regression through action schemas via first-order unification.

A formula is regressed through a schema without grounding it: each atom
``f`` is replaced by ``gamma(f) | (f & ~gamma(~f))`` where ``gamma(l)`` is the
weakest condition, over the action parameters, under which some effect of
the schema produces ``l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .logic import (
    BOTTOM, And, Atom, Constant, Equals, Exists, Formula, Literal, Not, Or, Substitution, Term, Variable,
    all_variable_names, apply_substitution, atoms_of, conj, disj, free_variables, fresh_name, map_atoms,
    rename_bound_apart, simplify,
)
from .model import ActionSchema, ConditionalEffect, TypeHierarchy

__all__ = ['Unifier', 'mgu', 'z_substitution', 'weakest_condition', 'basic_weakest_condition', 'lifted_gamma',
           'lifted_regression', 'is_regression_trivial', 'regress_with', 'prepare_formula']

_FLAT = TypeHierarchy()


@dataclass(frozen=True)
class Unifier:
    equations: Tuple[Tuple[Term, Term], ...]
    substitution: Substitution


def _walk(t: Term, theta: Dict[Variable, Term]) -> Term:
    while isinstance(t, Variable) and t in theta:
        t = theta[t]
    return t


def _bindable(var: Variable, term: Term, types: TypeHierarchy) -> bool:
    if isinstance(term, Constant):
        return types.is_subtype(term.type, var.type)
    return types.comparable(var.type, term.type)


def mgu(l: Literal, e: Literal, types: Optional[TypeHierarchy] = None) -> Optional[Unifier]:
    """Most general unifier of two literals, or ``None``.

    Variable/variable pairs bind the variable on the ``e`` side, so terms of
    ``l`` survive.  Bindings must be type-compatible.
    """
    types = types or _FLAT
    if l.positive != e.positive or l.atom.predicate != e.atom.predicate or len(l.atom.args) != len(e.atom.args):
        return None
    theta: Dict[Variable, Term] = {}
    for t, u in zip(l.atom.args, e.atom.args):
        a, b = _walk(t, theta), _walk(u, theta)
        if a == b:
            continue
        if isinstance(b, Variable) and _bindable(b, a, types):
            theta[b] = a
        elif isinstance(a, Variable) and _bindable(a, b, types):
            theta[a] = b
        else:
            return None
    eqs = tuple(zip(l.atom.args, e.atom.args))
    return Unifier(eqs, Substitution(theta).closure())


def z_substitution(l: Literal, eff: ConditionalEffect, types: Optional[TypeHierarchy] = None
                   ) -> Optional[Tuple[Substitution, Tuple[Variable, ...]]]:
    """Restriction of the unifier to the effect's quantified variables, and the unbound rest."""
    u = mgu(l, eff.literal, types)
    if u is None:
        return None
    zs = set(eff.z_vars)
    theta = {}
    for t, v in u.equations:
        if v in zs and v not in theta:
            theta[v] = t
    free = tuple(z for z in eff.z_vars if z not in theta)
    return Substitution(theta), free


def _rename_z_apart(eff: ConditionalEffect, avoid) -> ConditionalEffect:
    clash = [z for z in eff.z_vars if z.name in avoid]
    if not clash:
        return eff
    taken = set(avoid) | all_variable_names(eff.condition) | {z.name for z in eff.z_vars}
    taken |= {v.name for v in free_variables(eff.literal)}
    ren = {}
    for z in clash:
        nz = Variable(fresh_name(z.name, taken), z.type)
        taken.add(nz.name)
        ren[z] = nz
    return ConditionalEffect(tuple(ren.get(z, z) for z in eff.z_vars),
                             apply_substitution(eff.condition, ren),
                             apply_substitution(eff.literal, ren))


def weakest_condition(l: Literal, eff: ConditionalEffect, types: Optional[TypeHierarchy] = None,
                      avoid=()) -> Formula:
    """Weakest pre-state condition under which ``eff`` produces ``l``.

    ``avoid`` lists variable names the result must not capture (the names
    used by the surrounding formula).
    """
    types = types or _FLAT
    el = eff.literal
    if l.positive != el.positive or l.atom.predicate != el.atom.predicate or len(l.atom.args) != len(el.atom.args):
        return BOTTOM
    avoid = set(avoid) | {v.name for v in free_variables(l)}
    eff = _rename_z_apart(eff, avoid)
    if mgu(l, eff.literal, types) is None:
        return BOTTOM
    zs = set(eff.z_vars)
    theta_z: Dict[Variable, Term] = {}
    extra: List[Formula] = []
    for t, u in zip(l.atom.args, eff.literal.atom.args):
        if isinstance(u, Variable) and u in zs:
            if u in theta_z:
                extra.append(Equals(t, theta_z[u]))
                continue
            if isinstance(t, Constant):
                if not types.is_subtype(t.type, u.type):
                    return BOTTOM
            elif not types.is_subtype(t.type, u.type):
                if not types.comparable(t.type, u.type):
                    return BOTTOM
                taken = avoid | all_variable_names(eff.condition) | {v.name for v in free_variables(eff.literal)}
                w = Variable(fresh_name('w', taken | {z.name for z in zs}), u.type)
                avoid = avoid | {w.name}
                extra.append(Exists((w,), Equals(w, t)))
            theta_z[u] = t
            continue
        # u is an action parameter or a constant
        if isinstance(u, Variable) and not _bindable(u, t, types):
            return BOTTOM
        if isinstance(t, Variable) and isinstance(u, Constant) and not types.is_subtype(u.type, t.type):
            return BOTTOM
        extra.append(Equals(t, u))
    z_free = tuple(z for z in eff.z_vars if z not in theta_z)
    body = apply_substitution(eff.condition, Substitution(theta_z))
    cond = Exists(z_free, body) if z_free else body
    return simplify(conj(cond, *extra))


def basic_weakest_condition(l: Literal, condition: Formula, e: Literal) -> Formula:
    """Condition under which the unquantified effect ``condition |> e`` produces ``l``."""
    if mgu(l, e) is None:
        return BOTTOM
    return simplify(conj(condition, *[Equals(t, u) for t, u in zip(l.atom.args, e.atom.args)]))


def lifted_gamma(l: Literal, a: ActionSchema, types: Optional[TypeHierarchy] = None, avoid=()) -> Formula:
    return simplify(disj(*[weakest_condition(l, e, types, avoid) for e in a.effects
                           if e.literal.positive == l.positive]))


def prepare_formula(phi: Formula, a: ActionSchema) -> Formula:
    """Rename bound variables of ``phi`` away from the parameters of ``a``.

    Clashes with quantified effect variables are resolved per effect.
    """
    return rename_bound_apart(phi, {p.name for p in a.params})


ReplaceFn = Callable[[Atom, Formula, Formula], Formula]


def _persist(f: Atom, add: Formula, dele: Formula) -> Formula:
    return Or((add, And((f, Not(dele)))))


def regress_with(phi: Formula, a: ActionSchema, replace: ReplaceFn, types: Optional[TypeHierarchy] = None
                 ) -> Formula:
    """Regression skeleton: each atom ``f`` becomes ``replace(f, gamma(f), gamma(~f))``."""
    phi = prepare_formula(phi, a)
    names = all_variable_names(phi)

    def on_atom(f: Atom) -> Formula:
        return replace(f, lifted_gamma(Literal(f, True), a, types, names),
                       lifted_gamma(Literal(f, False), a, types, names))

    return simplify(map_atoms(phi, on_atom))


def lifted_regression(phi: Formula, a: ActionSchema, types: Optional[TypeHierarchy] = None) -> Formula:
    """Regress ``phi`` through schema ``a``; free variables of the result are parameters of ``a``."""
    return regress_with(phi, a, _persist, types)


def is_regression_trivial(phi: Formula, a: ActionSchema, types: Optional[TypeHierarchy] = None) -> bool:
    """True when no effect of ``a`` can touch any atom of ``phi`` (both gammas are false)."""
    phi = prepare_formula(phi, a)
    names = all_variable_names(phi)
    for f in atoms_of(phi):
        if lifted_gamma(Literal(f, True), a, types, names) != BOTTOM:
            return False
        if lifted_gamma(Literal(f, False), a, types, names) != BOTTOM:
            return False
    return True
