"""Fresh 0-ary monitoring atoms shared by the compilers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from .errors import UndeclaredSymbolError
from .logic import Atom, Formula, canonical_key, simplify
from .model import Constraint, ConstraintKind, DomainDef, PredicateDef

PREFIX = '__'


def formula_key(phi: Formula) -> str:
    return canonical_key(simplify(phi))


@dataclass
class Monitors:
    """hold atoms per constraint index, seen/prevent atoms per formula key."""

    hold: Dict[int, Atom] = field(default_factory=dict)
    seen: Dict[str, Atom] = field(default_factory=dict)
    prevent: Dict[str, Atom] = field(default_factory=dict)
    end: Atom = None
    order: List[Atom] = field(default_factory=list)

    def _add(self, atom: Atom) -> Atom:
        self.order.append(atom)
        return atom

    def hold_of(self, c: Constraint) -> Atom:
        return self.hold[c.index]

    def seen_of(self, phi: Formula) -> Atom:
        return self.seen[formula_key(phi)]

    def prevent_of(self, phi: Formula) -> Atom:
        return self.prevent[formula_key(phi)]

    def predicates(self) -> List[PredicateDef]:
        return [PredicateDef(a.predicate) for a in self.order]


def check_no_collision(domain: DomainDef, monitors: Monitors) -> None:
    """Fail if a minted monitoring atom names an existing predicate.

    The parser already rejects the reserved prefix, so this only fires on
    hand-built domains or compiled output read back with reserved names.
    """
    taken = set(domain.predicate_map)
    for a in monitors.order:
        if a.predicate in taken:
            raise UndeclaredSymbolError(
                f'monitoring atom {a.predicate} collides with a domain predicate (prefix {PREFIX!r} is reserved)')


def mint(constraints: Sequence[Constraint], prevent: bool = False, end: bool = False) -> Monitors:
    """hold for ST/SA; seen for the psi of SB and the phi of AO; prevent per AO phi; optional end."""
    m = Monitors()
    for c in constraints:
        if c.kind in (ConstraintKind.SOMETIME, ConstraintKind.SOMETIME_AFTER):
            m.hold[c.index] = m._add(Atom(f'{PREFIX}hold_{c.index}'))
        tracked = c.psi if c.kind is ConstraintKind.SOMETIME_BEFORE else (
            c.phi if c.kind is ConstraintKind.AT_MOST_ONCE else None)
        if tracked is not None:
            key = formula_key(tracked)
            if key not in m.seen:
                m.seen[key] = m._add(Atom(f'{PREFIX}seen_{len(m.seen)}'))
            if prevent and c.kind is ConstraintKind.AT_MOST_ONCE and key not in m.prevent:
                m.prevent[key] = m._add(Atom(m.seen[key].predicate.replace('seen', 'prevent')))
    if end:
        m.end = m._add(Atom(f'{PREFIX}end'))
    return m
