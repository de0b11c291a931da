"""Ground problems compiled to integer bitmask states.

Ground, quantifier-free formulas are turned into Python source and
evaluated either on a single ``int`` state or, through numpy, on an array
holding many states at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ResourceLimitError
from ..logic import And, Atom, Constant, Equals, Formula, Implies, Not, Or, Truth, simplify
from ..model import DomainDef, Universe
from ..grounding import expand_quantifiers

MAX_VECTOR_ATOMS = 20


class BitIndex:
    """Bijection between a fixed list of ground atoms and bit positions."""

    def __init__(self, atoms: Iterable[Atom]):
        self.atoms: List[Atom] = sorted(set(atoms), key=str)
        self.pos: Dict[Atom, int] = {a: i for i, a in enumerate(self.atoms)}

    def __len__(self):
        return len(self.atoms)

    def encode(self, state: Iterable[Atom]) -> int:
        s = 0
        for a in state:
            s |= 1 << self.pos[a]
        return s

    def decode(self, s: int) -> FrozenSet[Atom]:
        return frozenset(a for i, a in enumerate(self.atoms) if s >> i & 1)


def herbrand_base(domain: DomainDef, universe: Universe) -> List[Atom]:
    out = []
    for p in domain.predicates:
        for tup in itertools.product(*(universe.of_type(v.type) for v in p.params)):
            out.append(Atom(p.name, tuple(tup)))
    return out


def ground_qf(phi: Formula, universe: Universe) -> Formula:
    return simplify(expand_quantifiers(phi, universe))


def _src(phi: Formula, index: BitIndex, vec: bool) -> str:
    if isinstance(phi, Truth):
        return ('TRUE' if phi.value else 'FALSE') if vec else ('True' if phi.value else 'False')
    if isinstance(phi, Atom):
        i = index.pos.get(phi)
        if i is None:
            return 'FALSE' if vec else 'False'
        return f'B[{i}]' if vec else f'(s >> {i} & 1)'
    if isinstance(phi, Equals):
        if not (isinstance(phi.lhs, Constant) and isinstance(phi.rhs, Constant)):
            raise ValueError(f'non-ground equality {phi}')
        v = phi.lhs.name == phi.rhs.name
        return _src(Truth(v), index, vec)
    if isinstance(phi, Not):
        return f'(~{_src(phi.arg, index, vec)})' if vec else f'(not {_src(phi.arg, index, vec)})'
    if isinstance(phi, (And, Or)):
        op = (' & ' if isinstance(phi, And) else ' | ') if vec else (' and ' if isinstance(phi, And) else ' or ')
        return '(' + op.join(_src(a, index, vec) for a in phi.args) + ')'
    if isinstance(phi, Implies):
        if vec:
            return f'((~{_src(phi.lhs, index, vec)}) | {_src(phi.rhs, index, vec)})'
        return f'((not {_src(phi.lhs, index, vec)}) or {_src(phi.rhs, index, vec)})'
    raise ValueError(f'formula is not ground and quantifier-free: {phi}')


def compile_scalar(phi: Formula, index: BitIndex) -> Callable[[int], bool]:
    code = f'lambda s: bool({_src(phi, index, False)})'
    return eval(code, {})  # noqa: S307 - generated from our own AST


class VecStates:
    """All 2^m states of an m-atom index, with per-atom truth columns."""

    def __init__(self, index: BitIndex, states: Optional[np.ndarray] = None):
        m = len(index)
        if states is None:
            if m > MAX_VECTOR_ATOMS:
                raise ResourceLimitError(f'{m} ground atoms is too many for exhaustive enumeration')
            states = np.arange(1 << m, dtype=np.int64)
        self.index = index
        self.S = states
        self._cols: Dict[int, np.ndarray] = {}

    def column(self, i: int) -> np.ndarray:
        col = self._cols.get(i)
        if col is None:
            col = ((self.S >> i) & 1).astype(bool)
            self._cols[i] = col
        return col

    def eval(self, phi: Formula) -> np.ndarray:
        src = _src(phi, self.index, True)
        n = len(self.S)
        cols = _LazyCols(self)
        v = eval(src, {'B': cols, 'TRUE': np.ones(n, bool), 'FALSE': np.zeros(n, bool)})  # noqa: S307
        return np.broadcast_to(v, (n,)) if np.ndim(v) == 0 else v


class _LazyCols:
    def __init__(self, vs: VecStates):
        self.vs = vs

    def __getitem__(self, i):
        return self.vs.column(i)


@dataclass
class FastAction:
    label: str
    pre: Callable[[int], bool]
    succ: Callable[[int], int]


def compile_action(label: str, pre: Formula, effects: Sequence[Tuple[Formula, object]], index: BitIndex
                   ) -> FastAction:
    """``effects`` holds (ground condition, Literal) pairs with quantifier-free conditions."""
    add0 = del0 = 0
    lines = []
    for cond, lit in effects:
        bit = 1 << index.pos[lit.atom]
        if cond == Truth(True):
            if lit.positive:
                add0 |= bit
            else:
                del0 |= bit
            continue
        target = 'a' if lit.positive else 'd'
        lines.append(f'    if {_src(cond, index, False)}: {target} |= {bit}')
    body = '\n'.join(lines)
    src = f'def succ(s):\n    a = {add0}\n    d = {del0}\n{body}\n    return (s & ~d) | a\n'
    ns: Dict = {}
    exec(src, ns)  # noqa: S102 - generated from our own AST
    return FastAction(label, compile_scalar(pre, index), ns['succ'])
