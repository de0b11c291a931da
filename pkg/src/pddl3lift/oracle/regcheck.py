"""Exhaustive check that regression through a schema matches progression.

For every schema ``a``, closed formula ``phi``, argument tuple and state
``s`` in which the ground action is applicable, the regressed formula
instantiated with the arguments must hold in ``s`` exactly when ``phi``
holds in the successor state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..errors import ResourceLimitError
from ..logic import Formula, apply_substitution, constants_of
from ..model import ActionSchema, DomainDef, Universe
from ..regression import lifted_regression
from ..semantics import instantiate
from .fastmodel import MAX_VECTOR_ATOMS, BitIndex, VecStates, ground_qf, herbrand_base


@dataclass
class Counterexample:
    action: str
    formula: str
    regressed: str
    state: List[str]
    regressed_value: bool
    successor_value: bool

    def __str__(self) -> str:
        return (f'{self.action} phi={self.formula}: R={self.regressed} is {self.regressed_value} in '
                f'{{{" ".join(self.state)}}} but phi is {self.successor_value} afterwards')


@dataclass
class RegressionReport:
    pairs_checked: int = 0
    instances_checked: int = 0
    states: int = 0
    failures: int = 0
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def check_regression_exhaustive(domain: DomainDef, universe: Universe, formulas: Sequence[Formula],
                 regress: Optional[Callable[[Formula, ActionSchema], Formula]] = None,
                 max_counterexamples: int = 5) -> RegressionReport:
    """Compare both sides on all states of the Herbrand base of ``universe``."""
    regress = regress or partial(lifted_regression, types=domain.types)
    index = BitIndex(herbrand_base(domain, universe))
    vs = VecStates(index)
    report = RegressionReport(states=len(vs.S))
    ground_phis = [ground_qf(phi, universe) for phi in formulas]
    for a in domain.actions:
        regressed = [regress(phi, a) for phi in formulas]
        report.pairs_checked += len(formulas)
        for args in universe.tuples(a.params):
            g = instantiate(a, args, universe)
            pre = vs.eval(ground_qf(g.precondition, universe))
            if not pre.any():
                continue
            report.instances_checked += 1
            succ = _successors(vs, g, universe)
            after = VecStates(index, succ)
            theta = dict(zip(a.params, args))
            for phi, gphi, r in zip(formulas, ground_phis, regressed):
                lhs = vs.eval(ground_qf(apply_substitution(r, theta), universe))
                rhs = after.eval(gphi)
                bad = np.flatnonzero(pre & (lhs != rhs))
                if not bad.size:
                    continue
                report.failures += int(bad.size)
                if len(report.counterexamples) < max_counterexamples:
                    i = int(bad[0])
                    report.counterexamples.append(Counterexample(
                        str(g), str(phi), str(r), sorted(map(str, index.decode(int(vs.S[i])))),
                        bool(lhs[i]), bool(rhs[i])))
    return report


def _successors(vs: VecStates, g, universe: Universe) -> np.ndarray:
    index = vs.index
    adds = np.zeros(len(vs.S), dtype=np.int64)
    dels = np.zeros(len(vs.S), dtype=np.int64)
    for cond, lit in g.effects:
        c = vs.eval(ground_qf(cond, universe))
        bit = np.int64(1 << index.pos[lit.atom])
        if lit.positive:
            adds |= np.where(c, bit, 0)
        else:
            dels |= np.where(c, bit, 0)
    return (vs.S & ~dels) | adds


def sample_formulas(domain: DomainDef, universe: Universe, n: int, seed: int = 0, max_qdepth: int = 1
                    ) -> List[Formula]:
    """Every ground atom plus ``n`` random closed formulas."""
    from .fuzz import random_closed_formula  # local import: fuzz depends on this module's siblings
    rng = random.Random(seed)
    out: List[Formula] = list(herbrand_base(domain, universe))
    for _ in range(n):
        out.append(random_closed_formula(rng, domain, universe, max_qdepth))
    return out


def shrink_universe(domain: DomainDef, universe: Universe, max_atoms: int = MAX_VECTOR_ATOMS) -> Universe:
    """Drop objects from the end until the Herbrand base fits, keeping every
    type that had an object non-empty."""
    objects = dict(universe.objects)
    keep = set(domain.constants)

    def nonempty(objs):
        return {t for t in domain.types.names if any(domain.types.is_subtype(ot, t) for ot in objs.values())}

    needed = nonempty(objects)
    for name in reversed(list(objects)):
        if len(herbrand_base(domain, Universe(objects, domain.types))) <= max_atoms:
            break
        if name in keep:
            continue
        trial = {o: t for o, t in objects.items() if o != name}
        if nonempty(trial) >= needed:
            objects = trial
    small = Universe(objects, domain.types)
    if len(herbrand_base(domain, small)) > max_atoms:
        raise ResourceLimitError(f'cannot shrink the object set below {max_atoms} ground atoms')
    return small


def formulas_within(formulas: Sequence[Formula], universe: Universe) -> List[Formula]:
    """The formulas that only mention objects of ``universe``."""
    return [f for f in formulas if all(c.name in universe.objects for c in constants_of(f))]
