"""Plan-set comparison between a problem and its compilations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..compiler import compile_task
from ..grounding import DEFAULT_GROUND_CAP
from ..model import DomainDef, ProblemDef
from ..stats import CompiledTask
from .plans import Plan, PlanSet, enumerate_valid_plans


@dataclass
class EquivalenceReport:
    mode: str
    k: int
    n_original: int = 0
    n_compiled: int = 0
    missing: List[Plan] = field(default_factory=list)   # valid originally, rejected after compilation
    extra: List[Plan] = field(default_factory=list)     # accepted after compilation only
    without_fin: List[Plan] = field(default_factory=list)
    unsolvable_detected: bool = False

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.without_fin)

    def summary(self) -> str:
        head = f'{self.mode} k={self.k}: {self.n_original} original plans, {self.n_compiled} compiled plans'
        if self.ok:
            return head + ', sets agree'
        parts = [head]
        for label, plans in (('missing', self.missing), ('extra', self.extra), ('not ending in fin', self.without_fin)):
            if plans:
                parts.append(f'  {label}: ' + '; '.join(' '.join(p) for p in plans[:3]))
        return '\n'.join(parts)


def compiled_plans(task: CompiledTask, k: int, cap: int = DEFAULT_GROUND_CAP) -> PlanSet:
    relabel = None
    if task.action_map is not None:
        amap = task.action_map
        relabel = lambda g: '(' + ' '.join((amap[g.name][0],) + amap[g.name][1]) + ')'  # noqa: E731
    return enumerate_valid_plans(task.domain, task.problem, k, cap, relabel)


def check_compiler_equivalence(domain: DomainDef, problem: ProblemDef, mode: str, k: int,
                               cap: int = DEFAULT_GROUND_CAP, original: Optional[PlanSet] = None,
                               task: Optional[CompiledTask] = None) -> EquivalenceReport:
    """Valid plans up to length ``k`` must coincide; with ``lcc`` the compiled
    plans are searched up to ``k + 1`` and must be exactly the originals
    followed by ``fin``."""
    original = original or enumerate_valid_plans(domain, problem, k, cap)
    task = task or compile_task(domain, problem, mode, cap)
    rep = EquivalenceReport(mode, k, n_original=len(original), unsolvable_detected=task.unsolvable is not None)
    if mode == 'lcc':
        fin = '(' + task.domain.actions[-1].name + ')'
        comp = compiled_plans(task, k + 1, cap)
        rep.n_compiled = len(comp)
        stripped = set()
        for p in comp.plans:
            if not p or p[-1] != fin:
                rep.without_fin.append(p)
            else:
                stripped.add(p[:-1])
        got = stripped
    else:
        comp = compiled_plans(task, k, cap)
        rep.n_compiled = len(comp)
        got = set(comp.plans)
    want = set(original.plans)
    rep.missing = sorted(want - got)
    rep.extra = sorted(got - want)
    rep.without_fin.sort()
    return rep
