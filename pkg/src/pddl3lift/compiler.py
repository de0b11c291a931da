"""Mode dispatch for the three compilers."""

from __future__ import annotations

from .grounding import DEFAULT_GROUND_CAP
from .lcc import compile_lcc
from .model import DomainDef, ProblemDef
from .stats import MODES, CompiledTask
from .tcore import compile_ground_tcore, compile_lifted_tcore


def compile_task(domain: DomainDef, problem: ProblemDef, mode: str = 'lifted-tcore',
                 ground_cap: int = DEFAULT_GROUND_CAP) -> CompiledTask:
    if mode == 'lifted-tcore':
        return compile_lifted_tcore(domain, problem)
    if mode == 'lcc':
        return compile_lcc(domain, problem)
    if mode == 'ground-tcore':
        return compile_ground_tcore(domain, problem, ground_cap)
    raise ValueError(f'unknown mode {mode!r}; expected one of {", ".join(MODES)}')
