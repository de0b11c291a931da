"""Compiled-task container and size statistics."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Dict, Optional, Tuple

from .logic import quantifier_depth
from .model import Constraint, DomainDef, ProblemDef

STATS_SCHEMA_VERSION = 1

MODES = ('lifted-tcore', 'lcc', 'ground-tcore')


@dataclass
class CompileStats:
    mode: str
    n_actions_in: int = 0
    n_actions_out: int = 0
    n_effect_items_in: int = 0
    n_effect_items_out: int = 0
    n_preconds_added: int = 0
    n_monitoring_atoms: int = 0
    n_constraints: int = 0
    n_predicates: int = 0
    n_actions: int = 0
    max_atom_arity: int = 0
    max_quantifier_depth: int = 0
    wall_time_seconds: float = 0.0
    op_count: int = 0

    def to_json(self) -> Dict:
        d = asdict(self)
        d['schema'] = STATS_SCHEMA_VERSION
        # short aliases used in scaling experiments
        d.update(n_c=self.n_constraints, n_f=self.n_predicates, n_a=self.n_actions,
                 n_k=self.max_atom_arity, b=self.max_quantifier_depth)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + '\n'


def input_stats(mode: str, domain: DomainDef, problem: ProblemDef) -> CompileStats:
    """Fill in the input-side counts."""
    formulas = [a.precondition for a in domain.actions]
    formulas += [e.condition for a in domain.actions for e in a.effects]
    formulas += [f for c in problem.constraints for f in c.formulas] + [problem.goal]
    return CompileStats(
        mode=mode,
        n_actions_in=len(domain.actions),
        n_effect_items_in=sum(len(a.effects) for a in domain.actions),
        n_constraints=len(problem.constraints),
        n_predicates=len(domain.predicates),
        n_actions=len(domain.actions),
        max_atom_arity=max((p.arity for p in domain.predicates), default=0),
        max_quantifier_depth=max((quantifier_depth(f) for f in formulas), default=0),
    )


def stats_schema() -> Dict:
    return json.loads(resources.files(__package__).joinpath('stats_schema.json').read_text())


@dataclass
class CompiledTask:
    domain: DomainDef
    problem: ProblemDef
    mode: str
    stats: CompileStats
    unsolvable: Optional[Constraint] = None
    # compiled action name -> (original schema name, argument names); ground mode only
    action_map: Optional[Dict[str, Tuple[str, Tuple[str, ...]]]] = None
    monitors: Dict[str, str] = field(default_factory=dict)
