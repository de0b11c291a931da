"""Exhaustive enumeration of valid plans up to a length bound."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from ..grounding import DEFAULT_GROUND_CAP, ground
from ..model import ConstraintKind, DomainDef, ProblemDef
from ..semantics import GroundAction
from .fastmodel import BitIndex, FastAction, compile_action, compile_scalar

K = ConstraintKind
Plan = Tuple[str, ...]


@dataclass(frozen=True)
class PlanSet:
    max_length: int
    plans: FrozenSet[Plan] = field(default_factory=frozenset)

    def __len__(self):
        return len(self.plans)

    def __contains__(self, plan):
        return tuple(plan) in self.plans

    def sorted(self) -> List[Plan]:
        return sorted(self.plans, key=lambda p: (len(p), p))


@dataclass
class _Tracker:
    kind: ConstraintKind
    phi: Callable[[int], bool]
    psi: Optional[Callable[[int], bool]]

    def start(self):
        return {K.ALWAYS: 0, K.SOMETIME: 0, K.AT_MOST_ONCE: 0, K.SOMETIME_BEFORE: 0, K.SOMETIME_AFTER: 0}[self.kind]

    def step(self, st: int, s: int) -> Optional[int]:
        """Advance over state ``s``; ``None`` once the constraint can no longer hold."""
        k = self.kind
        if k is K.ALWAYS:
            return 0 if self.phi(s) else None
        if k is K.SOMETIME:
            return 1 if st or self.phi(s) else 0
        if k is K.AT_MOST_ONCE:
            # bit 0: phi held in previous state, bit 1: an interval has started
            v = self.phi(s)
            if v and not st & 1:
                if st & 2:
                    return None
                st |= 2
            return (st & 2) | (1 if v else 0)
        if k is K.SOMETIME_BEFORE:
            if self.phi(s) and not st:
                return None
            return 1 if st or self.psi(s) else 0
        if self.psi(s):
            return 0
        return 1 if self.phi(s) else st

    def final(self, st: int) -> bool:
        if self.kind is K.SOMETIME:
            return st == 1
        if self.kind is K.SOMETIME_AFTER:
            return st == 0
        return True


@dataclass
class FastProblem:
    index: BitIndex
    actions: List[FastAction]
    init: int
    goal: Callable[[int], bool]
    trackers: List[_Tracker]

    def step(self, tr: Tuple[int, ...], s: int) -> Optional[Tuple[int, ...]]:
        out = []
        for t, st in zip(self.trackers, tr):
            n = t.step(st, s)
            if n is None:
                return None
            out.append(n)
        return tuple(out)

    def initial(self) -> Optional[Tuple[int, ...]]:
        return self.step(tuple(t.start() for t in self.trackers), self.init)

    def final_ok(self, s: int, tr: Tuple[int, ...]) -> bool:
        return self.goal(s) and all(t.final(st) for t, st in zip(self.trackers, tr))


def fast_problem(domain: DomainDef, problem: ProblemDef, cap: int = DEFAULT_GROUND_CAP,
                 relabel: Optional[Callable[[GroundAction], str]] = None) -> FastProblem:
    gp = ground(domain, problem, cap)
    index = BitIndex(gp.atoms)
    label = relabel or str
    actions = [compile_action(label(g), g.precondition, g.effects, index) for g in gp.actions]
    trackers = [_Tracker(c.kind, compile_scalar(c.phi, index),
                         None if c.psi is None else compile_scalar(c.psi, index)) for c in gp.constraints]
    return FastProblem(index, actions, index.encode(gp.init), compile_scalar(gp.goal, index), trackers)


def enumerate_fast(fp: FastProblem, k: int) -> PlanSet:
    memo: Dict[Tuple[int, Tuple[int, ...], int], FrozenSet[Plan]] = {}

    def suffixes(s: int, tr: Tuple[int, ...], d: int) -> FrozenSet[Plan]:
        key = (s, tr, d)
        got = memo.get(key)
        if got is not None:
            return got
        out = set()
        if fp.final_ok(s, tr):
            out.add(())
        if d > 0:
            for act in fp.actions:
                if not act.pre(s):
                    continue
                s2 = act.succ(s)
                tr2 = fp.step(tr, s2)
                if tr2 is None:
                    continue
                for suf in suffixes(s2, tr2, d - 1):
                    out.add((act.label,) + suf)
        got = frozenset(out)
        memo[key] = got
        return got

    tr0 = fp.initial()
    if tr0 is None:
        return PlanSet(k, frozenset())
    if k + 50 > sys.getrecursionlimit():
        sys.setrecursionlimit(k + 100)
    return PlanSet(k, suffixes(fp.init, tr0, k))


def enumerate_valid_plans(domain: DomainDef, problem: ProblemDef, k: int, cap: int = DEFAULT_GROUND_CAP,
                          relabel: Optional[Callable[[GroundAction], str]] = None) -> PlanSet:
    """Every valid plan of length at most ``k``, as tuples of ``(name arg ...)`` strings.

    Search is depth-first over ground actions, skipping inapplicable ones and
    prefixes that already violate a constraint; results for a repeated
    (state, constraint status, remaining depth) are reused.
    """
    return enumerate_fast(fast_problem(domain, problem, cap, relabel), k)
