"""Command-line front end.

Exit codes: 0 success, 1 negative outcome (unsolvable, invalid plan,
counterexample), 2 malformed input, 3 unsupported feature, 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from functools import partial
from pathlib import Path
from typing import List, Optional

from .compiler import compile_task
from .errors import (
    PDDLSyntaxError, PlanFormatError, ResourceLimitError, TypeMismatchError, UndeclaredSymbolError,
    UnsupportedFeatureError,
)
from .grounding import DEFAULT_GROUND_CAP
from .logic import simplify, to_pddl
from .model import promote_constants
from .parser import parse_domain, parse_formula, parse_plan, parse_problem
from .printer import domain_to_pddl, problem_to_pddl
from .regression import lifted_regression
from .semantics import validate_plan
from .stats import MODES
from .tcore import compile_lifted_tcore, ground_schemas

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_RESOURCE = 0, 1, 2, 3, 4

log = logging.getLogger('pddl3lift')


def _read(path: str) -> str:
    return Path(path).read_text(encoding='utf-8')


def _load(args, allow_reserved: bool = False):
    domain = parse_domain(_read(args.domain), allow_reserved=allow_reserved)
    problem = parse_problem(_read(args.problem), domain)
    return domain, problem


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding='utf-8')


def cmd_compile(args) -> int:
    domain, problem = _load(args)
    task = compile_task(domain, problem, args.mode, args.ground_cap)
    if args.no_timing:
        task.stats.wall_time_seconds = 0.0
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = Path(args.problem).stem
    _write(out / f'{name}-compiled-domain.pddl', domain_to_pddl(task.domain))
    _write(out / f'{name}-compiled-problem.pddl', problem_to_pddl(task.problem))
    _write(out / 'stats.json', task.stats.dumps())
    print(f'{task.mode}: {task.stats.n_actions_in} -> {task.stats.n_actions_out} actions, '
          f'{task.stats.n_monitoring_atoms} monitoring atoms; wrote {out}')
    if task.unsolvable is not None:
        print(f'unsolvable: {task.unsolvable} is violated in the initial state', file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_validate(args) -> int:
    domain, problem = _load(args, allow_reserved=True)
    plan = parse_plan(_read(args.plan))
    verdict = validate_plan(domain, problem, plan)
    print(verdict)
    return EXIT_OK if verdict.valid else EXIT_NEGATIVE


def cmd_check(args) -> int:
    from .oracle import check_compiler_equivalence, check_regression_exhaustive, enumerate_valid_plans, sample_formulas
    from .oracle.regcheck import formulas_within, shrink_universe
    from .oracle.mutants import MUTANTS

    domain, problem = _load(args)
    mutant = None
    if args.mutant:
        mutant = partial(MUTANTS[args.mutant], types=domain.types)
    original = enumerate_valid_plans(domain, problem, args.max_len, args.ground_cap)
    failed = False
    report = {'k': args.max_len, 'original_plans': len(original), 'modes': {}}
    say = (lambda *_: None) if args.json else print
    for mode in args.mode:
        task = None
        if mutant is not None and mode == 'lifted-tcore':
            task = compile_lifted_tcore(domain, problem, regress=mutant)
        rep = check_compiler_equivalence(domain, problem, mode, args.max_len, args.ground_cap, original, task)
        say(rep.summary())
        failed |= not rep.ok
        entry = report['modes'][mode] = {
            'ok': rep.ok, 'compiled_plans': rep.n_compiled,
            'missing': [' '.join(p) for p in rep.missing], 'extra': [' '.join(p) for p in rep.extra],
            'without_fin': [' '.join(p) for p in rep.without_fin]}
        if mode == 'lifted-tcore':
            try:
                universe = shrink_universe(domain, problem.universe(domain))
                formulas = sample_formulas(domain, universe, args.formulas, seed=args.seed)
                formulas += formulas_within([f for c in problem.constraints for f in c.formulas], universe)
                lem = check_regression_exhaustive(domain, universe, formulas, regress=mutant)
            except ResourceLimitError as e:
                say(f'regression check skipped: {e}')
                entry['regression_check'] = None
                continue
            say(f'regression check on {len(universe.objects)} objects: {lem.pairs_checked} formula/schema pairs, '
                f'{lem.instances_checked} ground actions, {lem.states} states, {lem.failures} failures')
            for cex in lem.counterexamples:
                say(f'  {cex}')
            entry['regression_check'] = {'objects': sorted(universe.objects), 'pairs': lem.pairs_checked,
                                         'failures': lem.failures,
                                         'counterexamples': [str(c) for c in lem.counterexamples]}
            failed |= not lem.ok
    report['ok'] = not failed
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_NEGATIVE if failed else EXIT_OK


def cmd_regress(args) -> int:
    domain = parse_domain(_read(args.domain))
    objects = {}
    if args.problem:
        objects = dict(parse_problem(_read(args.problem), domain).objects)
    phi = parse_formula(args.formula, domain, objects, lenient=True)
    action = domain.action(args.action.lower())
    print(to_pddl(simplify(lifted_regression(phi, action, domain.types))))
    return EXIT_OK


def cmd_ground(args) -> int:
    domain, problem = _load(args)
    schemas, _, gprob = ground_schemas(domain, problem, args.ground_cap)
    gdomain = domain.with_actions(schemas)
    gprob = type(gprob)(gprob.name, gdomain.name, gprob.objects, gprob.init, gprob.goal, gprob.constraints)
    gdomain, gprob = promote_constants(gdomain, gprob)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        name = Path(args.problem).stem
        _write(out / f'{name}-ground-domain.pddl', domain_to_pddl(gdomain))
        _write(out / f'{name}-ground-problem.pddl', problem_to_pddl(gprob))
        print(f'{len(schemas)} ground actions; wrote {out}')
    else:
        sys.stdout.write(domain_to_pddl(gdomain))
        sys.stdout.write(problem_to_pddl(gprob))
    return EXIT_OK


def cmd_stats(args) -> int:
    domain, problem = _load(args)
    rows = []
    for mode in args.mode:
        task = compile_task(domain, problem, mode, args.ground_cap)
        if args.no_timing:
            task.stats.wall_time_seconds = 0.0
        rows.append(task.stats.to_json())
    print(json.dumps(rows, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='pddl3lift', description='Compile PDDL3 trajectory constraints away.')
    sub = ap.add_subparsers(dest='command', required=True)

    def task_args(p):
        p.add_argument('domain')
        p.add_argument('problem')

    def cap_arg(p):
        p.add_argument('--ground-cap', type=int, default=DEFAULT_GROUND_CAP,
                       help='maximum number of ground actions (default %(default)s)')

    p = sub.add_parser('compile', help='compile constraints away and write PDDL plus stats.json')
    task_args(p)
    p.add_argument('--mode', choices=MODES, default='lifted-tcore')
    p.add_argument('--out-dir', '-o', default='.')
    p.add_argument('--no-timing', action='store_true', help='write 0 for wall_time_seconds')
    cap_arg(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser('validate', help='check a plan against goal and constraints')
    task_args(p)
    p.add_argument('plan')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('check', help='compare valid plan sets before and after compilation')
    task_args(p)
    p.add_argument('--mode', choices=MODES, action='append',
                   help='repeatable; default: all modes')
    p.add_argument('--max-len', '-k', type=int, default=4)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--formulas', type=int, default=30, help='random formulas for the regression check')
    p.add_argument('--mutant', choices=['drop-persistence'], help='use a deliberately broken regression')
    p.add_argument('--json', action='store_true', help='print a JSON report instead of text')
    cap_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('regress', help='print the lifted regression of a formula through an action')
    p.add_argument('domain')
    p.add_argument('action')
    p.add_argument('formula')
    p.add_argument('--problem', help='problem file supplying object types')
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser('ground', help='write the grounded task as PDDL')
    task_args(p)
    p.add_argument('--out-dir', '-o')
    cap_arg(p)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser('stats', help='print compilation statistics as JSON')
    task_args(p)
    p.add_argument('--mode', choices=MODES, action='append', help='repeatable; default: all modes')
    p.add_argument('--no-timing', action='store_true')
    cap_arg(p)
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, 'mode', None) is None and args.command in ('check', 'stats'):
        args.mode = list(MODES)
    logging.basicConfig(level=logging.WARNING, format='%(levelname)s: %(message)s')
    try:
        return args.func(args)
    except (PDDLSyntaxError, PlanFormatError, UndeclaredSymbolError, TypeMismatchError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedFeatureError as e:
        print(f'unsupported: {e}', file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ResourceLimitError as e:
        print(f'resource limit: {e}', file=sys.stderr)
        return EXIT_RESOURCE
    except (OSError, KeyError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
