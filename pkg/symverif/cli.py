#!/usr/bin/env python
"""
Command line driver.

    symverif verify FILE [--fuzz N]
    symverif synth FILE
    symverif check-action FILE NAME
    symverif enumerate FILE NAME [--bound N]
    symverif fuzz FILE [-n N]
    symverif bench [NAME ...]

Exit codes: 0 valid, 1 invalid, 2 unknown, 3 usage or input error.
"""
import argparse
import logging
import sys
from collections import OrderedDict

from symverif.corpus import format_table, run_corpus
from symverif.errors import (BoundExceeded, NoCandidate, NotAnAction,
                             SolverTimeout, SynthTimeout, Unverifiable)
from symverif.groups.actions import check_action
from symverif.groups.presentation import format_word
from symverif.lang.syntax import count_assignments
from symverif.logic.fuzz import fuzz_soundness
from symverif.logic.rules import verify
from symverif.logic.triples import EXIT_CODES
from symverif.smt.obligations import get_context
from symverif.specfile import load_spec
from symverif.synth import synthesize_pre
from symverif.utils.generic import dump_json, load_config, timed

LOGGER = logging.getLogger(__name__)

EXIT_USAGE = 3

# elements listed by `enumerate` in text mode
SHOW_ELEMENTS = 16


class Report(object):
    """
    Outcome of a command

    Parameters
    ----------
    command : str
    data : OrderedDict
        Serialized with sorted keys by ``to_json``.
    exit_code : int
    lines : list of str
        Human readable form.
    """

    def __init__(self, command, data, exit_code, lines=None):
        self.command = command
        self.data = data
        self.exit_code = exit_code
        self.lines = list(lines or [])

    def to_json(self):
        data = OrderedDict([('command', self.command),
                            ('exit_code', self.exit_code)])
        data.update(self.data)
        return dump_json(data)

    def __str__(self):
        return '\n'.join(self.lines)


def _obligation_lines(records):
    lines = []
    for r in records:
        meta = r.obligation.meta
        lines.append('  {0} {1:<12} {2:<8} {3:<8} {4:.3f}s  {5}'.format(
            r.obligation.id, meta.get('rule', r.obligation.kind),
            r.status, r.method, r.seconds, meta.get('path', '')))
    return lines


def cmd_verify(args, config, progress=False):
    context = get_context(None, config)
    spec = load_spec(args.file, context)
    triple = spec.triple()
    data = OrderedDict([('file', args.file), ('name', triple.name)])
    with timed(data):
        verdict = verify(triple, context=context)
    data['verdict'] = verdict.to_dict()
    data['assignments'] = count_assignments(triple.program)
    data['obligations'] = [r.to_dict() for r in context.records]
    data['totals'] = OrderedDict([
        ('obligations', len(context.records)),
        ('solver_calls', sum(1 for r in context.records
                             if r.method == 'solver')),
        ('solver_seconds', round(sum(r.seconds for r in context.records
                                     if r.method == 'solver'), 4))])

    lines = ['{0}: {1}'.format(triple.name, verdict)]
    if verdict.trace is not None:
        lines.append(verdict.trace.format())
    if verdict.counterexample:
        lines.append('counterexample: ' + ', '.join(
            '{0} = {1}'.format(k, v) for k, v in verdict.counterexample.items()))
    lines.append('{0} obligations, {1} solver calls, {2:.3f}s'.format(
        data['totals']['obligations'], data['totals']['solver_calls'],
        data['seconds']))
    if args.verbose:
        lines.extend(_obligation_lines(context.records))

    code = verdict.exit_code
    if args.fuzz:
        report = fuzz_soundness(triple, args.fuzz, args.seed, config, progress)
        data['fuzz'] = report.to_dict()
        lines.append('fuzz ' + str(report))
        if not report.ok and verdict.is_valid:
            LOGGER.warning('Fuzzing contradicts the verdict of %s', triple.name)
    return Report('verify', data, code, lines)


def cmd_synth(args, config, progress=False):
    context = get_context(None, config)
    spec = load_spec(args.file, context)
    task = spec.synth_task()
    data = OrderedDict([('file', args.file), ('name', spec.name),
                        ('assign', '{0} := {1}'.format(task['assign'].var,
                                                       task['assign'].expr))])
    try:
        result = synthesize_pre(task['assign'], task['post'], task['signature'],
                                depth=task.get('depth'),
                                timeout=task.get('timeout'), context=context,
                                config=config, progress=progress)
    except (NoCandidate, SynthTimeout) as e:
        data['status'] = 'unknown'
        data['reason'] = str(e)
        return Report('synth', data, EXIT_CODES['unknown'],
                      ['{0}: no precondition ({1})'.format(spec.name, e)])
    data['status'] = result.verdict.status
    data.update(result.to_dict())
    lines = [str(result.pre), str(result.hom),
             '{0} candidates, {1} obligations, {2:.3f}s'.format(
                 result.stats['candidates'], result.stats['obligations'],
                 result.stats['seconds'])]
    return Report('synth', data, result.verdict.exit_code, lines)


def cmd_check_action(args, config, progress=False):
    context = get_context(None, config)
    spec = load_spec(args.file, context)
    action = spec.action(args.name)
    data = OrderedDict([('file', args.file), ('action', action.name),
                        ('group', str(action.group))])
    try:
        cert = check_action(action, context)
    except NotAnAction as e:
        data['status'] = 'invalid'
        data['relation'] = e.relation
        data['variable'] = e.variable
        return Report('check-action', data, EXIT_CODES['invalid'],
                      ['{0}: not an action: {1}'.format(action.name, e)])
    except (Unverifiable, SolverTimeout) as e:
        data['status'] = 'unknown'
        data['reason'] = str(e)
        return Report('check-action', data, EXIT_CODES['unknown'],
                      ['{0}: undecided: {1}'.format(action.name, e)])
    data['status'] = 'valid'
    data['certificate'] = cert.to_dict()
    lines = [str(action), '{0}: valid action ({1} relation checks)'.format(
        action.name, len(cert.entries))]
    return Report('check-action', data, EXIT_CODES['valid'], lines)


def cmd_enumerate(args, config, progress=False):
    spec = load_spec(args.file)
    group = spec.action(args.name).group
    bound = args.bound or config['max_elems']
    data = OrderedDict([('file', args.file), ('action', args.name),
                        ('group', str(group)), ('bound', bound)])
    try:
        table = group.enumerate(bound)
    except BoundExceeded as e:
        data['status'] = 'unknown'
        data['reason'] = str(e)
        return Report('enumerate', data, EXIT_CODES['unknown'], [str(e)])
    elements = [format_word(w) for w in table.elements]
    data['status'] = 'valid'
    data['size'] = table.size
    data['generator_orders'] = OrderedDict(
        (g, table.generator_order(g)) for g in group.generators)
    data['associative'] = table.check_associativity()
    data['elements'] = elements
    lines = ['{0}: {1} elements'.format(group.name, table.size),
             'generator orders: ' + ', '.join(
                 '{0}: {1}'.format(g, k)
                 for g, k in data['generator_orders'].items())]
    shown = elements[:SHOW_ELEMENTS]
    if len(elements) > SHOW_ELEMENTS:
        shown.append('...')
    lines.append('elements: ' + ', '.join(shown))
    code = EXIT_CODES['valid'] if data['associative'] else EXIT_CODES['invalid']
    return Report('enumerate', data, code, lines)


def cmd_fuzz(args, config, progress=False):
    spec = load_spec(args.file)
    triple = spec.triple()
    report = fuzz_soundness(triple, args.trials, args.seed, config, progress)
    data = OrderedDict([('file', args.file)])
    data.update(report.to_dict())
    code = EXIT_CODES['valid'] if report.ok else EXIT_CODES['invalid']
    return Report('fuzz', data, code, [str(report)])


def cmd_bench(args, config, progress=False):
    rows = run_corpus(args.names or None, config, args.fuzz, progress)
    mismatches = [row['name'] for row in rows
                  if row['expected'] is not None
                  and row['verdict'] != row['expected']]
    data = OrderedDict([('rows', rows), ('mismatches', mismatches)])
    lines = [format_table(rows)]
    if mismatches:
        lines.append('unexpected verdicts: ' + ', '.join(mismatches))
    code = EXIT_CODES['invalid'] if mismatches else EXIT_CODES['valid']
    return Report('bench', data, code, lines)


COMMANDS = OrderedDict([
    ('verify', cmd_verify),
    ('synth', cmd_synth),
    ('check-action', cmd_check_action),
    ('enumerate', cmd_enumerate),
    ('fuzz', cmd_fuzz),
    ('bench', cmd_bench),
])


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with the input error exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{0}: error: {1}\n'.format(self.prog, message))


def _common_flags():
    parser = ArgumentParser(add_help=False)
    parser.add_argument('--config', help='JSON file with configuration values',
                        default=None)
    parser.add_argument('--solver', help='SMT solver binary (z3, cvc5 or a path)',
                        default=None)
    parser.add_argument('--smt-timeout', type=float, default=None,
                        help='Seconds per solver call')
    parser.add_argument('--max-elems', type=int, default=None,
                        help='Largest group enumerated')
    parser.add_argument('--trig-axioms', action='store_true', default=None,
                        help='Assert the trigonometric identities in solver scripts')
    parser.add_argument('--keep-smt', default=None,
                        help='Directory for the emitted SMT-LIB scripts')
    parser.add_argument('--seed', type=int, default=None,
                        help='Seed of the random sampling')
    parser.add_argument('--depth', type=int, default=None,
                        help='Expression depth of the synthesizer')
    parser.add_argument('--synth-timeout', type=float, default=None,
                        help='Synthesis seconds per generator')
    parser.add_argument('--jobs', type=int, default=None,
                        help='Obligations discharged in parallel')
    parser.add_argument('--json', action='store_true', default=False,
                        help='Print the report as JSON')
    parser.add_argument('--verbose', '-v', action='store_true', default=False)
    parser.add_argument('--quiet', '-q', action='store_true', default=False)
    return parser


def build_parser():
    common = _common_flags()
    parser = ArgumentParser(
        prog='symverif',
        description='Verify and synthesize symmetry properties of programs')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('verify', parents=[common], help='Verify the triple of a spec file')
    p.add_argument('file', help='Spec file (.sym)')
    p.add_argument('--fuzz', type=int, default=0, metavar='N',
                   help='Also run N random trials')

    p = sub.add_parser('synth', parents=[common],
                       help='Synthesize the precondition of an assignment')
    p.add_argument('file', help='Spec file (.sym) with a synth section')

    p = sub.add_parser('check-action', parents=[common],
                       help='Check that an action respects the group relations')
    p.add_argument('file', help='Spec file (.sym)')
    p.add_argument('name', help='Action name')

    p = sub.add_parser('enumerate', parents=[common],
                       help='Enumerate the group of an action')
    p.add_argument('file', help='Spec file (.sym)')
    p.add_argument('name', help='Action name')
    p.add_argument('--bound', type=int, default=None,
                   help='Largest group order accepted (default --max-elems)')

    p = sub.add_parser('fuzz', parents=[common],
                       help='Test the triple of a spec file on random inputs')
    p.add_argument('file', help='Spec file (.sym)')
    p.add_argument('--trials', '-n', type=int, default=None)

    p = sub.add_parser('bench', parents=[common], help='Verify the benchmark corpus')
    p.add_argument('names', nargs='*',
                   help='Benchmarks (default: the evaluation table)')
    p.add_argument('--fuzz', type=int, default=0, metavar='N',
                   help='Also run N random trials per benchmark')
    return parser


def configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet or args.json:
        level = logging.WARNING
    logging.basicConfig(level=level)
    if not args.json and not LOGGER.handlers:
        LOGGER.addHandler(logging.StreamHandler(sys.stdout))
        LOGGER.propagate = False
    return level


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = configure_logging(args)
    progress = not args.json and level <= logging.INFO

    try:
        config = load_config(args.config, solver=args.solver,
                             smt_timeout=args.smt_timeout,
                             max_elems=args.max_elems,
                             trig_axioms=args.trig_axioms,
                             keep_smt=args.keep_smt, seed=args.seed,
                             depth=args.depth, synth_timeout=args.synth_timeout,
                             jobs=args.jobs)
        report = COMMANDS[args.command](args, config, progress)
    except (ValueError, KeyError, OSError) as e:
        LOGGER.error('%s', e.args[0] if isinstance(e, KeyError) and e.args
                     else e)
        return EXIT_USAGE

    if args.json:
        print(report.to_json())
    else:
        print(report)
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
