#!/usr/bin/env python
"""
The benchmark programs shipped with the package.

Most benchmarks are ``.sym`` files in ``assets/corpus``; the scaled
families (``voting<N>`` and ``d<N>_car``) are generated on demand by
``voting_program`` and ``dihedral_program`` unless a file of that name
exists.
"""
import glob
import logging
import os
import re
from collections import OrderedDict

import pkg_resources
from tqdm import tqdm

from symverif.groups.presentation import word_letters
from symverif.lang.syntax import count_assignments
from symverif.logic.fuzz import fuzz_soundness
from symverif.logic.rules import verify
from symverif.smt.obligations import get_context
from symverif.specfile import parse_spec
from symverif.utils.generic import get_config, timed

LOGGER = logging.getLogger(__name__)

CORPUS_DIR = pkg_resources.resource_filename('symverif', 'assets/corpus')

# evaluation table: file name -> program
BENCHMARKS = OrderedDict([
    ('car_translation', 'Car Translation'),
    ('car_translation2', 'Car Translation 2'),
    ('d4_car', 'D4 Car'),
    ('d6_car', 'D6 Car'),
    ('lorenz', 'Lorenz System'),
    ('gravity', 'Gravitational Attractor'),
    ('aac', 'AAC Flow'),
    ('voting2', 'Voting System 2 Voters'),
    ('voting20', 'Voting System 20 Voters'),
])

EXTRA = OrderedDict([
    ('abc', 'ABC Flow'),
    ('abc2', 'ABC Flow (second action)'),
    ('aac_buggy', 'AAC Flow (misprinted z)'),
])

SCALING = ['d4_car', 'd8_car', 'd32_car', 'd512_car', 'd1024_car']

# expected verdicts
EXPECTED = dict((name, 'valid') for name in
                list(BENCHMARKS) + list(EXTRA) + SCALING)
EXPECTED['aac_buggy'] = 'invalid'

VOTING_RE = re.compile(r'^voting(\d+)$')
DIHEDRAL_RE = re.compile(r'^d(\d+)_car$')

# larger presentations are not enumerated for the table
TABLE_GENERATORS = 8


def voting_program(n):
    """
    Spec file text of the two candidate election with `n` voters

    Votes are 0 (first candidate) or 1 (second candidate); the triple
    states that permuting the votes does not change the winner.
    """
    if n < 2:
        raise ValueError('Need at least two voters, got {0}'.format(n))
    votes = ['v{0}'.format(i) for i in range(1, n + 1)]
    lines = ['# generated: election with {0} voters'.format(n),
             'vars:',
             '    var {0}: Int'.format(', '.join(votes)),
             '    var count1, count2, winner: Int',
             '    var b: Bool',
             '',
             'program:']
    for count, vote in (('count1', 0), ('count2', 1)):
        for v in votes:
            lines.append('    {0} := {1} == {2} ? {0} + 1 : {0};'.format(
                count, v, vote))
    lines += ['    b := count1 > count2;',
              '    if b then { winner := 0 } else { winner := 1 }',
              '',
              'action perm:',
              '    group: symmetric {0}'.format(n),
              '    vars: {0}'.format(', '.join(votes))]
    for i in range(1, n):
        lines.append('    act t{0}: v{0} -> v{1}; v{1} -> v{0}'.format(i, i + 1))
    lines += ['',
              'action win:',
              '    group: trivial',
              '    vars: winner',
              '',
              'triple:',
              '    pre: perm',
              '    post: win',
              '    hom: e_star',
              '']
    return '\n'.join(lines)


def _turn(n):
    """Modulus of the heading and its step for a rotation by 1/n turn"""
    modulus = 360 if 360 % n == 0 else n
    return modulus, modulus // n


def dihedral_program(n):
    """
    Spec file text of the car driving straight, symmetric under D_n

    The heading ``theta`` counts degrees when n divides 360 and
    ``n``-th turns otherwise; the rotation of D_n turns the position and
    the heading by 1/n turn, the reflection mirrors both.
    """
    if n < 3:
        raise ValueError('Dihedral groups need n >= 3, got {0}'.format(n))
    modulus, step = _turn(n)
    c, s = 'cos(2*pi/{0})'.format(n), 'sin(2*pi/{0})'.format(n)
    angle = '2 * pi * theta / {0}'.format(modulus)
    lines = ['# generated: car driving straight, headings in 1/{0} turns'
             .format(modulus),
             'vars:',
             '    param T, a: Real',
             '    param dt: RealOpen01',
             '    var x, y, v, t: Real',
             '    var theta: IntMod {0}'.format(modulus),
             '    var b: Bool',
             '',
             'program:',
             '    t := 0;',
             '    b := t < T;',
             '    while b do {',
             '        x := v * cos({0}) * dt + x;'.format(angle),
             '        y := v * sin({0}) * dt + y;'.format(angle),
             '        v := a * dt + v;',
             '        t := t + dt;',
             '        b := t < T',
             '    }',
             '',
             'action turn:',
             '    group: dihedral {0}'.format(n),
             '    vars: x, y, theta',
             '    act r: x -> {0}*x - {1}*y; y -> {1}*x + {0}*y; '
             'theta -> theta + {2}'.format(c, s, step),
             '    act s: y -> -y; theta -> -theta',
             '',
             'triple:',
             '    pre: turn',
             '    post: turn',
             '    hom: eq',
             '']
    return '\n'.join(lines)


def corpus_files():
    return sorted(glob.glob(os.path.join(CORPUS_DIR, '*.sym')))


def benchmark_names():
    """Names of the shipped benchmark files"""
    return [os.path.splitext(os.path.basename(fn))[0] for fn in corpus_files()]


def benchmark_text(name):
    """
    Spec file text of a benchmark

    Raises
    ------
    KeyError
        No file of that name and no generator matches it.
    """
    fn = os.path.join(CORPUS_DIR, name + '.sym')
    if os.path.exists(fn):
        with open(fn, encoding='utf-8') as f:
            return f.read()
    m = VOTING_RE.match(name)
    if m:
        return voting_program(int(m.group(1)))
    m = DIHEDRAL_RE.match(name)
    if m:
        return dihedral_program(int(m.group(1)))
    raise KeyError('Unknown benchmark `{0}`'.format(name))


def load_benchmark(name, context=None):
    """Parsed ``SpecFile`` of a benchmark"""
    return parse_spec(benchmark_text(name), name + '.sym', context)


def group_size(group, max_elems=4096):
    """
    Order of a group for reports

    Returns ``'inf'`` when a generator occurs in no relation (the group
    then maps onto Z) and ``'-'`` when the group has more than
    `max_elems` elements or more than ``TABLE_GENERATORS`` generators.
    """
    related = set()
    for r in group.relators:
        related.update(name for name, _ in word_letters(r))
    if any(g not in related for g in group.generators):
        return 'inf'
    if len(group.generators) > TABLE_GENERATORS:
        return '-'
    table = group.try_enumerate(max_elems)
    return '-' if table is None else table.size


def run_benchmark(name, config=None, fuzz=0):
    """
    Verify one benchmark

    Parameters
    ----------
    name : str
    config : dict, optional
    fuzz : int
        Number of random trials run after the verdict (0 for none).

    Returns
    -------
    OrderedDict
        A row of the benchmark table.
    """
    config = get_config(config)
    context = get_context(None, config)
    row = OrderedDict([('name', name),
                       ('program', BENCHMARKS.get(name, EXTRA.get(name, name)))])
    spec = load_benchmark(name, context)
    triple = spec.triple()
    with timed(row):
        verdict = verify(triple, context=context)
    row['verdict'] = verdict.status
    row['expected'] = EXPECTED.get(name)
    row['assignments'] = count_assignments(triple.program)
    row['group_size'] = group_size(triple.pre.group, config['max_elems'])
    row['obligations'] = len(context.records)
    if fuzz:
        report = fuzz_soundness(triple, fuzz, config=config)
        row['fuzz'] = '{0}/{1}'.format(report.passed, report.trials)
    row['detail'] = verdict.to_dict()
    LOGGER.info('%s: %s in %.3f s', name, verdict, row['seconds'])
    return row


def run_corpus(names=None, config=None, fuzz=0, progress=False):
    """Verify several benchmarks; defaults to the evaluation table"""
    if names is None:
        names = list(BENCHMARKS) + list(EXTRA) + [n for n in SCALING
                                                   if n not in BENCHMARKS]
    return [run_benchmark(name, config, fuzz)
            for name in tqdm(names, disable=not progress)]


def format_table(rows):
    """Plain text table of benchmark rows"""
    header = ['program', 'verdict', 'assignments', 'pre-group', 'seconds']
    body = [[row['program'], row['verdict'], str(row['assignments']),
             str(row['group_size']), '{0:.3f}'.format(row['seconds'])]
            for row in rows]
    if any('fuzz' in row for row in rows):
        header.append('fuzz')
        for line, row in zip(body, rows):
            line.append(row.get('fuzz', ''))
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    out = []
    for line in [header] + body:
        out.append('  '.join(x.ljust(w) for x, w in zip(line, widths)).rstrip())
    out.insert(1, '  '.join('-' * w for w in widths))
    return '\n'.join(out)
