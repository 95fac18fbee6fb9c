#!/usr/bin/env python
"""
External SMT solver processes.

Scripts are fed to the solver on stdin and the answer is read from stdout.
Models are requested with a second run only when the first answer is
``sat``.
"""
import logging
import os
import shutil
import subprocess
import time
from fractions import Fraction

import pyparsing as pp

from symverif.errors import SolverError

LOGGER = logging.getLogger(__name__)

KNOWN_SOLVERS = ('z3', 'cvc5')


class SolverResult(object):
    """
    Answer of a solver run

    Parameters
    ----------
    status : str
        'unsat', 'sat', 'unknown', 'timeout' or 'error'.
    model : dict or None
        Values of declared constants for 'sat'.
    text : str
        Raw solver output (or error text).
    seconds : float
        Wall time.
    """

    def __init__(self, status, model=None, text='', seconds=0.0):
        self.status = status
        self.model = model
        self.text = text
        self.seconds = seconds

    def __repr__(self):
        return 'SolverResult({0})'.format(self.status)


def find_solver(solver=None):
    """Resolve the solver binary from a flag value or the PATH"""
    if solver:
        path = shutil.which(solver)
        if path is None:
            raise SolverError('Solver `{0}` not found'.format(solver))
        return path
    for name in KNOWN_SOLVERS:
        path = shutil.which(name)
        if path is not None:
            return path
    return None


def solver_command(path, timeout):
    name = os.path.basename(path).lower()
    if 'cvc' in name:
        return [path, '--lang=smt2', '--produce-models',
                '--tlimit={0}'.format(int(timeout * 1000))]
    return [path, '-in', '-smt2', '-T:{0}'.format(int(max(1, timeout)))]


def _atom_value(token):
    if isinstance(token, str):
        return Fraction(token)
    op = token[0]
    args = [_atom_value(t) for t in token[1:]]
    if op == '-' and len(args) == 1:
        return -args[0]
    if op == '-':
        return args[0] - sum(args[1:])
    if op == '/':
        return args[0] / args[1]
    if op == 'to_real':
        return args[0]
    raise ValueError('Unsupported model value {0}'.format(token))


def parse_model(text):
    """
    Parse a ``(get-model)`` answer

    Returns
    -------
    dict
        Map from constant names to exact values; functions and values
        that are not numerals are skipped.
    """
    start = text.find('(')
    if start < 0:
        return {}
    try:
        tree = pp.nested_expr().parse_string(text[start:]).as_list()[0]
    except pp.ParseException as e:
        raise SolverError('Cannot parse model: {0}'.format(e))
    if tree and tree[0] == 'model':
        tree = tree[1:]
    model = {}
    for entry in tree:
        if not isinstance(entry, list) or len(entry) != 5:
            continue
        kind, name, args, _sort, value = entry
        if kind != 'define-fun' or args:
            continue
        try:
            model[name] = _atom_value(value)
        except (ValueError, ZeroDivisionError, IndexError):
            LOGGER.debug('Skipping model value of %s', name)
    return model


def _run(command, script, timeout):
    try:
        proc = subprocess.run(command, input=script, capture_output=True,
                              text=True, timeout=timeout + 5)
    except subprocess.TimeoutExpired:
        return None
    return proc


def run_solver(script, solver, timeout=30):
    """
    Check a script with an external solver

    Parameters
    ----------
    script : str
        SMT-LIB text ending in ``(check-sat)``.
    solver : str
        Path of the solver binary.
    timeout : float
        Seconds allowed per run.

    Returns
    -------
    SolverResult
    """
    command = solver_command(solver, timeout)
    LOGGER.debug('Running %s', ' '.join(command))
    start = time.perf_counter()
    proc = _run(command, script, timeout)
    if proc is None:
        return SolverResult('timeout', seconds=time.perf_counter() - start)
    lines = [l.strip() for l in proc.stdout.splitlines() if l.strip()]
    answer = lines[0] if lines else ''
    if answer not in ('sat', 'unsat', 'unknown', 'timeout'):
        text = (proc.stdout + proc.stderr).strip()
        return SolverResult('error', text=text,
                            seconds=time.perf_counter() - start)
    if answer == 'unknown' and 'timeout' in proc.stdout + proc.stderr:
        answer = 'timeout'
    model = None
    if answer == 'sat':
        proc = _run(command, script + '(get-model)\n', timeout)
        if proc is not None:
            out = proc.stdout.strip()
            model = parse_model(out[out.find('\n'):] if '\n' in out else '')
    return SolverResult(answer, model=model, text=proc.stdout if proc else '',
                        seconds=time.perf_counter() - start)
