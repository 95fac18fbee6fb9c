#!/usr/bin/env python
"""
Proof obligations and their discharge.

An obligation is a universally quantified formula. It is first attacked
in process (rewriting, case splits over comparison atoms, rational
cancellation and a random counterexample search); only undecided
obligations are sent to the external solver.
"""
import itertools
import logging
import os
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import sympy
from sympy import And, Or

from symverif.expr import (INT, PI, REAL, equal_locally, evaluate,
                           find_counterexample, simplify)
from symverif.errors import DivByZero, SolverError
from symverif.smt.smtlib import emit_script
from symverif.smt.solver import find_solver, run_solver
from symverif.utils.generic import get_config, make_rng

LOGGER = logging.getLogger(__name__)

KINDS = ('sem_assign', 'action_relation', 'entailment', 'injectivity',
         'inverse_identity', 'expr_equality')


class Obligation(object):
    """
    A universally quantified formula to be proved valid

    Parameters
    ----------
    kind : str
        One of `KINDS`.
    body : sympy.Boolean
        The formula.
    universals : dict
        Map from logical variables to their Domain. Defaults to the
        free symbols of `body`, whose domains are looked up in
        `symbol_domains`.
    meta : dict, optional
        Originating rule, statement path, generator, ...
    """
    _ids = itertools.count(1)

    def __init__(self, kind, body, universals=None, symbol_domains=None,
                 meta=None):
        if kind not in KINDS:
            raise ValueError('Unknown obligation kind `{0}`'.format(kind))
        self.kind = kind
        self.body = body
        if universals is None:
            symbol_domains = symbol_domains or {}
            universals = OrderedDict()
            for s in sorted(body.free_symbols - set([PI]), key=str):
                if s in symbol_domains:
                    universals[s] = symbol_domains[s]
                else:
                    universals[s] = INT if s.is_integer else REAL
        self.universals = OrderedDict(universals)
        self.meta = dict(meta or {})
        self.id = 'ob{0:05d}'.format(next(self._ids))

    @property
    def symbol_domains(self):
        return dict(self.universals)

    def describe(self):
        parts = [self.kind] + ['{0}={1}'.format(k, v)
                               for k, v in sorted(self.meta.items())]
        return ' '.join(parts)

    def holds_at(self, env):
        """Evaluate the body at a concrete environment"""
        return evaluate(self.body, env)

    def __repr__(self):
        return 'Obligation({0}, {1})'.format(self.id, self.describe())


class ObligationResult(object):
    """
    Outcome of discharging an obligation

    status is 'valid', 'invalid', 'unknown', 'timeout' or 'error'; an
    'invalid' result carries a model mapping logical variable names to
    values that falsifies the body.
    """

    def __init__(self, obligation, status, method, model=None, seconds=0.0,
                 detail=''):
        self.obligation = obligation
        self.status = status
        self.method = method
        self.model = model
        self.seconds = seconds
        self.detail = detail

    @property
    def valid(self):
        return self.status == 'valid'

    @property
    def invalid(self):
        return self.status == 'invalid'

    def to_dict(self):
        return OrderedDict([
            ('id', self.obligation.id),
            ('kind', self.obligation.kind),
            ('meta', self.obligation.meta),
            ('status', self.status),
            ('method', self.method),
            ('model', self.model),
            ('seconds', round(self.seconds, 4)),
        ])

    def __repr__(self):
        return 'ObligationResult({0}, {1}, {2})'.format(
            self.obligation.id, self.status, self.method)


def _named(env):
    if env is None:
        return None
    return OrderedDict((str(k), v) for k, v in env.items())


class ProofContext(object):
    """
    Configuration, randomness and the record of discharged obligations
    shared by one verification run

    Parameters
    ----------
    config : dict, optional
        Configuration overrides (see ``utils.generic.load_config``).
    """

    def __init__(self, config=None):
        self.config = get_config(config)
        self.rng = make_rng(self.config['seed'])
        self.records = []
        self._solver = None
        self._solver_resolved = False

    @property
    def solver(self):
        if not self._solver_resolved:
            self._solver = find_solver(self.config.get('solver'))
            self._solver_resolved = True
            if self._solver is None:
                LOGGER.info('No SMT solver found; using the in-process '
                            'procedure only')
        return self._solver

    # local procedure

    def _decide(self, f, domains, rng):
        samples = self.config['equality_samples']
        if f is sympy.true:
            return True, None
        if f is sympy.false:
            return False, self._any_model(domains, rng)
        if isinstance(f, sympy.Eq):
            verdict, model, _ = equal_locally(
                f.lhs, f.rhs, domains, rng, samples,
                self.config['case_split_atoms'])
            return verdict, model
        if isinstance(f, And):
            undecided = False
            for c in f.args:
                verdict, model = self._decide(c, domains, rng)
                if verdict is False:
                    return False, model
                if verdict is None:
                    undecided = True
            return (None, None) if undecided else (True, None)
        if isinstance(f, Or):
            for c in f.args:
                verdict, _ = self._decide(c, domains, rng)
                if verdict is True:
                    return True, None
        g = simplify(f, dict((s, d.modulus) for s, d in domains.items()
                             if d.kind == 'IntMod'))
        if g is sympy.true:
            return True, None
        model = find_counterexample(g, rng, samples, domains)
        if model is not None:
            return False, model
        return None, None

    def _any_model(self, domains, rng):
        return dict((s, d.sample(rng)) for s, d in domains.items())

    # solver

    def _dump(self, ob, script):
        folder = self.config.get('keep_smt')
        if not folder:
            return
        os.makedirs(folder, exist_ok=True)
        with open(os.path.join(folder, ob.id + '.smt2'), 'w') as f:
            f.write(script)

    def _model_from_solver(self, ob, model, rng):
        env = OrderedDict()
        by_name = dict((s.name, s) for s in ob.universals)
        for name, value in (model or {}).items():
            if name in by_name:
                env[by_name[name]] = value
        for s, d in ob.universals.items():
            if s not in env:
                env[s] = Fraction(0) if d.contains(Fraction(0)) else d.sample(rng)
        try:
            if ob.holds_at(env) is True:
                LOGGER.warning('Solver model does not falsify %s', ob.id)
        except DivByZero:
            pass
        return env

    def _solve(self, ob, rng):
        script = emit_script(ob, self.config.get('trig_axioms', False))
        self._dump(ob, script)
        result = run_solver(script, self.solver, self.config['smt_timeout'])
        if result.status == 'unsat':
            return 'valid', None, ''
        if result.status == 'sat':
            if ob.body.has(sympy.sin, sympy.cos, sympy.tan) and not \
                    self.config.get('trig_axioms'):
                # uninterpreted trig may admit spurious models
                return 'unknown', None, 'sat with uninterpreted functions'
            return 'invalid', self._model_from_solver(ob, result.model, rng), ''
        if result.status == 'timeout':
            return 'timeout', None, 'solver timeout'
        if result.status == 'error':
            return 'error', None, result.text
        return 'unknown', None, 'solver returned unknown'

    def discharge(self, ob):
        """
        Prove an obligation

        Returns
        -------
        ObligationResult
            The result, also appended to `records`.
        """
        result = self._discharge(ob, self.rng)
        self.records.append(result)
        return result

    def _discharge(self, ob, rng):
        start = time.perf_counter()
        verdict, model = self._decide(ob.body, ob.symbol_domains, rng)
        if verdict is True:
            status, method = 'valid', 'local'
        elif verdict is False:
            status, method = 'invalid', 'sampling'
        else:
            status, method = 'unknown', 'local'
            if self.solver is not None:
                method = 'solver'
                try:
                    status, model, detail = self._solve(ob, rng)
                except SolverError as e:
                    status, detail = 'error', str(e)
                if detail:
                    LOGGER.debug('%s: %s', ob.id, detail)
        result = ObligationResult(ob, status, method, _named(model),
                                  time.perf_counter() - start)
        LOGGER.debug('%s %s (%s, %.3fs)', ob, status, method, result.seconds)
        return result

    def discharge_all(self, obligations):
        """
        Discharge independent obligations, results in input order

        Every obligation samples from its own generator seeded from the
        context, so results do not depend on the number of jobs.
        """
        obligations = list(obligations)
        seeds = self.rng.randint(2 ** 31 - 1, size=len(obligations))
        rngs = [make_rng(int(s)) for s in seeds]
        jobs = int(self.config.get('jobs') or 1)
        if jobs <= 1 or len(obligations) <= 1:
            results = [self._discharge(ob, r) for ob, r in zip(obligations, rngs)]
        else:
            # resolve the solver once, outside the workers
            self.solver
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(self._discharge, obligations, rngs))
        self.records.extend(results)
        return results

    def equal(self, lhs, rhs, symbol_domains, kind='expr_equality', meta=None):
        ob = Obligation(kind, sympy.Eq(lhs, rhs, evaluate=False),
                        symbol_domains=symbol_domains, meta=meta)
        return self.discharge(ob)


def get_context(context=None, config=None):
    if context is not None:
        return context
    return ProofContext(config)
