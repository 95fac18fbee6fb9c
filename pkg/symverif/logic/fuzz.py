#!/usr/bin/env python
"""
Random testing of symmetry triples against the interpreter.

For random states sigma and random pre group words w the two sides of

    post_{hom(w)}(run(sigma)) == run(pre_w(sigma))

are computed concretely and compared on the post variables.
"""
import logging
from collections import OrderedDict

from tqdm import tqdm

from symverif.errors import DivByZero, FuelExhausted, NoInverse
from symverif.expr import to_mpf, values_close
from symverif.groups.presentation import format_word
from symverif.lang.interpreter import Fuel, interpret
from symverif.utils.generic import get_config, make_rng

LOGGER = logging.getLogger(__name__)

TOLERANCE = 1e-9


class FuzzReport(object):
    """Outcome of ``fuzz_soundness``"""

    def __init__(self, name, trials=0):
        self.name = name
        self.trials = trials
        self.passed = 0
        self.skipped = 0
        self.failures = []

    @property
    def ok(self):
        return not self.failures

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def to_dict(self):
        return OrderedDict([('name', self.name), ('trials', self.trials),
                            ('passed', self.passed), ('skipped', self.skipped),
                            ('failures', self.failures)])

    def __str__(self):
        text = '{0}: {1}/{2} passed, {3} skipped'.format(
            self.name, self.passed, self.trials, self.skipped)
        if self.failures:
            f = self.failures[0]
            text += '; first failure with {0} on `{1}`: {2} != {3}'.format(
                f['word'], f['var'], f['acted_first'], f['run_first'])
        return text


def _invertible(action):
    out = set()
    for g in action.group.generators:
        try:
            action.inverse_map(g)
        except NoInverse:
            continue
        out.add(g)
    return out


def random_word(group, rng, max_length, invertible=None):
    """Random word of at most `max_length` letters"""
    if not group.generators:
        return group.identity
    letters = []
    for _ in range(rng.randint(0, max_length + 1)):
        g = group.generators[rng.randint(len(group.generators))]
        sign = -1 if rng.rand() < 0.5 and (invertible is None or
                                           g in invertible) else 1
        letters.append((g, sign))
    return group.word(letters)


def _show(value):
    if hasattr(value, 'numerator'):
        return str(value)
    return str(to_mpf(value))


def fuzz_soundness(triple, n_trials=None, seed=None, config=None,
                   progress=False):
    """
    Test a triple on random states and group words

    Parameters
    ----------
    triple : SymmetryTriple
    n_trials : int, optional
        Defaults to ``fuzz_trials`` of the configuration.
    seed : int, optional
        Defaults to ``seed`` of the configuration.
    config : dict, optional
    progress : bool
        Show a progress bar.

    Returns
    -------
    FuzzReport
        Trials that divide by zero or run out of fuel are skipped.
    """
    config = get_config(config)
    n_trials = config['fuzz_trials'] if n_trials is None else n_trials
    rng = make_rng(config['seed'] if seed is None else seed)
    sig = triple.signature
    pre, post, hom = triple.pre, triple.post, triple.hom
    invertible = _invertible(pre)
    report = FuzzReport(triple.name, n_trials)

    for _ in tqdm(range(n_trials), disable=not progress):
        state = OrderedDict((v, sig.domain(v).sample(rng)) for v in sig)
        word = random_word(pre.group, rng, config['fuzz_word_length'],
                           invertible)
        try:
            acted_first = interpret(triple.program, pre.apply(word, state),
                                    Fuel(config['fuel']), sig)
            run_first = post.apply(hom.image(word),
                                   interpret(triple.program, state,
                                             Fuel(config['fuel']), sig))
        except (DivByZero, FuelExhausted, NoInverse) as e:
            LOGGER.debug('Skipped trial: %s', e)
            report.skipped += 1
            continue
        for v in post.vars:
            if not values_close(acted_first[v], run_first[v], TOLERANCE):
                report.failures.append(OrderedDict([
                    ('word', format_word(word)), ('var', v),
                    ('acted_first', _show(acted_first[v])),
                    ('run_first', _show(run_first[v])),
                    ('state', OrderedDict((k, _show(x))
                                          for k, x in state.items()))]))
                break
        else:
            report.passed += 1
    LOGGER.info('%s', report)
    return report
