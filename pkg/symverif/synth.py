#!/usr/bin/env python
"""
Enumerative synthesis of preconditions for single assignments.

Given an assignment ``x := f`` and a post action b of a group H, a
precondition is an action of the free group on the generators of H whose
generator g_i transforms states so that

    run(g_i(sigma)) == b_{h_i}(run(sigma))

on the variables b acts on. Candidate maps are enumerated per variable
from a grammar built from the assignment and the post action, smallest
terms first. Candidates are pruned by evaluation on random states (the
interpreter computes the target values), the survivors are proved for
all values with the semantic assignment obligation, and the map must
have a two-sided inverse in the same grammar.
"""
import logging
import time
from collections import OrderedDict

import numpy as np
import sympy
from tqdm import tqdm

from symverif.errors import DivByZero, NoCandidate, SynthTimeout
from symverif.expr import OPS, PI, gamma, simplify, substitute, wrap_domain
from symverif.groups.actions import GroupAction, check_action
from symverif.groups.homomorphisms import Homomorphism
from symverif.groups.presentation import GroupPresentation
from symverif.lang.interpreter import Fuel, interpret
from symverif.logic.rules import check_triple_for_assignment
from symverif.smt.encoding import encode_sem_assign
from symverif.smt.obligations import get_context
from symverif.utils.generic import get_config, make_rng

LOGGER = logging.getLogger(__name__)

CONSTANT_POOL = (-2, -1, 0, 1, 2)

BINARY_OPS = ('add', 'sub', 'mul')

# opaque operations taken over from the assignment and the post action
OPAQUE_OPS = ('sin', 'cos', 'tan', 'abs', 'pow3')

NUMPY_OPS = {
    'neg': np.negative,
    'add': np.add,
    'sub': np.subtract,
    'mul': np.multiply,
    'sin': np.sin,
    'cos': np.cos,
    'tan': np.tan,
    'abs': np.abs,
    'pow3': lambda a: a ** 3,
}

INTEGER_OPS = ('neg', 'add', 'sub', 'mul', 'abs', 'pow3')

TOLERANCE = 1e-9


def _program_ops(exp, ops, literals):
    if exp.kind == 'num':
        literals.add(sympy.Rational(exp.value.numerator, exp.value.denominator))
    elif exp.kind == 'pi':
        ops.add('pi')
    elif exp.kind == 'apply':
        ops.add(exp.op)
        for a in exp.args:
            _program_ops(a, ops, literals)


def _symbolic_ops(e, ops, literals):
    for node in sympy.preorder_traversal(e):
        if isinstance(node, sympy.sin):
            ops.add('sin')
        elif isinstance(node, sympy.cos):
            ops.add('cos')
        elif isinstance(node, sympy.tan):
            ops.add('tan')
        elif isinstance(node, sympy.Abs):
            ops.add('abs')
        elif node.is_Pow and node.exp == 3:
            ops.add('pow3')
        elif node == PI:
            ops.add('pi')
        elif node.is_Rational:
            literals.add(node)


def _close(a, b):
    return np.allclose(a, b, rtol=TOLERANCE, atol=TOLERANCE)


class Grammar(object):
    """
    Productions of per-variable transformation terms

    Parameters
    ----------
    signature : Signature
        All program variables.
    variables : list
        Variables whose logical variables are terminals.
    constants : list
        Constant pool (sympy rationals).
    unary : list
        Unary operation names (`neg` and the opaque operations).
    depth : int
        Largest nesting depth of a term (terminals have depth 1).
    use_pi : bool
        Whether pi is a terminal.
    """

    def __init__(self, signature, variables, constants, unary, depth,
                 use_pi=False):
        self.signature = signature
        self.variables = list(variables)
        self.constants = list(constants)
        self.unary = list(unary)
        self.binary = list(BINARY_OPS)
        self.depth = depth
        self.use_pi = use_pi

    def is_integer(self, var):
        return self.signature.domain(var).is_integer

    def terminals(self, var):
        """Terminals for terms of `var`, its own logical variable first"""
        integer = self.is_integer(var)
        names = [var] + [v for v in self.variables if v != var]
        out = [self.signature.alpha(v) for v in names
               if not integer or self.is_integer(v)]
        out.extend(c for c in self.constants if not integer or c.is_integer)
        if self.use_pi and not integer:
            out.append(PI)
        return out

    def operations(self, var):
        if self.is_integer(var):
            return ([u for u in self.unary if u in INTEGER_OPS],
                    list(self.binary))
        return list(self.unary), list(self.binary)

    @property
    def max_size(self):
        return 2 ** self.depth - 1

    def terms(self, var, columns, deadline=None):
        """
        Terms for `var` in size-then-production order

        Terms with the same values on the sample columns as an earlier
        term are dropped.

        Parameters
        ----------
        var : str
        columns : dict
            Map from logical variables to numpy arrays of sample values.
        deadline : float, optional
            ``time.perf_counter`` value after which SynthTimeout is raised.

        Yields
        ------
        (sympy.Expr, numpy.ndarray)
        """
        n = len(next(iter(columns.values())))
        unary, binary = self.operations(var)
        levels = {}
        seen = set()

        def admit(level, build, values, depth):
            if deadline is not None and time.perf_counter() > deadline:
                raise SynthTimeout('Synthesis budget exhausted while '
                                   'enumerating terms for `{0}`'.format(var))
            if not np.all(np.isfinite(values)):
                return False
            key = (np.round(values, 9) + 0.0).tobytes()
            if key in seen:
                return False
            seen.add(key)
            level.append((build(), values, depth))
            return True

        level = levels[1] = []
        for t in self.terminals(var):
            if t == PI:
                values = np.full(n, np.pi)
            elif t.is_Symbol:
                values = np.asarray(columns[t], dtype=float)
            else:
                values = np.full(n, float(t))
            if admit(level, lambda: t, values, 1):
                yield t, values

        with np.errstate(all='ignore'):
            for size in range(2, self.max_size + 1):
                level = levels[size] = []
                for name in unary:
                    op, fun = OPS[name].symbolic, NUMPY_OPS[name]
                    for e, v, d in levels[size - 1]:
                        if d >= self.depth:
                            continue
                        if admit(level, lambda: op(e), fun(v), d + 1):
                            yield level[-1][:2]
                for name in binary:
                    op, fun = OPS[name].symbolic, NUMPY_OPS[name]
                    for i in range(1, size - 1):
                        for e1, v1, d1 in levels[i]:
                            if d1 >= self.depth:
                                continue
                            for e2, v2, d2 in levels[size - 1 - i]:
                                if d2 >= self.depth:
                                    continue
                                if admit(level, lambda: op(e1, e2), fun(v1, v2),
                                         max(d1, d2) + 1):
                                    yield level[-1][:2]


def make_grammar(assign, post, depth=3, signature=None):
    """
    Grammar for preconditions of `assign` with respect to `post`

    Terminals are the logical variables of the assigned variable, the
    variables it reads and the variables of the post action, plus the
    constants -2..2 and the literals of the assignment and the action.
    Operations are negation, addition, subtraction, multiplication and
    the opaque operations occurring in the assignment or the action.
    """
    signature = signature or post.signature
    ops, literals = set(), set()
    _program_ops(assign.expr, ops, literals)
    for m in post.maps.values():
        for e in m.values():
            _symbolic_ops(e, ops, literals)
    relevant = set([assign.var]) | assign.expr.variables() | set(post.vars)
    variables = [v for v in signature if v in relevant]
    pool = set(sympy.Integer(c) for c in CONSTANT_POOL)
    pool.update(literals)
    constants = sorted(pool, key=lambda c: (float(c), str(c)))
    unary = ['neg'] + [o for o in OPAQUE_OPS if o in ops]
    return Grammar(signature, variables, constants, unary, depth,
                   use_pi='pi' in ops)


class SynthResult(object):
    """
    Synthesized precondition

    Attributes
    ----------
    pre : GroupAction
        Action of the free group with one generator per post generator.
    hom : Homomorphism
        Sends each generator to its post generator.
    inverses : dict
        Inverse map of each generator.
    verdict : Verdict
        Verification of the resulting triple.
    stats : dict
        Candidates tried, obligations discharged and wall time.
    """

    def __init__(self, pre, hom, inverses, verdict, stats):
        self.pre = pre
        self.hom = hom
        self.inverses = inverses
        self.verdict = verdict
        self.stats = stats

    def to_dict(self):
        maps = OrderedDict()
        for g, m in self.pre.maps.items():
            maps[g] = OrderedDict((v, str(e)) for v, e in m.items()
                                  if e != self.pre.signature.alpha(v))
        return OrderedDict([('pre', maps), ('hom', str(self.hom)),
                            ('verdict', self.verdict.status),
                            ('stats', self.stats)])

    def __str__(self):
        return str(self.pre)


class Synthesizer(object):
    """
    Search state for one (assignment, post action) pair

    Parameters
    ----------
    assign : Assign
    post : GroupAction
    signature : Signature
        All program variables.
    grammar : Grammar
    context : ProofContext
    config : dict
    """

    def __init__(self, assign, post, signature, grammar, context, config):
        self.assign = assign
        self.post = post
        self.signature = signature
        self.grammar = grammar
        self.context = context
        self.config = config
        self.rng = make_rng(config['seed'])
        self.candidates = 0
        f = gamma(assign.expr, signature.fresh_state())
        self.f_num = sympy.lambdify(
            [signature.alpha(v) for v in signature],
            wrap_domain(f, signature.domain(assign.var))
            .xreplace({PI: sympy.pi}), 'numpy')

    def samples(self, word):
        """Random states and the oracle values ``b_h(run(sigma))``"""
        sig = self.signature
        states, targets = [], []
        n = self.config['prune_states']
        attempts = 0
        while len(states) < n and attempts < 4 * n:
            attempts += 1
            state = OrderedDict((v, sig.domain(v).sample(self.rng)) for v in sig)
            try:
                after = interpret(self.assign, state, Fuel(self.config['fuel']),
                                  sig)
                target = self.post.apply(word, after)
            except DivByZero:
                continue
            states.append(state)
            targets.append(target)
        if not states:
            raise NoCandidate('The assignment to `{0}` divides by zero on '
                              'every sampled state'.format(self.assign.var))
        columns = OrderedDict((sig.alpha(v), np.array([float(s[v]) for s in states]))
                              for v in sig)
        goals = OrderedDict((u, np.array([float(t[u]) for t in targets]))
                            for u in self.post.vars)
        return columns, goals

    def _normalize(self, var, values):
        d = self.signature.domain(var)
        if d.kind == 'IntMod':
            return np.mod(values, d.modulus)
        return values

    def _wrap(self, var, e):
        return wrap_domain(e, self.signature.domain(var))

    def first_match(self, var, columns, goal, deadline):
        for e, values in self.grammar.terms(var, columns, deadline):
            self.candidates += 1
            if _close(self._normalize(var, values), goal):
                return e, values
        raise NoCandidate('No term of depth {0} for `{1}`'.format(
            self.grammar.depth, var))

    def x_candidates(self, columns, goals, chosen, deadline):
        """Terms for the assigned variable matching the oracle on the samples"""
        x = self.assign.var
        sig = self.signature
        for e, values in self.grammar.terms(x, columns, deadline):
            self.candidates += 1
            if x not in goals:
                yield e, values
                continue
            args = [values if v == x else chosen[v][1] for v in sig]
            with np.errstate(all='ignore'):
                out = np.broadcast_to(np.asarray(self.f_num(*args),
                                                 dtype=float), values.shape)
            if np.all(np.isfinite(out)) and _close(out, goals[x]):
                yield e, values

    def verify_generator(self, h, m):
        """Semantic obligation for one generator mapped to `h`"""
        group = GroupPresentation('F_' + h, [h])
        pre = GroupAction(group, self.signature, {h: m})
        hom = Homomorphism(group, self.post.group, {h: h})
        ob = encode_sem_assign(pre, self.assign, self.post, hom, self.signature,
                               self.config['max_elems'],
                               dict(rule='SYNTH', generator=h))
        return self.context.discharge(ob)

    def _identity(self, composed, var):
        alpha = self.signature.alpha(var)
        if simplify(composed - alpha, self.signature.moduli) == 0:
            return True
        return self.context.equal(composed, alpha, self.signature.symbol_domains,
                                  kind='inverse_identity',
                                  meta=dict(rule='SYNTH', var=var)).valid

    def inverse(self, m, acted, columns, deadline):
        """
        Two-sided inverse of the map `m` within the grammar, or None

        `acted` holds the sample values of ``m`` (the columns of the
        transformed states), `columns` the original sample values.
        """
        sig = self.signature
        inv = OrderedDict()
        for v in sig:
            if m[v] == sig.alpha(v) and all(
                    sig.alpha(v) not in m[u].free_symbols
                    for u in sig if u != v):
                inv[v] = sig.alpha(v)
                continue
            try:
                e, _ = self.first_match(v, acted, columns[sig.alpha(v)],
                                        deadline)
            except NoCandidate:
                return None
            e = self._wrap(v, e)
            if not self._identity(substitute(e, dict(
                    (sig.alpha(u), m[u]) for u in sig)), v):
                return None
            inv[v] = e
        back = dict((sig.alpha(u), inv[u]) for u in sig)
        for v in sig:
            if not self._identity(substitute(m[v], back), v):
                return None
        return inv

    def for_generator(self, h, deadline):
        """Map and inverse of the pre generator sent to `h`"""
        sig = self.signature
        x = self.assign.var
        columns, goals = self.samples(self.post.group.generator(h))
        chosen = OrderedDict()
        for v in sig:
            alpha = sig.alpha(v)
            if v in goals and v != x:
                chosen[v] = self.first_match(v, columns, goals[v], deadline)
            else:
                chosen[v] = (alpha, columns[alpha])
        for e, values in self.x_candidates(columns, goals, chosen, deadline):
            chosen[x] = (e, values)
            m = OrderedDict((v, self._wrap(v, t)) for v, (t, _) in chosen.items())
            result = self.verify_generator(h, m)
            if not result.valid:
                LOGGER.debug('Candidate %s for %s rejected (%s)', m, h,
                             result.status)
                continue
            acted = OrderedDict(
                (sig.alpha(v), self._normalize(v, vals))
                for v, (_, vals) in chosen.items())
            inv = self.inverse(m, acted, columns, deadline)
            if inv is None:
                LOGGER.debug('Candidate %s for %s has no inverse', m, h)
                continue
            return m, inv
        raise NoCandidate('Grammar of depth {0} exhausted for generator `{1}`'
                          .format(self.grammar.depth, h))


def synthesize_pre(assign, post, signature=None, depth=None, timeout=None,
                   context=None, config=None, progress=False):
    """
    Synthesize a precondition making ``pre {assign} post`` valid

    Parameters
    ----------
    assign : Assign
        A single assignment.
    post : GroupAction
        Certified post action.
    signature : Signature, optional
        All program variables (defaults to the post action's variables
        and those of the assignment, which must then all be declared in
        the post action's signature).
    depth : int, optional
        Term depth bound (configuration key ``depth``).
    timeout : float, optional
        Seconds per generator (configuration key ``synth_timeout``).
    context : ProofContext, optional
    config : dict, optional
    progress : bool
        Show a progress bar over the generators.

    Returns
    -------
    SynthResult

    Raises
    ------
    SynthTimeout
        The budget of a generator ran out.
    NoCandidate
        The grammar has no verified bijection for a generator.
    """
    context = get_context(context, config)
    config = get_config(context.config)
    depth = config['depth'] if depth is None else depth
    timeout = config['synth_timeout'] if timeout is None else timeout
    signature = signature or post.signature
    grammar = make_grammar(assign, post, depth, signature)
    synth = Synthesizer(assign, post, signature, grammar, context, config)
    start = time.perf_counter()
    calls = len(context.records)

    maps, inverses = OrderedDict(), OrderedDict()
    for h in tqdm(post.group.generators, disable=not progress):
        deadline = time.perf_counter() + timeout
        maps[h], inverses[h] = synth.for_generator(h, deadline)
        LOGGER.info('Generator %s: %s', h, ', '.join(
            '{0} -> {1}'.format(v, e) for v, e in maps[h].items()
            if e != signature.alpha(v)) or 'id')

    group = GroupPresentation('F_' + post.group.name, post.group.generators)
    pre = GroupAction(group, signature, maps,
                      name='pre_{0}'.format(post.name))
    check_action(pre, context)
    hom = Homomorphism(group, post.group,
                       dict((h, h) for h in post.group.generators),
                       name='gen')
    verdict = check_triple_for_assignment(pre, assign, post, hom, signature,
                                          context)
    if not verdict.is_valid:
        raise NoCandidate('Synthesized precondition does not verify: {0}'
                          .format(verdict))
    stats = OrderedDict([('candidates', synth.candidates),
                         ('obligations', len(context.records) - calls),
                         ('seconds', time.perf_counter() - start)])
    LOGGER.info('Synthesized %s after %d candidates', pre.name,
                synth.candidates)
    return SynthResult(pre, hom, inverses, verdict, stats)
