#!/usr/bin/env python
"""
Symbolic group actions on program states.

A ``GroupAction`` assigns to every generator of a presentation a map
from the acted variables to expressions over their logical variables
``alpha_v``. Words act on the left: the rightmost letter is applied
first. Generator maps are proved to satisfy every relation before the
action is used (``check_action``).
"""
import logging
from collections import OrderedDict

import sympy
from sympy import Mod

from symverif.errors import (BoundExceeded, NoInverse, NonCommutingActions,
                             NotAnAction, SolverTimeout, Unverifiable)
from symverif.expr import (PI, Signature, evaluate, simplify, substitute,
                           wrap_domain)
from symverif.groups.presentation import (direct_product_presentation,
                                          format_word,
                                          free_product_presentation,
                                          word_letters)
from symverif.smt.obligations import Obligation, get_context

LOGGER = logging.getLogger(__name__)


class ValidityCertificate(object):
    """
    Record of the obligations proving that an action (or homomorphism)
    is well defined

    Parameters
    ----------
    kind : str
        'action', 'homomorphism', 'commutation' or 'entailment'.
    subject : str
        Name of the checked object.
    """

    def __init__(self, kind, subject):
        self.kind = kind
        self.subject = subject
        self.entries = []

    def add(self, what, method, **info):
        entry = OrderedDict(what=what, method=method)
        entry.update(info)
        self.entries.append(entry)

    def to_dict(self):
        return OrderedDict([('kind', self.kind), ('subject', self.subject),
                            ('entries', self.entries)])

    def __repr__(self):
        return 'ValidityCertificate({0} {1}, {2} entries)'.format(
            self.kind, self.subject, len(self.entries))


def _raise_for(result, error):
    if result.status == 'invalid':
        raise error
    if result.status == 'timeout':
        raise SolverTimeout('Timeout on {0}'.format(result.obligation.describe()))
    raise Unverifiable('Could not decide {0}'.format(result.obligation.describe()))


class GroupAction(object):
    """
    Action of a finitely presented group on a set of program variables

    Parameters
    ----------
    group : GroupPresentation
        The acting group.
    signature : Signature
        The acted variables and their domains.
    generator_maps : dict
        Map from generator name to a dict ``variable -> expression``.
        Expressions may only mention the logical variables of the acted
        variables (and pi). Missing variables are left unchanged.
    name : str, optional
        Name used in reports.
    faithful : bool
        Declares that distinct group elements act differently.
    max_elems : int
        Bound on the group table built to invert non-affine generators.
    """

    def __init__(self, group, signature, generator_maps, name=None,
                 faithful=False, max_elems=4096):
        self.group = group
        self.max_elems = max_elems
        self.signature = signature
        self.name = name or 'a_{0}'.format(group.name)
        self.faithful = faithful
        self.certificate = None
        allowed = set(signature.alpha(v) for v in signature) | set([PI])
        self.maps = OrderedDict()
        for g in group.generators:
            given = generator_maps.get(g, {})
            for v in given:
                signature.domain(v)
            m = OrderedDict()
            for v in signature:
                e = sympy.sympify(given.get(v, signature.alpha(v)))
                stray = e.free_symbols - allowed
                if stray:
                    raise ValueError(
                        'Map of `{0}` on `{1}` mentions {2}'.format(
                            g, v, ', '.join(sorted(str(s) for s in stray))))
                m[v] = e
            self.maps[g] = m
        unknown = set(generator_maps).difference(group.generators)
        if unknown:
            raise KeyError('Unknown generators {0} in action {1}'
                           .format(sorted(unknown), self.name))
        self._powers = {}
        self._inverses = {}

    @property
    def vars(self):
        return self.signature.names

    @property
    def symbol_domains(self):
        return self.signature.symbol_domains

    @property
    def moduli(self):
        return self.signature.moduli

    def identity_map(self):
        return self.signature.fresh_state()

    def map_of(self, generator):
        try:
            return self.maps[generator]
        except KeyError:
            raise KeyError('`{0}` is not a generator of {1}'
                           .format(generator, self.group.name))

    def compose(self, outer, inner):
        """The map ``outer o inner`` (apply `inner` first)"""
        env = dict((self.signature.alpha(v), inner[v]) for v in self.vars)
        out = OrderedDict()
        for v in self.vars:
            e = outer[v]
            if e.is_Symbol or e.is_Number:
                # permutations and constants need no rewriting
                out[v] = env.get(e, e)
            else:
                out[v] = simplify(wrap_domain(substitute(e, env),
                                              self.signature.domain(v)),
                                  self.moduli)
        return out

    def letter_map(self, generator, exp):
        """Map of ``generator ** exp``, by repeated squaring"""
        key = (generator, exp)
        if key in self._powers:
            return self._powers[key]
        if exp == 0:
            return self.identity_map()
        base = self.map_of(generator) if exp > 0 else self.inverse_map(generator)
        k = abs(exp)
        result = None
        while k:
            if k & 1:
                result = base if result is None else self.compose(result, base)
            k >>= 1
            if k:
                base = self.compose(base, base)
        self._powers[key] = result
        return result

    def word_map(self, word):
        """Map of a word (rightmost letter acts first)"""
        result = self.identity_map()
        for g, exp in word_letters(self.group.translate(word)):
            result = self.compose(result, self.letter_map(g, exp))
        return result

    def apply_map(self, m, state):
        """Apply a map to a symbolic state (variables outside V unchanged)"""
        env = dict((self.signature.alpha(v), state[v]) for v in self.vars)
        out = OrderedDict(state)
        for v in self.vars:
            out[v] = substitute(m[v], env)
        return out

    def apply(self, word, state):
        """
        Act with a word on a state

        Symbolic states (sympy values) are transformed with the composed
        map of the word. Concrete states (Fractions or mp floats) are
        transformed letter by letter.
        """
        word = self.group.translate(word)
        if any(isinstance(state[v], sympy.Basic) for v in self.vars):
            return self.apply_map(self.word_map(word), state)
        out = OrderedDict(state)
        for g, exp in reversed(word_letters(word)):
            m = self.map_of(g) if exp > 0 else self.inverse_map(g)
            for _ in range(abs(exp)):
                env = dict((self.signature.alpha(v), out[v]) for v in self.vars)
                values = [evaluate(m[v], env) for v in self.vars]
                for v, x in zip(self.vars, values):
                    out[v] = self.signature.domain(v).normalize(x)
        return out

    def same_as(self, other, context=None):
        """Generator-wise equality with another action of the same group"""
        if (other.group != self.group
                or set(other.vars) != set(self.vars)):
            return False
        for g in self.group.generators:
            for v in self.vars:
                a, b = self.maps[g][v], other.maps[g][v]
                if a == b:
                    continue
                if simplify(a - b, self.moduli) != 0:
                    if context is None:
                        return False
                    if not context.equal(a, b, self.symbol_domains,
                                         meta=dict(generator=g, var=v)).valid:
                        return False
        return True

    # inverses

    def inverse_map(self, generator):
        """
        Map of ``generator ** -1``

        Found by inverting affine maps (entries ``Mod(+-alpha + b, n)`` of
        IntMod variables are inverted individually), else as
        ``generator ** (k - 1)`` for the order k of the generator in an
        enumerable group.

        Raises
        ------
        NoInverse
        """
        if generator in self._inverses:
            return self._inverses[generator]
        m = self.map_of(generator)
        inv = _affine_inverse(self.signature, m)
        if inv is not None:
            check = self.compose(m, inv)
            if any(simplify(check[v] - self.signature.alpha(v), self.moduli) != 0
                   for v in self.vars):
                inv = None
        if inv is None:
            try:
                table = self.group.enumerate(self.max_elems)
            except BoundExceeded:
                raise NoInverse('Cannot invert generator `{0}` of {1}'
                                .format(generator, self.name))
            k = table.generator_order(generator)
            inv = (self.identity_map() if k == 1
                   else self.letter_map(generator, k - 1))
        self._inverses[generator] = inv
        return inv

    # derived actions

    def lift(self, signature):
        """Extend to the variables of `signature`, acting as identity on the new ones"""
        merged = signature.merge(self.signature)
        out = GroupAction(self.group, merged, self.maps, name=self.name,
                          faithful=self.faithful, max_elems=self.max_elems)
        out.certificate = self.certificate
        return out

    def restrict(self, names):
        """Restriction to the variables `names` (which must be closed under the action)"""
        sig = self.signature.restrict(names)
        maps = dict((g, dict((v, m[v]) for v in names))
                    for g, m in self.maps.items())
        return GroupAction(self.group, sig, maps, name=self.name,
                           faithful=self.faithful, max_elems=self.max_elems)

    def __str__(self):
        lines = ['{0} on ({1}) by {2}'.format(self.name, ', '.join(self.vars),
                                            self.group.name)]
        for g, m in self.maps.items():
            moved = ['{0} -> {1}'.format(v, e) for v, e in m.items()
                     if e != self.signature.alpha(v)]
            lines.append('  {0}: {1}'.format(g, ', '.join(moved) or 'id'))
        return '\n'.join(lines)

    def __repr__(self):
        return 'GroupAction({0})'.format(self.name)


def _split_mod_affine(e, alpha, modulus):
    """(c, b) for e == Mod(c*alpha + b, modulus) with c = +-1 and b constant"""
    if e == alpha:
        return 1, sympy.Integer(0)
    if not isinstance(e, Mod) or e.args[1] != modulus:
        return None
    p = sympy.expand(e.args[0])
    c = p.coeff(alpha)
    b = sympy.expand(p - c * alpha)
    if c not in (1, -1) or b.free_symbols:
        return None
    return int(c), b


def _affine_inverse(signature, m):
    alphas = OrderedDict((v, signature.alpha(v)) for v in signature)
    all_alphas = set(alphas.values())
    inv = OrderedDict()
    rest = []
    for v in signature:
        d = signature.domain(v)
        if d.kind == 'IntMod':
            split = _split_mod_affine(m[v], alphas[v], d.modulus)
            if split is None:
                return None
            c, b = split
            inv[v] = Mod(c * (alphas[v] - b), d.modulus) if (c, b) != (1, 0) \
                else alphas[v]
        else:
            rest.append(v)
    if not rest:
        return inv

    rest_alphas = [alphas[v] for v in rest]
    zero = dict((a, sympy.Integer(0)) for a in rest_alphas)
    J, b = [], []
    for v in rest:
        e = sympy.expand(m[v])
        offset = e.xreplace(zero)
        row = [sympy.expand(e.diff(a)) for a in rest_alphas]
        if offset.free_symbols & all_alphas or any(
                c.free_symbols & all_alphas for c in row):
            return None
        J.append(row)
        b.append(offset)
    J = sympy.Matrix(J)
    det = simplify(J.det())
    if det == 0:
        return None
    adj = J.adjugate()
    target = sympy.Matrix([a - o for a, o in zip(rest_alphas, b)])
    solved = adj * target
    for i, v in enumerate(rest):
        inv[v] = simplify(solved[i] / det)
    return inv


def check_action(action, context=None):
    """
    Prove that generator maps satisfy every relation of the group

    For each relation ``lhs = rhs`` and every acted variable the maps
    of both words must agree.

    Returns
    -------
    ValidityCertificate
        Also stored in ``action.certificate``.

    Raises
    ------
    NotAnAction
        A relation fails; the exception carries both sides.
    """
    context = get_context(context)
    action.max_elems = context.config['max_elems']
    cert = ValidityCertificate('action', action.name)
    for rel in action.group.relations:
        lhs = action.word_map(rel.lhs)
        rhs = action.word_map(rel.rhs)
        for v in action.vars:
            if lhs[v] == rhs[v]:
                cert.add(str(rel), 'syntactic', var=v)
                continue
            ob = Obligation('action_relation',
                            sympy.Eq(lhs[v], rhs[v], evaluate=False),
                            symbol_domains=action.symbol_domains,
                            meta=dict(action=action.name, relation=str(rel),
                                      var=v))
            result = context.discharge(ob)
            if not result.valid:
                _raise_for(result, NotAnAction(str(rel), v, lhs[v], rhs[v]))
            cert.add(str(rel), result.method, var=v)
    action.certificate = cert
    LOGGER.info('Action %s satisfies %d relations of %s', action.name,
                len(action.group.relations), action.group.name)
    return cert


def _product_maps(a, b, group):
    kind, _, _, lnames, rnames = group.components
    maps = OrderedDict()
    for side, names in ((a, lnames), (b, rnames)):
        for g in side.group.generators:
            m = side.maps[g]
            maps[names.get(g, g)] = OrderedDict(
                (v, m[v]) for v in side.vars)
    return maps


def direct_product(a, b, context=None, name=None):
    """
    Action of ``G x H`` on the union of the acted variables

    When the variable sets overlap, every pair of generators must
    commute on the shared state.

    Raises
    ------
    NonCommutingActions
    """
    context = get_context(context)
    group = direct_product_presentation(a.group, b.group)
    signature = a.signature.merge(b.signature)
    action = GroupAction(group, signature, _product_maps(a, b, group),
                         name=name or '{0}x{1}'.format(a.name, b.name))
    cert = ValidityCertificate('commutation', action.name)
    if set(a.vars) & set(b.vars):
        la, lb = a.lift(signature), b.lift(signature)
        for g in a.group.generators:
            for h in b.group.generators:
                gh = action.compose(la.maps[g], lb.maps[h])
                hg = action.compose(lb.maps[h], la.maps[g])
                for v in signature:
                    if gh[v] == hg[v]:
                        continue
                    ob = Obligation('action_relation',
                                    sympy.Eq(gh[v], hg[v], evaluate=False),
                                    symbol_domains=signature.symbol_domains,
                                    meta=dict(action=action.name,
                                              relation='{0}*{1} = {1}*{0}'
                                              .format(g, h), var=v))
                    result = context.discharge(ob)
                    if not result.valid:
                        _raise_for(result, NonCommutingActions(g, h, v))
                    cert.add('{0}*{1} = {1}*{0}'.format(g, h), result.method,
                             var=v)
    action.certificate = cert
    return action


def free_product(a, b, name=None):
    """Action of ``G * H``: each factor acts through its own generators"""
    group = free_product_presentation(a.group, b.group)
    signature = a.signature.merge(b.signature)
    action = GroupAction(group, signature, _product_maps(a, b, group),
                         name=name or '{0}*{1}'.format(a.name, b.name))
    action.certificate = ValidityCertificate('action', action.name)
    return action


def trivial_action(group, signature, name=None):
    """Every generator acts as the identity"""
    return GroupAction(group, signature, {}, name=name or 'e_{0}'.format(
        '_'.join(signature.names) or 'empty'))


def empty_action(group, name=None):
    """Action on no variables"""
    return GroupAction(group, Signature([]), {}, name=name)


def format_map(signature, m):
    return ', '.join('{0} -> {1}'.format(v, m[v]) for v in signature
                     if m[v] != signature.alpha(v)) or 'id'


def describe_word_action(action, word):
    return '{0}: {1}'.format(format_word(word),
                             format_map(action.signature, action.word_map(word)))
