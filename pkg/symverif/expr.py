#!/usr/bin/env python
"""
Symbolic expressions over logical variables.

Expressions are plain sympy expressions. Logical variables are sympy
symbols named ``alpha_<var>`` whose assumptions follow the value domain of
the program variable they stand for. The constant pi is the symbol ``PI``
(not ``sympy.pi``) so that trigonometric terms are never evaluated to
floats or table values while rewriting; it is replaced by the real
constant only in ``evaluate``.
"""
import itertools
import logging
from collections import OrderedDict
from fractions import Fraction
from functools import partial

import mpmath
import numpy as np
import sympy
from sympy import (Abs, Add, Max, Min, Mod, Mul, Piecewise, bottom_up, cos,
                   sin, tan)
from sympy.core.relational import Relational
from sympy.logic.boolalg import Boolean, BooleanFalse, BooleanTrue
from sympy.simplify.fu import TR8

from symverif.errors import DivByZero, SymverifError, UnboundVar, UnknownVariable

LOGGER = logging.getLogger(__name__)

# high precision context for numeric values of opaque operations
MP = mpmath.MPContext()
MP.dps = 30

PI = sympy.Symbol('pi', positive=True)

ALPHA_PREFIX = 'alpha_'

TRIG = (sin, cos, tan)


class Domain(object):
    """
    Value domain of a program variable

    Parameters
    ----------
    kind : str
        One of 'Int', 'Bool', 'IntMod', 'Real' or 'RealOpen01'.
    modulus : int or None
        Modulus for 'IntMod' domains.
    """
    KINDS = ('Int', 'Bool', 'IntMod', 'Real', 'RealOpen01')

    def __init__(self, kind, modulus=None):
        if kind not in self.KINDS:
            raise ValueError('Unknown domain `{0}`'.format(kind))
        if kind == 'IntMod':
            if modulus is None or int(modulus) < 1:
                raise ValueError('IntMod needs a positive modulus')
            modulus = int(modulus)
        else:
            modulus = None
        self.kind = kind
        self.modulus = modulus

    @property
    def name(self):
        if self.kind == 'IntMod':
            return 'IntMod {0}'.format(self.modulus)
        return self.kind

    @property
    def is_integer(self):
        return self.kind in ('Int', 'Bool', 'IntMod')

    @property
    def smt_sort(self):
        return 'Int' if self.is_integer else 'Real'

    @property
    def assumptions(self):
        if self.kind == 'Int':
            return dict(integer=True)
        elif self.kind in ('Bool', 'IntMod'):
            return dict(integer=True, nonnegative=True)
        elif self.kind == 'RealOpen01':
            return dict(positive=True)
        return dict(real=True)

    def symbol(self, name):
        return sympy.Symbol(name, **self.assumptions)

    def constraint(self, sym):
        """Membership constraint of `sym` in this domain (sympy Boolean)"""
        if self.kind == 'Bool':
            return sympy.Or(sympy.Eq(sym, 0, evaluate=False),
                            sympy.Eq(sym, 1, evaluate=False))
        elif self.kind == 'IntMod':
            return sympy.And(sympy.Ge(sym, 0, evaluate=False),
                             sympy.Lt(sym, self.modulus, evaluate=False))
        elif self.kind == 'RealOpen01':
            return sympy.And(sympy.Gt(sym, 0, evaluate=False),
                             sympy.Lt(sym, 1, evaluate=False))
        return sympy.true

    def sample(self, rng):
        """Draw a random exact value of the domain"""
        if self.kind == 'Int':
            return Fraction(int(rng.randint(-20, 21)))
        elif self.kind == 'Bool':
            return Fraction(int(rng.randint(0, 2)))
        elif self.kind == 'IntMod':
            return Fraction(int(rng.randint(0, self.modulus)))
        elif self.kind == 'RealOpen01':
            return Fraction(int(rng.randint(1, 8)), 8)
        return Fraction(int(rng.randint(-40, 41)), 4)

    def normalize(self, value):
        """Bring a value computed by the program into the domain"""
        if self.kind == 'IntMod':
            return value % self.modulus
        return value

    def contains(self, value):
        if self.is_integer:
            if isinstance(value, Fraction) and value.denominator != 1:
                return False
            if not isinstance(value, Fraction) and value != int(value):
                return False
        if self.kind == 'Bool':
            return value in (0, 1)
        elif self.kind == 'IntMod':
            return 0 <= value < self.modulus
        elif self.kind == 'RealOpen01':
            return 0 < value < 1
        return True

    def __eq__(self, other):
        return (isinstance(other, Domain) and self.kind == other.kind
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __repr__(self):
        return 'Domain({0})'.format(self.name)


INT = Domain('Int')
BOOL = Domain('Bool')
REAL = Domain('Real')
REAL01 = Domain('RealOpen01')


def int_mod(n):
    return Domain('IntMod', n)


def get_domain(name, modulus=None):
    if name == 'IntMod':
        return int_mod(modulus)
    if name in Domain.KINDS:
        return Domain(name)
    raise ValueError('Unknown domain `{0}`'.format(name))


def alpha_name(var):
    return ALPHA_PREFIX + var


class Signature(object):
    """
    Domains of a set of program variables, in declaration order.

    The signature owns the naming of logical variables: variable ``v``
    is represented by the symbol ``alpha_v`` carrying the assumptions of
    its domain.
    """

    def __init__(self, domains):
        self.domains = OrderedDict(domains)

    @property
    def names(self):
        return list(self.domains.keys())

    def __contains__(self, var):
        return var in self.domains

    def __iter__(self):
        return iter(self.domains)

    def __len__(self):
        return len(self.domains)

    def domain(self, var):
        try:
            return self.domains[var]
        except KeyError:
            raise UnknownVariable(var)

    def alpha(self, var):
        return self.domain(var).symbol(alpha_name(var))

    def fresh_state(self, names=None):
        """The symbolic state mapping each variable to its logical variable"""
        names = self.names if names is None else names
        return OrderedDict((v, self.alpha(v)) for v in names)

    @property
    def symbol_domains(self):
        return dict((self.alpha(v), d) for v, d in self.domains.items())

    @property
    def moduli(self):
        return dict((self.alpha(v), d.modulus)
                    for v, d in self.domains.items() if d.kind == 'IntMod')

    def restrict(self, names):
        return Signature((v, self.domain(v)) for v in names)

    def merge(self, other):
        domains = OrderedDict(self.domains)
        for v, d in other.domains.items():
            if v in domains and domains[v] != d:
                raise ValueError('Variable `{0}` declared as {1} and {2}'
                                 .format(v, domains[v].name, d.name))
            domains[v] = d
        return Signature(domains)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.domains == other.domains

    def __repr__(self):
        return 'Signature({0})'.format(
            ', '.join('{0}: {1}'.format(v, d.name)
                      for v, d in self.domains.items()))


# Values of the interpreter are Fractions, or MP floats once an opaque
# operation has been applied.

def to_mpf(x):
    if isinstance(x, Fraction):
        return MP.mpf(x.numerator) / x.denominator
    return MP.mpf(x)


def _lift(*args):
    if any(not isinstance(a, Fraction) for a in args):
        return [to_mpf(a) for a in args]
    return list(args)


def _truth(x):
    return x != 0


def _num_div(a, b):
    if b == 0:
        raise DivByZero('Division by zero')
    a, b = _lift(a, b)
    return a / b


def _num_mod(a, b):
    if b == 0:
        raise DivByZero('Modulo by zero')
    a, b = _lift(a, b)
    return a % b


def _num_binary(fun):
    def wrapper(a, b):
        a, b = _lift(a, b)
        return fun(a, b)
    return wrapper


def _num_compare(fun):
    def wrapper(a, b):
        a, b = _lift(a, b)
        return Fraction(int(bool(fun(a, b))))
    return wrapper


def _num_trig(fun):
    def wrapper(a):
        return fun(to_mpf(a))
    return wrapper


def is_condition(e):
    """True for sympy booleans that are not also expressions (symbols are both)"""
    return isinstance(e, Boolean) and not isinstance(e, sympy.Expr)


def _sym_cond(e):
    if is_condition(e):
        return e
    return sympy.Ne(e, 0)


def _sym_value(e):
    if is_condition(e):
        return Piecewise((1, e), (0, True))
    return e


class OpSymbol(object):
    """
    An operation symbol of the expression language

    Parameters
    ----------
    name : str
        Name used in program text and reports.
    arity : int
        Number of arguments.
    kind : str
        'arith', 'compare', 'logic', 'ite' or 'opaque'.
    symbolic : callable
        Builds the sympy term from sympy arguments.
    numeric : callable
        Computes the value from interpreter values.
    smt_sorts : tuple
        Argument sorts and result sort for SMT emission.
    """

    def __init__(self, name, arity, kind, symbolic, numeric, smt_sorts):
        self.name = name
        self.arity = arity
        self.kind = kind
        self.symbolic = symbolic
        self.numeric = numeric
        self.smt_sorts = smt_sorts

    @property
    def is_opaque(self):
        return self.kind == 'opaque'

    def __repr__(self):
        return 'OpSymbol({0}/{1})'.format(self.name, self.arity)


_REAL2 = (('Real', 'Real'), 'Real')
_CMP2 = (('Real', 'Real'), 'Bool')
_BOOL2 = (('Bool', 'Bool'), 'Bool')
_REAL1 = (('Real',), 'Real')

OPS = OrderedDict((op.name, op) for op in [
    OpSymbol('add', 2, 'arith', lambda a, b: a + b,
             _num_binary(lambda a, b: a + b), _REAL2),
    OpSymbol('sub', 2, 'arith', lambda a, b: a - b,
             _num_binary(lambda a, b: a - b), _REAL2),
    OpSymbol('mul', 2, 'arith', lambda a, b: a * b,
             _num_binary(lambda a, b: a * b), _REAL2),
    OpSymbol('div', 2, 'arith', lambda a, b: a / b, _num_div, _REAL2),
    OpSymbol('mod', 2, 'arith', Mod, _num_mod, (('Int', 'Int'), 'Int')),
    OpSymbol('neg', 1, 'arith', lambda a: -a, lambda a: -a, _REAL1),
    OpSymbol('lt', 2, 'compare', sympy.Lt, _num_compare(lambda a, b: a < b), _CMP2),
    OpSymbol('le', 2, 'compare', sympy.Le, _num_compare(lambda a, b: a <= b), _CMP2),
    OpSymbol('gt', 2, 'compare', sympy.Gt, _num_compare(lambda a, b: a > b), _CMP2),
    OpSymbol('ge', 2, 'compare', sympy.Ge, _num_compare(lambda a, b: a >= b), _CMP2),
    OpSymbol('eq', 2, 'compare', sympy.Eq, _num_compare(lambda a, b: a == b), _CMP2),
    OpSymbol('ne', 2, 'compare', sympy.Ne, _num_compare(lambda a, b: a != b), _CMP2),
    OpSymbol('and', 2, 'logic', sympy.And,
             lambda a, b: Fraction(int(_truth(a) and _truth(b))), _BOOL2),
    OpSymbol('or', 2, 'logic', sympy.Or,
             lambda a, b: Fraction(int(_truth(a) or _truth(b))), _BOOL2),
    OpSymbol('not', 1, 'logic', sympy.Not,
             lambda a: Fraction(int(not _truth(a))), (('Bool',), 'Bool')),
    OpSymbol('ite', 3, 'ite', lambda c, a, b: Piecewise((a, c), (b, True)),
             lambda c, a, b: a if _truth(c) else b,
             (('Bool', 'Real', 'Real'), 'Real')),
    OpSymbol('sin', 1, 'opaque', sin, _num_trig(MP.sin), _REAL1),
    OpSymbol('cos', 1, 'opaque', cos, _num_trig(MP.cos), _REAL1),
    OpSymbol('tan', 1, 'opaque', tan, _num_trig(MP.tan), _REAL1),
    OpSymbol('abs', 1, 'opaque', Abs, abs, _REAL1),
    OpSymbol('pow3', 1, 'opaque', lambda a: a ** 3, lambda a: a ** 3, _REAL1),
])


def get_op(name):
    try:
        return OPS[name]
    except KeyError:
        raise KeyError('Unknown operation `{0}`'.format(name))


def substitute(e, env):
    """Replace logical variables in `e` according to `env`"""
    if not env:
        return e
    e = sympy.sympify(e)
    env = dict((k, sympy.sympify(v)) for k, v in env.items())
    if not e.has(Mod):
        return e.xreplace(env)
    return _rebuild(e, env)


def _rebuild(e, env):
    # sympy folds Mod(k*Mod(p, n), n) into k*Mod(p, n), which drops the
    # outer reduction; Mod nodes are rebuilt through _reduce_mod instead
    if e in env:
        return env[e]
    if not e.args:
        return e
    args = [_rebuild(a, env) for a in e.args]
    if isinstance(e, Mod) and args[1].is_Integer and args[1] > 0:
        return _reduce_mod(Mod(*args, evaluate=False), {})
    return e.func(*args)


def _gamma(exp, state, as_condition):
    kind = exp.kind
    if kind == 'num':
        value = sympy.Rational(exp.value.numerator, exp.value.denominator)
    elif kind == 'pi':
        value = PI
    elif kind == 'var':
        try:
            value = state[exp.name]
        except KeyError:
            raise UnknownVariable(exp.name)
    else:
        op = get_op(exp.op)
        if op.kind in ('compare', 'logic'):
            sub = op.kind == 'logic'
            args = [_gamma(a, state, sub) for a in exp.args]
            value = op.symbolic(*args)
        elif op.kind == 'ite':
            c, a, b = exp.args
            value = Piecewise((_gamma(a, state, False), _gamma(c, state, True)),
                              (_gamma(b, state, False), True))
        else:
            value = op.symbolic(*[_gamma(a, state, False) for a in exp.args])
    if as_condition:
        return _sym_cond(value)
    return _sym_value(value)


def gamma(exp, state):
    """
    Translate a program expression into a symbolic expression

    Parameters
    ----------
    exp : ProgramExpr
        Expression of the program language.
    state : dict
        Map from program variable names to symbolic expressions.

    Returns
    -------
    sympy.Expr
        Comparisons and boolean connectives used as values become 0/1
        valued piecewise terms.
    """
    return _gamma(exp, state, False)


def gamma_condition(exp, state):
    """Translate a program expression used as a branch condition"""
    return _gamma(exp, state, True)


def wrap_domain(value, domain):
    """Reduce a value assigned to a variable of `domain`"""
    if domain.kind == 'IntMod':
        return _reduce_mod(Mod(value, domain.modulus, evaluate=False), {})
    return value


# Rewriting

def _split_pi(arg):
    """Split `arg` into r*PI + rest with r rational"""
    r = sympy.Integer(0)
    rest = []
    for t in Add.make_args(arg):
        c, m = t.as_coeff_Mul()
        if m == PI and c.is_Rational:
            r += c
        else:
            rest.append(t)
    return r, Add(*rest)


def _reduce_mod(e, moduli):
    p, q = e.args
    if not q.is_Integer or q <= 0:
        return e
    n = int(q)
    const = sympy.Integer(0)
    terms = []
    work = list(Add.make_args(sympy.expand(p)))
    while work:
        t = work.pop(0)
        if t.is_Integer:
            const += t
            continue
        c, rest = t.as_coeff_Mul()
        if (isinstance(rest, Mod) and rest.args[1].is_Integer
                and c.is_Integer and int(rest.args[1]) % n == 0):
            work.extend(Add.make_args(sympy.expand(c * rest.args[0])))
            continue
        if c.is_Integer and rest.is_integer and abs(int(c)) >= n:
            c = sympy.Integer(int(c) % n)
            if c == 0:
                continue
            t = c * rest
        terms.append(t)
    p = Add(*terms) + (const % n)
    if p.is_Integer:
        return p % n
    if moduli.get(p) == n:
        return p
    return Mod(p, n)


def _unwrap_periodic(e):
    """sin/cos/tan(k*Mod(q, m) + ...) -> (k*q + ...) when k*m is a period"""
    func = e.func
    terms = []
    changed = False
    for t in Add.make_args(e.args[0]):
        factors = Mul.make_args(t)
        mods = [f for f in factors if isinstance(f, Mod) and f.args[1].is_Integer]
        if len(mods) == 1:
            mod = mods[0]
            coeff = Mul(*[f for f in factors if f is not mod])
            if coeff.free_symbols <= set([PI]):
                ratio = coeff * mod.args[1] / PI
                if ratio.is_Integer and (func is tan or ratio % 2 == 0):
                    t = coeff * mod.args[0]
                    changed = True
        terms.append(t)
    if changed:
        return func(Add(*terms))
    return e


def _normalize(e, moduli):
    if isinstance(e, Mod):
        return _reduce_mod(e, moduli)
    if isinstance(e, Abs) and e.args[0].could_extract_minus_sign():
        return Abs(-e.args[0])
    if isinstance(e, TRIG):
        return _unwrap_periodic(e)
    return e


def _peel_pi(e):
    """Move rational multiples of pi out of trigonometric arguments"""
    if not isinstance(e, TRIG):
        return e
    r, rest = _split_pi(e.args[0])
    if r == 0:
        return e
    if isinstance(e, tan):
        return tan(rest + (r % 1) * PI)
    r = r % 2
    sign = 1
    if r >= 1:
        r -= 1
        sign = -1
    half = sympy.Rational(1, 2)
    if isinstance(e, cos):
        if r >= half:
            return -sign * sin(rest + (r - half) * PI)
        return sign * cos(rest + r * PI)
    if r >= half:
        return sign * cos(rest + (r - half) * PI)
    return sign * sin(rest + r * PI)


def _fold_piecewise(e):
    if not isinstance(e, Piecewise):
        return e
    pieces = e.args
    if any(is_condition(x) for x, _ in pieces):
        return e
    if len(pieces) == 2 and pieces[1].cond == sympy.true:
        (e1, c), (e2, _) = pieces
        if isinstance(c, (sympy.StrictGreaterThan, sympy.GreaterThan,
                          sympy.StrictLessThan, sympy.LessThan)):
            greater = isinstance(c, (sympy.StrictGreaterThan, sympy.GreaterThan))
            a, b = c.args
            if (e1, e2) == (a, b):
                return Max(a, b) if greater else Min(a, b)
            if (e1, e2) == (b, a):
                return Min(a, b) if greater else Max(a, b)
    base = pieces[-1].expr
    if base == 0 or pieces[-1].cond != sympy.true:
        return e
    rest = [(sympy.expand(x - base), c) for x, c in pieces[:-1]]
    return base + Piecewise(*(rest + [(0, True)]))


def _has_symbolic_denominator(e):
    return any(t.as_numer_denom()[1].free_symbols for t in Add.make_args(e))


def simplify(e, moduli=None):
    """
    Rewrite `e` into canonical form

    Mod terms are reduced (and dropped around variables of the matching
    IntMod domain), periodic Mod arguments of trigonometric terms are
    unwrapped, the ring operations are expanded, products of sin/cos are
    turned into sums, rational multiples of pi are peeled out of
    trigonometric arguments, two-branch max/min piecewise terms become
    Max/Min and other piecewise terms are split into a base plus a
    piecewise offset. Rational functions are cancelled.

    Parameters
    ----------
    e : sympy.Basic
        Expression to simplify.
    moduli : dict, optional
        Map from logical variables of IntMod domains to their modulus.

    Returns
    -------
    sympy.Basic
        Simplified expression.
    """
    moduli = moduli or {}
    e = sympy.sympify(e)
    if is_condition(e):
        if not e.args:
            return e
        return e.func(*[simplify(a, moduli) for a in e.args])
    normalize = partial(_normalize, moduli=moduli)
    for _ in range(4):
        prev = e
        e = bottom_up(e, normalize)
        e = sympy.expand(e)
        if e.has(sin, cos):
            e = sympy.expand(TR8(e))
        for _ in range(3):
            peeled = sympy.expand(bottom_up(e, _peel_pi))
            if peeled == e:
                break
            e = peeled
        e = bottom_up(e, _fold_piecewise)
        e = bottom_up(e, normalize)
        if (isinstance(e, sympy.Expr) and not e.has(Piecewise)
                and _has_symbolic_denominator(e)):
            e = sympy.cancel(e)
        if e == prev:
            break
    return e


# Evaluation

def to_sympy_number(v):
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if isinstance(v, (int, np.integer)):
        return sympy.Integer(int(v))
    return sympy.Float(MP.nstr(to_mpf(v), 35), 35)


def evaluate(e, env):
    """
    Evaluate a symbolic expression over a concrete environment

    Parameters
    ----------
    e : sympy.Basic
        Expression over logical variables (and `PI`).
    env : dict
        Map from logical variable symbols to numbers.

    Returns
    -------
    Fraction, bool or mpf
        Exact rational when only interpreted operations occur, otherwise
        a 30 digit float.
    """
    e = sympy.sympify(e)
    missing = e.free_symbols - set(env) - set([PI])
    if missing:
        raise UnboundVar(sorted(str(s) for s in missing)[0])
    values = dict((k, to_sympy_number(v)) for k, v in env.items())
    values[PI] = sympy.pi
    try:
        r = e.xreplace(values)
    except ZeroDivisionError:
        raise DivByZero('Division by zero in {0}'.format(e))
    if isinstance(r, (BooleanTrue, BooleanFalse)):
        return bool(r)
    if r.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise DivByZero('Division by zero in {0}'.format(e))
    if r.is_Rational:
        return Fraction(int(r.p), int(r.q))
    n = r.evalf(30)
    if isinstance(n, (BooleanTrue, BooleanFalse)):
        return bool(n)
    if not n.is_Number:
        raise SymverifError('Cannot evaluate {0}'.format(e))
    return MP.mpf(str(n))


def values_close(a, b, tol=1e-9):
    """Exact comparison for rationals, relative/absolute `tol` otherwise"""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    a, b = to_mpf(a), to_mpf(b)
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


def sample_environment(symbols, rng, symbol_domains=None):
    """Random exact values for `symbols` respecting their domains"""
    symbol_domains = symbol_domains or {}
    env = OrderedDict()
    for s in sorted(symbols, key=str):
        if s == PI:
            continue
        domain = symbol_domains.get(s)
        if domain is None:
            domain = INT if s.is_integer else (REAL01 if s.is_positive else REAL)
        env[s] = domain.sample(rng)
    return env


def find_counterexample(e, rng, samples=16, symbol_domains=None):
    """
    Search for an environment where `e` does not evaluate to zero (or to
    true, for boolean `e`)

    Returns
    -------
    dict or None
        The offending environment.
    """
    e = sympy.sympify(e)
    symbols = e.free_symbols
    for _ in range(samples):
        env = sample_environment(symbols, rng, symbol_domains)
        try:
            value = evaluate(e, env)
        except DivByZero:
            continue
        if isinstance(value, bool):
            if not value:
                return env
        elif not values_close(value, Fraction(0)):
            return env
    return None


# Local equality decision

_SIGNS = {
    ('>', True): set('+'), ('>', False): set('-0'),
    ('>=', True): set('+0'), ('>=', False): set('-'),
    ('==', True): set('0'), ('==', False): set('-+'),
    ('!=', True): set('-+'), ('!=', False): set('0'),
}

_FLIP = {'+': '-', '-': '+', '0': '0'}


def _atom_form(atom):
    a, b = atom.args
    if isinstance(atom, sympy.StrictGreaterThan):
        return sympy.expand(a - b), '>'
    if isinstance(atom, sympy.GreaterThan):
        return sympy.expand(a - b), '>='
    if isinstance(atom, sympy.StrictLessThan):
        return sympy.expand(b - a), '>'
    if isinstance(atom, sympy.LessThan):
        return sympy.expand(b - a), '>='
    if isinstance(atom, sympy.Eq):
        return sympy.expand(a - b), '=='
    return sympy.expand(a - b), '!='


def _region(atoms, values):
    """
    Allowed signs per atom difference under a truth assignment, or None
    when the assignment is contradictory
    """
    signs = {}
    for atom, value in zip(atoms, values):
        d, op = _atom_form(atom)
        allowed = set(_SIGNS[(op, value)])
        key = d
        if (-d) in signs:
            key = -d
            allowed = set(_FLIP[s] for s in allowed)
        current = signs.get(key, set('-0+')) & allowed
        if not current:
            return None
        signs[key] = current
    return signs


def _zero_substitution(signs):
    sub = {}
    for d, allowed in signs.items():
        if allowed != set('0'):
            continue
        d = d.xreplace(sub)
        for s in sorted(d.free_symbols - set([PI]), key=str):
            coeff = sympy.expand(d.diff(s))
            if coeff != 0 and s not in coeff.free_symbols:
                sub[s] = sympy.expand(s - d / coeff)
                break
    return sub


def _case_split(diff, moduli, max_atoms):
    atoms = sorted(diff.atoms(Relational), key=sympy.default_sort_key)
    if not atoms or len(atoms) > max_atoms:
        return False
    for values in itertools.product((True, False), repeat=len(atoms)):
        signs = _region(atoms, values)
        if signs is None:
            continue
        branch = diff.xreplace(dict(
            (a, sympy.true if v else sympy.false) for a, v in zip(atoms, values)))
        branch = simplify(branch.xreplace(_zero_substitution(signs)), moduli)
        if branch != 0 and not (isinstance(branch, sympy.Expr)
                                and not branch.has(Piecewise)
                                and sympy.cancel(sympy.together(branch)) == 0):
            return False
    return True


def equal_locally(lhs, rhs, symbol_domains=None, rng=None, samples=16,
                  max_atoms=8):
    """
    Decide lhs == rhs without an external solver

    Parameters
    ----------
    lhs, rhs : sympy.Expr
        Expressions over logical variables.
    symbol_domains : dict, optional
        Domains of the logical variables (for Mod reduction and sampling).
    rng : numpy.random.RandomState, optional
        Random state for the counterexample search.
    samples : int
        Number of random environments tried.
    max_atoms : int
        Largest number of comparison atoms split on.

    Returns
    -------
    verdict : bool or None
        True if proved equal, False if a counterexample was found, None
        if undecided.
    model : dict or None
        Counterexample environment.
    method : str
        Which step decided.
    """
    symbol_domains = symbol_domains or {}
    moduli = dict((s, d.modulus) for s, d in symbol_domains.items()
                  if d.kind == 'IntMod')
    diff = simplify(sympy.sympify(lhs) - sympy.sympify(rhs), moduli)
    if diff == 0:
        return True, None, 'simplify'
    if diff.has(Piecewise) and _case_split(diff, moduli, max_atoms):
        return True, None, 'case-split'
    if not diff.has(Piecewise):
        try:
            if sympy.cancel(sympy.together(diff)) == 0:
                return True, None, 'cancel'
        except sympy.PolynomialError:
            pass
    if rng is None:
        rng = np.random.RandomState(0)
    model = find_counterexample(diff, rng, samples, symbol_domains)
    if model is not None:
        return False, model, 'sampling'
    return None, None, 'local'
