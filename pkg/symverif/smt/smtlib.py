#!/usr/bin/env python
"""
SMT-LIB v2.6 emission of obligations.

Terms are printed by a subclass of sympy's ``SMTLibPrinter``. Opaque
operations become uninterpreted functions (``sym_sin`` ...), pi becomes the
constant ``sym_pi``, integer-sorted subterms are coerced with ``to_real``
when they occur in real context.
"""
import logging

import sympy
from sympy import Abs, Mod, cos, sin, tan
from sympy.core.relational import (Equality, GreaterThan, LessThan,
                                   StrictGreaterThan, StrictLessThan)
from sympy.printing.smtlib import SMTLibPrinter

from symverif.expr import PI

LOGGER = logging.getLogger(__name__)

UNINTERPRETED = {
    sin: 'sym_sin',
    cos: 'sym_cos',
    tan: 'sym_tan',
}
PI_NAME = 'sym_pi'
RPOW_NAME = 'sym_rpow'

RELATIONS = {
    Equality: '=',
    GreaterThan: '>=',
    StrictGreaterThan: '>',
}

# a < b is printed as b > a so that both spellings give the same text
FLIPPED = {
    LessThan: GreaterThan,
    StrictLessThan: StrictGreaterThan,
}

TRIG_AXIOMS = [
    '(assert (forall ((a Real)) (= (sym_sin (- sym_pi a)) (sym_sin a))))',
    '(assert (forall ((a Real)) (= (sym_cos (- sym_pi a)) (- (sym_cos a)))))',
    '(assert (forall ((a Real)) (= (sym_sin (- a)) (- (sym_sin a)))))',
    '(assert (forall ((a Real)) (= (sym_cos (- a)) (sym_cos a))))',
    '(assert (forall ((a Real)) (= (sym_tan (- a)) (- (sym_tan a)))))',
    '(assert (forall ((a Real)) (= (+ (* (sym_sin a) (sym_sin a)) '
    '(* (sym_cos a) (sym_cos a))) 1.0)))',
]

PI_BOUNDS = '(assert (and (< 3.14159 sym_pi) (< sym_pi 3.14160)))'


def _is_int(e):
    return e.is_integer is True


class SymverifSMTPrinter(SMTLibPrinter):
    """SMT-LIB printer tracking sorts and the symbols it used"""

    def __init__(self, settings=None):
        super().__init__(settings)
        self._real = False
        self.symbols = set()
        self.functions = set()

    def _child(self, e, real):
        saved = self._real
        self._real = real
        try:
            return self._print(e)
        finally:
            self._real = saved

    def _coerce(self, text, is_int):
        if self._real and is_int:
            return '(to_real {0})'.format(text)
        return text

    def _print_Symbol(self, x):
        if x == PI:
            self.functions.add(PI_NAME)
            return PI_NAME
        self.symbols.add(x)
        return self._coerce(super()._print_Symbol(x), _is_int(x))

    def _print_Integer(self, x):
        text = str(abs(x.p)) + ('.0' if self._real else '')
        if x.p < 0:
            return '(- {0})'.format(text)
        return text

    def _print_Rational(self, x):
        text = '(/ {0}.0 {1}.0)'.format(abs(x.p), x.q)
        if x.p < 0:
            return '(- {0})'.format(text)
        return text

    def _print_Add(self, e):
        real = self._real or not _is_int(e)
        return '(+ {0})'.format(' '.join(self._child(a, real) for a in e.args))

    def _print_Mul(self, e):
        real = self._real or not _is_int(e)
        num, den = [], []
        for f in e.args:
            if f.is_Pow and f.exp.is_Integer and f.exp < 0:
                den.append(f.base ** -f.exp)
            elif f.is_Rational and f.q != 1:
                num.append(sympy.Integer(f.p))
                den.append(sympy.Integer(f.q))
            else:
                num.append(f)
        if not den:
            return '(* {0})'.format(' '.join(self._child(a, real) for a in num))
        top = self._child(sympy.Mul(*num), True)
        bottom = self._child(sympy.Mul(*den), True)
        return '(/ {0} {1})'.format(top, bottom)

    def _print_Pow(self, e):
        base, exp = e.args
        if exp.is_Integer and exp > 0:
            real = self._real or not _is_int(e)
            factors = [self._child(base, real)] * int(exp)
            if len(factors) == 1:
                return factors[0]
            return '(* {0})'.format(' '.join(factors))
        if exp.is_Integer and exp < 0:
            return '(/ 1.0 {0})'.format(self._child(base ** -exp, True))
        self.functions.add(RPOW_NAME)
        return '({0} {1} {2})'.format(RPOW_NAME, self._child(base, True),
                                      self._child(exp, True))

    def _print_Mod(self, e):
        p, q = e.args
        text = '(mod {0} {1})'.format(self._child(p, False), self._child(q, False))
        return self._coerce(text, True)

    def _print_Abs(self, e):
        real = self._real or not _is_int(e)
        a = self._child(e.args[0], real)
        zero = '0.0' if real else '0'
        return '(ite (>= {0} {1}) {0} (- {0}))'.format(a, zero)

    def _print_minmax(self, e, op):
        real = self._real or not _is_int(e)
        args = [self._child(a, real)
                for a in sorted(e.args, key=sympy.default_sort_key)]
        text = args[-1]
        for a in reversed(args[:-1]):
            text = '(ite ({0} {1} {2}) {1} {2})'.format(op, a, text)
        return text

    def _print_Max(self, e):
        return self._print_minmax(e, '>=')

    def _print_Min(self, e):
        return self._print_minmax(e, '<=')

    def _print_trig(self, e):
        name = UNINTERPRETED[type(e)]
        self.functions.add(name)
        return '({0} {1})'.format(name, self._child(e.args[0], True))

    _print_sin = _print_trig
    _print_cos = _print_trig
    _print_tan = _print_trig

    def _print_Relational(self, e):
        real = not all(_is_int(a) for a in e.args)
        kind, operands = type(e), e.args
        if kind in FLIPPED:
            kind, operands = FLIPPED[kind], operands[::-1]
        args = ' '.join(self._child(a, real) for a in operands)
        return '({0} {1})'.format(RELATIONS[kind], args)

    def _print_Unequality(self, e):
        real = not all(_is_int(a) for a in e.args)
        args = ' '.join(self._child(a, real) for a in e.args)
        return '(not (= {0}))'.format(args)

    def _print_Piecewise(self, e):
        pieces = list(e.args)
        text = self._print(pieces[-1].expr)
        for expr, cond in reversed(pieces[:-1]):
            text = '(ite {0} {1} {2})'.format(
                self._child(cond, False), self._print(expr), text)
        return text


def smt_term(e):
    """SMT-LIB text of a single term or formula"""
    return SymverifSMTPrinter()._print(sympy.sympify(e))


def _declaration(name):
    if name == PI_NAME:
        return '(declare-const {0} Real)'.format(PI_NAME)
    if name == RPOW_NAME:
        return '(declare-fun {0} (Real Real) Real)'.format(RPOW_NAME)
    return '(declare-fun {0} (Real) Real)'.format(name)


def select_logic(uses_functions, quantified):
    if quantified:
        return 'UFNIRA'
    if uses_functions:
        return 'QF_UFNIRA'
    return 'QF_NIRA'


def emit_script(ob, trig_axioms=False):
    """
    Render an obligation as an SMT-LIB script

    The universally quantified variables are declared as constants and
    the negated body is asserted, so the obligation is valid iff the
    script is unsatisfiable.

    Parameters
    ----------
    ob : Obligation
        The obligation to encode.
    trig_axioms : bool
        Assert the trigonometric identity pack as quantified axioms.

    Returns
    -------
    str
        The script text, ending in ``(check-sat)``.
    """
    printer = SymverifSMTPrinter()
    body = printer._print(ob.body)
    constraints = []
    for sym, domain in ob.universals.items():
        c = domain.constraint(sym)
        if c is not sympy.true:
            constraints.append(printer._print(c))

    symbols = set(printer.symbols) | set(ob.universals)
    functions = set(printer.functions)
    trig_used = functions & set(UNINTERPRETED.values())
    quantified = bool(trig_axioms and trig_used)
    if quantified:
        functions.update(UNINTERPRETED.values())
        functions.add(PI_NAME)

    domains = dict(ob.universals)
    lines = ['; {0} obligation'.format(ob.kind),
             '(set-option :produce-models true)',
             '(set-logic {0})'.format(select_logic(bool(functions), quantified))]
    for name in sorted(functions):
        lines.append(_declaration(name))
    for sym in sorted(symbols, key=lambda s: s.name):
        domain = domains.get(sym)
        if domain is not None:
            sort = domain.smt_sort
        else:
            sort = 'Int' if _is_int(sym) else 'Real'
        lines.append('(declare-const {0} {1})'.format(sym.name, sort))
    if PI_NAME in functions:
        lines.append(PI_BOUNDS)
    if quantified:
        lines.extend(TRIG_AXIOMS)
    for c in constraints:
        lines.append('(assert {0})'.format(c))
    lines.append('(assert (not {0}))'.format(body))
    lines.append('(check-sat)')
    return '\n'.join(lines) + '\n'
