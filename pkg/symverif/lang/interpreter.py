#!/usr/bin/env python
"""
Concrete big-step interpreter.

States map variable names to exact ``Fraction`` values; opaque operations
(trigonometric functions) switch a value to a 30 digit ``mpmath`` float.
Assignments to ``IntMod n`` variables are reduced modulo n.
"""
import logging
from collections import OrderedDict
from fractions import Fraction

from symverif.errors import FuelExhausted, UnknownVariable
from symverif.expr import MP, get_op, to_mpf

LOGGER = logging.getLogger(__name__)

DEFAULT_FUEL = 1000000

# real valued rationals beyond this size continue as floats
EXACT_BITS = 512


class Fuel(object):
    """Budget of loop iterations shared by one run"""

    def __init__(self, amount=DEFAULT_FUEL):
        self.amount = amount
        self.used = 0

    def burn(self):
        self.used += 1
        if self.used > self.amount:
            raise FuelExhausted('Program did not terminate within {0} loop '
                                'iterations'.format(self.amount))


def eval_expr(exp, state):
    """Value of a program expression in a concrete state"""
    kind = exp.kind
    if kind == 'num':
        return exp.value
    if kind == 'pi':
        return MP.pi
    if kind == 'var':
        try:
            return state[exp.name]
        except KeyError:
            raise UnknownVariable(exp.name)
    op = get_op(exp.op)
    if op.kind == 'ite':
        c, a, b = exp.args
        return eval_expr(a, state) if eval_expr(c, state) != 0 \
            else eval_expr(b, state)
    return op.numeric(*[eval_expr(a, state) for a in exp.args])


def _assign(state, var, value, signature):
    domain = None
    if signature is not None and var in signature:
        domain = signature.domain(var)
        value = domain.normalize(value)
    if (isinstance(value, Fraction) and (domain is None or not domain.is_integer)
            and max(value.numerator.bit_length(),
                    value.denominator.bit_length()) > EXACT_BITS):
        value = to_mpf(value)
    state[var] = value


def _run(c, state, signature, fuel):
    kind = c.kind
    if kind == 'skip':
        return
    if kind == 'assign':
        _assign(state, c.var, eval_expr(c.expr, state), signature)
    elif kind == 'seq':
        for s in c.commands:
            _run(s, state, signature, fuel)
    elif kind == 'if':
        branch = c.then if state[c.guard] != 0 else c.orelse
        _run(branch, state, signature, fuel)
    elif kind == 'while':
        while state[c.guard] != 0:
            fuel.burn()
            _run(c.body, state, signature, fuel)
    elif kind == 'for':
        _assign(state, c.counter, Fraction(0), signature)
        while state[c.counter] < state[c.bound]:
            fuel.burn()
            _run(c.body, state, signature, fuel)
            _assign(state, c.counter, state[c.counter] + state[c.step],
                    signature)
    else:
        raise ValueError('Unknown command `{0}`'.format(kind))


def interpret(c, state, fuel=DEFAULT_FUEL, signature=None):
    """
    Run a command

    Parameters
    ----------
    c : Command
        The program.
    state : dict
        Initial values of all variables.
    fuel : int or Fuel
        Largest number of loop iterations.
    signature : Signature, optional
        Variable domains (IntMod wrapping).

    Returns
    -------
    OrderedDict
        The final state (the input is not modified).

    Raises
    ------
    FuelExhausted, DivByZero
    """
    if not isinstance(fuel, Fuel):
        fuel = Fuel(fuel)
    out = OrderedDict(state)
    _run(c, out, signature, fuel)
    LOGGER.debug('Interpreted program with %d loop iterations', fuel.used)
    return out
