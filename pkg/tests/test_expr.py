import warnings
from fractions import Fraction

import pytest
import sympy
from sympy import Max, Mod, Piecewise, cos, sin
from sympy.utilities.exceptions import SymPyDeprecationWarning

from symverif.errors import DivByZero, UnknownVariable
from symverif.expr import (INT, PI, REAL, REAL01, Domain, Signature,
                           equal_locally, evaluate, gamma, int_mod, simplify,
                           substitute, wrap_domain)
from symverif.lang.parser import parse_expression

x, y = sympy.symbols('alpha_x alpha_y', real=True)
t = sympy.Symbol('alpha_t', integer=True, nonnegative=True)


def test_domains():
    with pytest.raises(ValueError):
        Domain('IntMod')
    with pytest.raises(ValueError):
        Domain('Complex')
    assert int_mod(5).normalize(Fraction(7)) == 2
    assert int_mod(5).name == 'IntMod 5'
    assert not REAL01.contains(Fraction(1))
    assert REAL01.contains(Fraction(1, 2))
    assert not INT.contains(Fraction(1, 2))
    assert INT.smt_sort == 'Int' and REAL.smt_sort == 'Real'


def test_signature():
    sig = Signature([('x', REAL), ('t', int_mod(360))])
    assert sig.names == ['x', 't']
    assert 't' in sig and 'y' not in sig
    assert sig.alpha('t').is_integer
    assert sig.moduli == {sig.alpha('t'): 360}
    assert sig.restrict(['t']).names == ['t']
    with pytest.raises(UnknownVariable):
        sig.domain('y')
    with pytest.raises(ValueError):
        sig.merge(Signature([('x', INT)]))
    merged = sig.merge(Signature([('y', INT)]))
    assert merged.names == ['x', 't', 'y']


def test_gamma():
    state = {'x': x, 'y': y}
    assert gamma(parse_expression('2 * x + y'), state) == 2 * x + y
    e = gamma(parse_expression('x > y ? x : y'), state)
    assert isinstance(e, Piecewise)
    # comparisons used as values are 0/1
    b = gamma(parse_expression('x > y'), state)
    assert b.subs({x: 2, y: 1}) == 1
    with pytest.raises(UnknownVariable):
        gamma(parse_expression('z + 1'), state)


def test_substitute():
    assert substitute(x + y, {x: y}) == 2 * y
    assert substitute(sin(x), {x: Fraction(1, 2)}) == sin(sympy.Rational(1, 2))
    # simultaneous, not sequential
    assert substitute(x - y, {x: y, y: x}) == y - x
    assert substitute(x, {}) is x


def test_substitute_keeps_outer_reduction():
    mirror = Mod(359 * t, 360)
    twice = substitute(mirror, {t: mirror})
    assert simplify(twice, {t: 360}) == t
    assert substitute(Mod(t + 90, 360), {t: Mod(t + 270, 360)}) == Mod(t, 360)
    assert wrap_domain(2 * Mod(t, 360), int_mod(360)) == Mod(2 * t, 360)


def test_wrap_domain():
    assert wrap_domain(t + 90, int_mod(360)) == Mod(t + 90, 360)
    assert wrap_domain(x + 1, REAL) == x + 1


def test_simplify_pi_shifts():
    assert simplify(sin(PI - x)) == sin(x)
    assert simplify(cos(x + PI)) == -cos(x)
    assert simplify(cos(x + PI / 2)) == -sin(x)
    assert simplify(sin(x + 2 * PI)) == sin(x)


def test_simplify_modular():
    moduli = {t: 360}
    assert simplify(Mod(t + 360, 360), moduli) == t
    assert simplify(Mod(Mod(t + 90, 360) + 270, 360), moduli) == t
    # headings inside trigonometric terms lose their Mod
    e = sin(2 * PI * Mod(t + 90, 360) / 360)
    assert simplify(e, moduli) == cos(PI * t / 180)


def test_simplify_without_deprecation_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter('error', SymPyDeprecationWarning)
        assert simplify(cos(x) ** 2 + sin(x) ** 2) == 1


def test_simplify_product_to_sum():
    e = cos(x) * cos(y) - sin(x) * sin(y) - cos(x + y)
    assert simplify(e) == 0


def test_simplify_max():
    a = Piecewise((x, x > y), (y, True))
    b = Piecewise((y, y > x), (x, True))
    assert simplify(a) == Max(x, y)
    assert simplify(a - b) == 0


def test_evaluate():
    assert evaluate(2 * x + 1, {x: Fraction(3, 2)}) == Fraction(4)
    assert evaluate(sin(PI / 2) + x, {x: Fraction(1)}) == Fraction(2)
    with pytest.raises(DivByZero):
        evaluate(1 / x, {x: Fraction(0)})
    value = evaluate(cos(x), {x: Fraction(1)})
    assert abs(float(value) - 0.5403023058681398) < 1e-12


def test_equal_locally(rng):
    verdict, model, method = equal_locally(x + 1 - 1, x)
    assert verdict is True and method == 'simplify'
    verdict, model, method = equal_locally(x, x + 1, rng=rng)
    assert verdict is False and method == 'sampling'
    verdict, _, _ = equal_locally(sin(PI - x), sin(x))
    assert verdict is True


if __name__ == '__main__':
    pytest.main([__file__])
