from fractions import Fraction

import pytest

from symverif.errors import (FuelExhausted, NonVariableGuard,
                             ProgramSyntaxError, UndeclaredVariable)
from symverif.expr import Signature, int_mod
from symverif.lang.interpreter import interpret
from symverif.lang.parser import parse_expression, parse_program
from symverif.lang.syntax import (count_assignments, format_command,
                                  iter_statements, modified_vars,
                                  statement_at)

CAR = """
param T: Real
param dt: RealOpen01
var x, v, t: Real

# constant speed
for (t := 0; t < T; t := t + dt) {
    x := v * dt + x;
    v := v
}
"""


def test_parse_for_loop():
    decls, c = parse_program(CAR)
    assert [d.name for d in decls] == ['T', 'dt', 'x', 'v', 't']
    assert [d.role for d in decls][:2] == ['parameter', 'parameter']
    assert c.kind == 'for'
    assert (c.counter, c.bound, c.step) == ('t', 'T', 'dt')
    assert count_assignments(c) == 2
    assert modified_vars(c) == frozenset(['x', 'v', 't'])
    paths = [p for p, _ in iter_statements(c)]
    assert paths == ['', 'body', 'body.0', 'body.1']
    assert statement_at(c, 'body.0').var == 'x'


def test_parse_roundtrip_text():
    _, c = parse_program(CAR)
    _, again = parse_program(CAR.split('#')[0] + format_command(c))
    assert again == c


def test_empty_program_is_skip():
    _, c = parse_program('var x: Int')
    assert c.kind == 'skip'


def test_if_and_while():
    text = """
    var x, n: Int
    var b, c: Bool
    b := x > 0;
    if b then { x := 0 - x } else { skip }
    c := n > 0;
    while c do { n := n - 1; c := n > 0 }
    """
    decls, c = parse_program(text)
    paths = [p for p, _ in iter_statements(c)]
    assert '1.then' in paths and '1.else' in paths and '3.body.1' in paths
    state = {'x': Fraction(-3), 'n': Fraction(4), 'b': Fraction(0),
             'c': Fraction(0)}
    out = interpret(c, state)
    # the guard is false for negative x
    assert out['x'] == -3 and out['b'] == 0
    assert out['n'] == 0
    out = interpret(c, dict(state, x=Fraction(5)))
    assert out['x'] == -5 and out['b'] == 1
    # the input state is left alone
    assert state['x'] == -3


def test_syntax_errors_carry_location():
    with pytest.raises(ProgramSyntaxError) as info:
        parse_program('var x: Int\nx := := 1', filename='bad.sym')
    assert info.value.filename == 'bad.sym'
    assert info.value.line == 2
    assert str(info.value).startswith('bad.sym:2:')

    with pytest.raises(UndeclaredVariable) as info:
        parse_program('var x: Int\n\nx := y + 1', line_offset=10)
    assert info.value.line == 13

    with pytest.raises(NonVariableGuard):
        parse_program('var x: Int\nif x > 0 then { x := 1 }')

    with pytest.raises(ProgramSyntaxError):
        parse_program('param p: Real\np := 1')


def test_interpret_for_loop():
    _, c = parse_program(CAR)
    state = {'T': Fraction(1), 'dt': Fraction(1, 4), 'x': Fraction(0),
             'v': Fraction(2), 't': Fraction(7)}
    out = interpret(c, state)
    assert out['x'] == 2
    assert out['t'] == 1


def test_interpret_wraps_modular_variables():
    decls, c = parse_program('var theta: IntMod 360\ntheta := theta + 90')
    sig = Signature((d.name, d.domain) for d in decls)
    assert sig.domain('theta') == int_mod(360)
    out = interpret(c, {'theta': Fraction(300)}, signature=sig)
    assert out['theta'] == 30


def test_interpret_opaque_operations():
    _, c = parse_program('var x, y: Real\ny := sin(pi - x) - sin(x)')
    out = interpret(c, {'x': Fraction(1, 3), 'y': Fraction(0)})
    assert abs(out['y']) < 1e-25


def test_fuel():
    _, c = parse_program('var x: Int\nvar b: Bool\nb := 1;\n'
                         'while b do { x := x + 1 }')
    with pytest.raises(FuelExhausted):
        interpret(c, {'x': Fraction(0), 'b': Fraction(0)}, fuel=10)


def test_parse_expression():
    e = parse_expression('count1 + (v1 == 0 ? 1 : 0)')
    assert e.variables() == set(['count1', 'v1'])
    with pytest.raises(ProgramSyntaxError):
        parse_expression('1 +')


if __name__ == '__main__':
    pytest.main([__file__])
